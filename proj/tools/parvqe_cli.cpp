// parvqe command-line front end: end-to-end runs, split planning, local MPI
// benchmarking, cutoff scanning, worker serving and Hamiltonian transforms.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>

#include <CLI11.hpp>

#include "parvqe/parvqe.hpp"

using namespace parvqe;

namespace {

struct OptimizerFlags {
    double tolerance = 1e-7;
    size_t max_iterations = 200;
    double fd_step = 1e-4;
    size_t line_search_evals = 3;

    void attach(CLI::App& cmd) {
        cmd.add_option("--tolerance", tolerance, "Convergence tolerance in Hartree");
        cmd.add_option("--max-iterations", max_iterations, "Optimizer iteration cap");
        cmd.add_option("--fd-step", fd_step, "Central-difference step in radians");
        cmd.add_option("--line-search-evals", line_search_evals,
                       "Sequential evaluations per line search");
    }
    OptimizerConfig config() const {
        return {tolerance, max_iterations, fd_step, line_search_evals};
    }
};

QubitHamiltonian load_sorted_hamiltonian(const std::string& path, IntegralTable* table_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open FCIDUMP file " + path);
    IntegralTable table = parse_fcidump(in);
    if (table_out) *table_out = table;
    return sort_terms(
        jordan_wigner(assemble_fermion_hamiltonian(table), 2 * table.n_spatial_orbitals()));
}

int cmd_run(const RunConfig& cfg) {
    RunSummary s = run_vqe(cfg);
    std::cout << "qubits:      " << s.n_qubits << "\n"
              << "terms:       " << s.terms_after_cutoff << " / " << s.terms_before_cutoff
              << " after cutoff\n"
              << "parameters:  " << s.parameter_count << "\n"
              << "cisd energy: " << format_double(s.cisd_energy) << "\n"
              << "vqe energy:  " << format_double(s.energy) << "\n"
              << "status:      " << status_name(s.status) << "\n";
    if (s.plan)
        std::cout << "plan:        x" << s.plan->partitions << "-x" << s.plan->servers << " ("
                  << format_double(s.plan->predicted_iteration_seconds) << " s predicted)\n";
    std::cout << "iterations:  " << s.trace.size() << "\n"
              << "wall:        " << format_double(s.wall_seconds) << " s\n"
              << "outputs in:  " << cfg.output_dir << "\n";
    return s.status == OptimizeStatus::Converged ? 0 : 2;
}

int cmd_plan(const std::string& bench_path, uint64_t np, uint64_t ns, uint64_t budget,
             uint64_t p_min_flag, const std::string& heatmap_path) {
    std::ifstream in(bench_path);
    if (!in) throw std::runtime_error("cannot open bench table " + bench_path);
    BenchTable bench = parse_bench_table(in);
    uint64_t p_min = p_min_flag ? p_min_flag : bench.min_partitions();
    EfficiencyModel model{np, ns};
    Plan plan = choose_plan(bench, model, budget, p_min);
    std::cout << "plan: x" << plan.partitions << "-x" << plan.servers << "\n"
              << "predicted iteration: " << format_double(plan.predicted_iteration_seconds)
              << " s\n"
              << "eps_mpi: " << format_double(plan.eps_mpi) << "\n"
              << "eps_dp:  " << format_double(plan.eps_dp) << "\n"
              << "combined efficiency: " << format_double(plan.combined_efficiency) << "\n";
    if (!heatmap_path.empty()) {
        std::ofstream out(heatmap_path);
        if (!out) throw std::runtime_error("cannot write heatmap " + heatmap_path);
        write_plan_heatmap_csv(bench, model, budget, p_min, out);
        std::cout << "heatmap written to " << heatmap_path << "\n";
    }
    return 0;
}

int cmd_bench_mpi(const std::string& fcidump_path, uint64_t max_partitions, uint64_t repeats,
                  const std::string& output_path) {
    IntegralTable table(1, 0);
    QubitHamiltonian h = load_sorted_hamiltonian(fcidump_path, &table);
    auto [energy, cisd] = exact_diagonalize(h, table.n_electrons(), DiagMode::CISD);
    (void)energy;
    auto selected = select_excitations(cisd, AnsatzConfig{0.0});
    AnsatzCircuit circ = build_circuit(selected, h.n_qubits(), table.n_electrons());
    std::vector<double> theta = initial_parameters(cisd, selected);

    BenchTable bench;
    for (uint64_t p = 1; p <= max_partitions && p <= (uint64_t(1) << h.n_qubits()); p <<= 1) {
        double best = 1e300;
        for (uint64_t r = 0; r < repeats; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            PartitionedState state =
                scatter(init_basis_state(circ.n_qubits, circ.reference_index), p);
            apply_ansatz(circ, theta, state);
            volatile double e = state.expectation_hamiltonian(h);
            (void)e;
            best = std::min(best,
                            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                .count());
        }
        bench.set(p, std::max(best, 1e-9));
    }
    if (output_path.empty()) {
        serialize_bench_table(bench, std::cout);
    } else {
        std::ofstream out(output_path);
        if (!out) throw std::runtime_error("cannot write bench table " + output_path);
        serialize_bench_table(bench, out);
        std::cout << "bench table written to " << output_path << "\n";
    }
    return 0;
}

int cmd_cutoff_scan(const std::string& fcidump_path, double delta_e, double th2,
                    const OptimizerFlags& opt, const std::string& report_path) {
    IntegralTable table(1, 0);
    QubitHamiltonian full = load_sorted_hamiltonian(fcidump_path, &table);
    auto [cisd_energy, cisd] = exact_diagonalize(full, table.n_electrons(), DiagMode::CISD);
    (void)cisd_energy;
    auto selected = select_excitations(cisd, AnsatzConfig{th2});
    AnsatzCircuit circ = build_circuit(selected, full.n_qubits(), table.n_electrons());
    std::vector<double> theta0 = initial_parameters(cisd, selected);
    OptimizerConfig ocfg = opt.config();

    VqeRunner runner = [&](const QubitHamiltonian& cut) {
        ObjectiveSpec obj;
        obj.parameter_count = circ.gates.size();
        obj.evaluate = [&](const std::vector<double>& theta) {
            return prepare_state(circ, theta).expectation_hamiltonian(cut);
        };
        LocalExecutor exec(obj);
        OptimizeResult r = optimize(obj, theta0, ocfg, exec);
        if (r.status == OptimizeStatus::Failed) throw std::runtime_error("optimization failed");
        return r.energy;
    };
    CutoffScanReport report = cutoff_scan(full, runner, delta_e);
    write_cutoff_report_csv(report, std::cout);
    std::cout << "recommended retained fraction: "
              << format_double(report.recommended_retained_fraction)
              << (report.aborted ? " (scan aborted early)" : "") << "\n";
    double th1 = report.recommended_retained_fraction < 1.0
                     ? threshold_for_fraction(full, report.recommended_retained_fraction)
                     : 0.0;
    std::cout << "equivalent th1 on this Hamiltonian: " << format_double(th1) << "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write report " + report_path);
        write_cutoff_report_csv(report, out);
    }
    return report.aborted ? 2 : 0;
}

int cmd_worker(const std::string& listen) {
    Endpoint ep = parse_endpoint(listen);
    WorkerServer server(ep.host, ep.port);
    std::cout << "worker listening on " << ep.host << ":" << server.port() << std::endl;
    server.run();
    std::cout << "worker shut down\n";
    return 0;
}

int cmd_transform(const std::string& fcidump_path, const std::string& output_path, double th1) {
    QubitHamiltonian h = load_sorted_hamiltonian(fcidump_path, nullptr);
    if (th1 > 0) h = cutoff_by_threshold(h, th1);
    if (output_path.empty()) {
        serialize_hamiltonian(h, std::cout);
    } else {
        std::ofstream out(output_path);
        if (!out) throw std::runtime_error("cannot write " + output_path);
        serialize_hamiltonian(h, out);
        std::cout << h.term_count() << " terms written to " << output_path << "\n";
    }
    return 0;
}

// Flat key=value config support. File values fill in any option the command
// line did not set, so flags always override the file. Keys are the long
// option names without the leading dashes (e.g. "retained-fraction").
void apply_config_file(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    size_t lineno = 0;
    std::set<std::string> seen_in_file;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = CLI::detail::trim_copy(line);
        if (line.empty()) continue;
        auto where = path + ":" + std::to_string(lineno) + ": ";
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error(where + "expected key=value");
        std::string key = CLI::detail::trim_copy(line.substr(0, eq));
        std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
        CLI::Option* opt = key == "config" ? nullptr : cmd.get_option_no_throw("--" + key);
        if (!opt) throw std::runtime_error(where + "unknown config key '" + key + "'");
        // a repeated file key appends (for list-valued options like workers)
        if (opt->count() > 0 && !seen_in_file.count(key)) continue;
        opt->add_result(value);
        opt->run_callback();
        seen_in_file.insert(key);
    }
}

void require_set(const std::string& value, const std::string& flag) {
    if (value.empty())
        throw std::runtime_error(flag + " is required (set it as a flag or a config key)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational quantum eigensolver toolkit: partitioned state-vector engine, "
                 "Hamiltonian cutoff, split planning and a coordinator/worker runtime"};
    app.require_subcommand(1);

    // every subcommand accepts a flat key=value config file; flags override it
    std::map<CLI::App*, std::string> config_paths;
    auto add_config = [&config_paths](CLI::App* cmd) {
        cmd->add_option("--config", config_paths[cmd],
                        "Flat key=value config file; flags override file values");
    };
    auto load_config = [&config_paths](CLI::App* cmd) {
        if (!config_paths[cmd].empty()) apply_config_file(*cmd, config_paths[cmd]);
    };

    // run
    auto* run = app.add_subcommand("run", "End-to-end VQE on an FCIDUMP fixture");
    add_config(run);
    RunConfig run_cfg;
    double run_th1 = -1.0, run_fraction = -1.0;
    OptimizerFlags run_opt;
    run->add_option("--fcidump", run_cfg.fcidump_path, "FCIDUMP input path");
    run->add_option("--th1", run_th1, "Hamiltonian weight cutoff threshold");
    run->add_option("--retained-fraction", run_fraction,
                    "Fraction of sorted terms to keep (alternative to --th1)");
    run->add_option("--th2", run_cfg.th2, "CI-coefficient threshold for ansatz gates");
    run->add_option("--workers", run_cfg.workers, "Worker endpoints host:port (repeatable)");
    run->add_option("--plan", run_cfg.plan, "Split plan: empty or 'auto' (needs --bench)");
    run->add_option("--bench", run_cfg.bench_path, "Bench table for plan=auto");
    run->add_option("--node-budget", run_cfg.node_budget, "Node budget for plan=auto");
    run->add_option("--output", run_cfg.output_dir, "Output directory");
    run->add_option("--seed", run_cfg.seed, "Run seed recorded in outputs");
    run_opt.attach(*run);

    // plan
    auto* plan = app.add_subcommand("plan", "Choose an MPI x distributed split from a bench table");
    add_config(plan);
    std::string plan_bench, plan_heatmap;
    uint64_t plan_np = 10, plan_ns = 3, plan_budget = 8, plan_pmin = 0;
    plan->add_option("--bench", plan_bench, "Bench table path");
    plan->add_option("--np", plan_np, "Parallel evaluations per iteration");
    plan->add_option("--ns", plan_ns, "Sequential evaluations per iteration");
    plan->add_option("--node-budget", plan_budget, "Total node budget");
    plan->add_option("--p-min", plan_pmin, "Minimum partition count (default: bench minimum)");
    plan->add_option("--heatmap", plan_heatmap, "Write the full (p,s) heatmap CSV here");

    // bench-mpi
    auto* bench = app.add_subcommand("bench-mpi",
                                     "Time one circuit execution per partition count locally");
    add_config(bench);
    std::string bench_fcidump, bench_output;
    uint64_t bench_max = 8, bench_repeats = 3;
    bench->add_option("--fcidump", bench_fcidump, "FCIDUMP input path");
    bench->add_option("--max-partitions", bench_max, "Largest power-of-two partition count");
    bench->add_option("--repeats", bench_repeats, "Timing repeats per partition count");
    bench->add_option("--output", bench_output, "Bench table output path (default stdout)");

    // cutoff-scan
    auto* scan = app.add_subcommand("cutoff-scan",
                                    "Search the largest safe Hamiltonian cutoff ratio");
    add_config(scan);
    std::string scan_fcidump, scan_report;
    double scan_delta = 1.6e-3, scan_th2 = 0.0;
    OptimizerFlags scan_opt;
    scan->add_option("--fcidump", scan_fcidump, "FCIDUMP input path");
    scan->add_option("--delta-e", scan_delta, "Tolerated energy error in Hartree");
    scan->add_option("--th2", scan_th2, "CI-coefficient threshold for ansatz gates");
    scan->add_option("--report", scan_report, "Also write the scan CSV here");
    scan_opt.attach(*scan);

    // worker
    auto* worker = app.add_subcommand("worker", "Serve circuit evaluations over TCP");
    add_config(worker);
    std::string worker_listen = "127.0.0.1:7777";
    worker->add_option("--listen", worker_listen, "Listen address host:port")
        ->envname("PARVQE_WORKER_LISTEN");

    // transform
    auto* transform = app.add_subcommand("transform",
                                         "FCIDUMP to sorted Pauli-Hamiltonian text");
    add_config(transform);
    std::string tf_fcidump, tf_output;
    double tf_th1 = 0.0;
    transform->add_option("--fcidump", tf_fcidump, "FCIDUMP input path");
    transform->add_option("--th1", tf_th1, "Optional weight cutoff before writing");
    transform->add_option("--output", tf_output, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            load_config(run);
            require_set(run_cfg.fcidump_path, "--fcidump");
            if (run_th1 >= 0) run_cfg.th1 = run_th1;
            if (run_fraction >= 0) run_cfg.retained_fraction = run_fraction;
            if (!run_cfg.th1 && !run_cfg.retained_fraction) run_cfg.retained_fraction = 1.0;
            run_cfg.optimizer = run_opt.config();
            return cmd_run(run_cfg);
        }
        if (*plan) {
            load_config(plan);
            require_set(plan_bench, "--bench");
            return cmd_plan(plan_bench, plan_np, plan_ns, plan_budget, plan_pmin, plan_heatmap);
        }
        if (*bench) {
            load_config(bench);
            require_set(bench_fcidump, "--fcidump");
            return cmd_bench_mpi(bench_fcidump, bench_max, bench_repeats, bench_output);
        }
        if (*scan) {
            load_config(scan);
            require_set(scan_fcidump, "--fcidump");
            return cmd_cutoff_scan(scan_fcidump, scan_delta, scan_th2, scan_opt, scan_report);
        }
        if (*worker) {
            load_config(worker);
            return cmd_worker(worker_listen);
        }
        if (*transform) {
            load_config(transform);
            require_set(tf_fcidump, "--fcidump");
            return cmd_transform(tf_fcidump, tf_output, tf_th1);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
