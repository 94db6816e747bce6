#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "cutoff.hpp"
#include "dispatch.hpp"
#include "exact.hpp"
#include "fcidump.hpp"
#include "fermion.hpp"
#include "optimizer.hpp"
#include "pauli.hpp"
#include "planner.hpp"
#include "statevector.hpp"

namespace parvqe {

struct PipelineError : std::runtime_error {
    std::string stage;
    PipelineError(std::string stage_, const std::string& what)
        : std::runtime_error("[" + stage_ + "] " + what), stage(std::move(stage_)) {}
};

struct RunConfig {
    std::string fcidump_path;
    std::optional<double> th1;                // exactly one of th1 /
    std::optional<double> retained_fraction;  // retained_fraction must be set
    double th2 = 0.0;
    OptimizerConfig optimizer;
    std::vector<std::string> workers;  // host:port endpoints; empty = local run
    std::string plan = "";             // "auto" requires bench_path
    std::string bench_path;
    uint64_t node_budget = 8;
    std::string output_dir = ".";
    uint64_t seed = 0;
};

struct RunSummary {
    double energy = 0.0;
    OptimizeStatus status = OptimizeStatus::Failed;
    std::vector<double> theta;
    size_t terms_before_cutoff = 0;
    size_t terms_after_cutoff = 0;
    size_t n_qubits = 0;
    size_t parameter_count = 0;
    double cisd_energy = 0.0;
    std::optional<Plan> plan;
    double wall_seconds = 0.0;
    std::vector<IterationRecord> trace;
};

namespace detail {

template <class F>
auto stage(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

}  // namespace detail

/// Full pipeline: FCIDUMP -> fermionic H -> Jordan-Wigner -> sort -> cutoff
/// -> CISD seeding -> ansatz -> optimize; writes trace CSV, result record and
/// a summary into output_dir.
inline RunSummary run_vqe(const RunConfig& cfg) {
    auto t_start = std::chrono::steady_clock::now();
    RunSummary summary;

    if (cfg.th1.has_value() == cfg.retained_fraction.has_value())
        throw PipelineError("config", "exactly one of th1 / retained_fraction must be set");

    IntegralTable table = detail::stage("input", [&] {
        std::ifstream in(cfg.fcidump_path);
        if (!in) throw std::runtime_error("cannot open FCIDUMP file " + cfg.fcidump_path);
        return parse_fcidump(in);
    });

    QubitHamiltonian full = detail::stage("hamiltonian", [&] {
        FermionOperator f = assemble_fermion_hamiltonian(table);
        return sort_terms(jordan_wigner(f, 2 * table.n_spatial_orbitals()));
    });
    summary.n_qubits = full.n_qubits();
    summary.terms_before_cutoff = full.term_count();

    QubitHamiltonian cut = detail::stage("cutoff", [&] {
        return cfg.th1 ? cutoff_by_threshold(full, *cfg.th1)
                       : retain_fraction(full, *cfg.retained_fraction);
    });
    summary.terms_after_cutoff = cut.term_count();

    auto [cisd_energy, cisd] = detail::stage("cisd", [&] {
        return exact_diagonalize(full, table.n_electrons(), DiagMode::CISD);
    });
    summary.cisd_energy = cisd_energy;

    AnsatzCircuit circuit = detail::stage("ansatz", [&] {
        auto selected = select_excitations(cisd, AnsatzConfig{cfg.th2});
        AnsatzCircuit c = build_circuit(selected, full.n_qubits(), table.n_electrons());
        c.theta0 = initial_parameters(cisd, selected);
        return c;
    });
    summary.parameter_count = circuit.gates.size();

    if (cfg.plan == "auto") {
        summary.plan = detail::stage("plan", [&] {
            std::ifstream in(cfg.bench_path);
            if (!in) throw std::runtime_error("plan=auto requires a readable bench table");
            BenchTable bench = parse_bench_table(in);
            // per iteration: one 2*N_p gradient batch plus <= N_s line-search evals
            EfficiencyModel model{2 * summary.parameter_count,
                                  cfg.optimizer.line_search_max_evals};
            return choose_plan(bench, model, cfg.node_budget, bench.min_partitions());
        });
    }

    OptimizeResult opt = detail::stage("optimize", [&] {
        ObjectiveSpec obj;
        obj.parameter_count = circuit.gates.size();
        obj.evaluate = [&circuit, &cut](const std::vector<double>& theta) {
            StateVector psi = prepare_state(circuit, theta);
            return psi.expectation_hamiltonian(cut);
        };
        if (cfg.workers.empty()) {
            LocalExecutor exec(obj);
            return optimize(obj, circuit.theta0, cfg.optimizer, exec);
        }
        WorkerRegistry registry;
        for (const auto& w : cfg.workers) registry.add(parse_endpoint(w));
        registry.connect_all();
        registry.load_problem(serialize_hamiltonian(cut), serialize_circuit(circuit));
        RemoteExecutor exec(registry);
        OptimizeResult r = optimize(obj, circuit.theta0, cfg.optimizer, exec);
        registry.shutdown_all();
        return r;
    });

    summary.energy = opt.energy;
    summary.status = opt.status;
    summary.theta = opt.theta;
    summary.trace = opt.trace;
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    detail::stage("output", [&] {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.output_dir);
        {
            std::ofstream trace(fs::path(cfg.output_dir) / "trace.csv");
            write_trace_csv(opt.trace, trace);
        }
        {
            std::ofstream result(fs::path(cfg.output_dir) / "result.txt");
            result << "energy: " << format_double(opt.energy) << "\n";
            result << "status: " << status_name(opt.status) << "\n";
            result << "theta:";
            for (double t : opt.theta) result << " " << format_double(t);
            result << "\n";
        }
        {
            std::ofstream out(fs::path(cfg.output_dir) / "summary.txt");
            out << "qubits: " << summary.n_qubits << "\n";
            out << "terms_before_cutoff: " << summary.terms_before_cutoff << "\n";
            out << "terms_after_cutoff: " << summary.terms_after_cutoff << "\n";
            out << "parameters: " << summary.parameter_count << "\n";
            out << "cisd_energy: " << format_double(summary.cisd_energy) << "\n";
            out << "energy: " << format_double(summary.energy) << "\n";
            out << "status: " << status_name(summary.status) << "\n";
            if (summary.plan)
                out << "plan: x" << summary.plan->partitions << "-x" << summary.plan->servers
                    << " predicted_iteration_seconds "
                    << format_double(summary.plan->predicted_iteration_seconds) << "\n";
            out << "workers: " << cfg.workers.size() << "\n";
            out << "wall_seconds: " << format_double(summary.wall_seconds) << "\n";
        }
        return 0;
    });

    return summary;
}

}  // namespace parvqe
