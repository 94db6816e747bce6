#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "pauli.hpp"        // format_double
#include "partitioned.hpp"  // is_power_of_two

namespace parvqe {

/// Per-iteration evaluation profile: N_p independent circuit runs plus N_s
/// strictly sequential ones.
struct EfficiencyModel {
    uint64_t n_parallel = 0;    // N_p
    uint64_t n_sequential = 0;  // N_s
};

/// Measured seconds per single circuit execution, keyed by power-of-two
/// partition count.
class BenchTable {
  public:
    void set(uint64_t partitions, double seconds) {
        if (!is_power_of_two(partitions))
            throw std::invalid_argument("BenchTable: partition count must be a power of two");
        if (!(seconds > 0)) throw std::invalid_argument("BenchTable: time must be positive");
        times_[partitions] = seconds;
    }
    double at(uint64_t partitions) const {
        auto it = times_.find(partitions);
        if (it == times_.end())
            throw std::out_of_range("BenchTable: no entry for partition count " +
                                    std::to_string(partitions));
        return it->second;
    }
    bool contains(uint64_t partitions) const { return times_.count(partitions) > 0; }
    uint64_t min_partitions() const {
        if (times_.empty()) throw std::runtime_error("BenchTable: empty");
        return times_.begin()->first;
    }
    const std::map<uint64_t, double>& entries() const { return times_; }

  private:
    std::map<uint64_t, double> times_;
};

struct AmdahlResult {
    double speedup;
    double efficiency;
};

/// Eqs. of Amdahl's law: S = (Np+Ns)/(Np/n + Ns), eps = (Np+Ns)/(Np + Ns*n).
inline AmdahlResult amdahl(uint64_t n_p, uint64_t n_s, uint64_t n) {
    if (n < 1) throw std::invalid_argument("amdahl: n must be >= 1");
    double np = static_cast<double>(n_p), ns = static_cast<double>(n_s);
    double total = np + ns;
    return {total / (np / static_cast<double>(n) + ns),
            total / (np + ns * static_cast<double>(n))};
}

inline uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

/// eps_DP = (Np+Ns) / (s * ceil(Np/s + Ns)); with integer Ns the ceiling acts
/// on Np/s alone.
inline double dp_efficiency(uint64_t n_p, uint64_t n_s, uint64_t servers) {
    if (servers < 1) throw std::invalid_argument("dp_efficiency: servers must be >= 1");
    double total = static_cast<double>(n_p + n_s);
    return total / (static_cast<double>(servers) *
                    static_cast<double>(ceil_div(n_p, servers) + n_s));
}

/// Distributed-processing speedup with the same per-server workload model.
inline double dp_speedup(uint64_t n_p, uint64_t n_s, uint64_t servers) {
    if (servers < 1) throw std::invalid_argument("dp_speedup: servers must be >= 1");
    return static_cast<double>(n_p + n_s) / static_cast<double>(ceil_div(n_p, servers) + n_s);
}

/// eps_MPI(p) = (t(p_min)/t(p)) / (p/p_min): measured speedup over the minimum
/// configuration divided by the parallelism ratio.
inline double mpi_efficiency(const BenchTable& bench, uint64_t partitions) {
    uint64_t p_min = bench.min_partitions();
    double speedup = bench.at(p_min) / bench.at(partitions);
    double ratio = static_cast<double>(partitions) / static_cast<double>(p_min);
    return speedup / ratio;
}

/// t(p) * (ceil(Np/s) + Ns): parallel evaluations round-robin across s
/// servers, sequential ones run on one server while the others idle.
inline double predict_iteration_time(const BenchTable& bench, uint64_t partitions,
                                     uint64_t servers, const EfficiencyModel& model) {
    return bench.at(partitions) *
           static_cast<double>(ceil_div(model.n_parallel, servers) + model.n_sequential);
}

struct Plan {
    uint64_t partitions = 1;
    uint64_t servers = 1;
    double predicted_iteration_seconds = 0.0;
    double eps_mpi = 1.0;
    double eps_dp = 1.0;
    double combined_efficiency = 1.0;
};

/// Enumerate all power-of-two (p, s) with p >= p_min and p*s <= budget,
/// minimizing predicted iteration time. Ties break toward smaller p*s, then
/// smaller p.
inline Plan choose_plan(const BenchTable& bench, const EfficiencyModel& model,
                        uint64_t node_budget, uint64_t p_min) {
    if (!is_power_of_two(p_min)) throw std::invalid_argument("choose_plan: p_min not a power of two");
    if (node_budget < p_min) throw std::invalid_argument("choose_plan: budget below p_min");
    bool found = false;
    Plan best;
    for (uint64_t p = p_min; p <= node_budget; p <<= 1) {
        if (!bench.contains(p)) continue;
        for (uint64_t s = 1; p * s <= node_budget; s <<= 1) {
            Plan cand;
            cand.partitions = p;
            cand.servers = s;
            cand.predicted_iteration_seconds = predict_iteration_time(bench, p, s, model);
            cand.eps_mpi = mpi_efficiency(bench, p);
            cand.eps_dp = dp_efficiency(model.n_parallel, model.n_sequential, s);
            cand.combined_efficiency = cand.eps_mpi * cand.eps_dp;
            auto key = [](const Plan& pl) {
                return std::tuple(pl.predicted_iteration_seconds, pl.partitions * pl.servers,
                                  pl.partitions);
            };
            if (!found || key(cand) < key(best)) {
                best = cand;
                found = true;
            }
        }
    }
    if (!found) throw std::runtime_error("choose_plan: no feasible (p, s) split");
    return best;
}

// ---- file formats ---------------------------------------------------------
// Bench table: lines `p t_seconds`, `#` comments.

inline BenchTable parse_bench_table(std::istream& is) {
    BenchTable bench;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        uint64_t p;
        double t;
        if (!(ls >> p)) continue;
        if (!(ls >> t))
            throw std::runtime_error("bench table parse: missing time at line " +
                                     std::to_string(lineno));
        bench.set(p, t);
    }
    return bench;
}

inline BenchTable parse_bench_table(const std::string& text) {
    std::istringstream is(text);
    return parse_bench_table(is);
}

inline void serialize_bench_table(const BenchTable& bench, std::ostream& os) {
    for (const auto& [p, t] : bench.entries()) os << p << " " << format_double(t) << "\n";
}

/// Heatmap CSV, one row per feasible (p, s) split.
inline void write_plan_heatmap_csv(const BenchTable& bench, const EfficiencyModel& model,
                                   uint64_t node_budget, uint64_t p_min, std::ostream& os) {
    os << "partitions,servers,predicted_iteration_seconds,eps_mpi,eps_dp,combined_efficiency\n";
    for (uint64_t p = p_min; p <= node_budget; p <<= 1) {
        if (!bench.contains(p)) continue;
        for (uint64_t s = 1; p * s <= node_budget; s <<= 1) {
            os << p << "," << s << ","
               << format_double(predict_iteration_time(bench, p, s, model)) << ","
               << format_double(mpi_efficiency(bench, p)) << ","
               << format_double(dp_efficiency(model.n_parallel, model.n_sequential, s)) << ","
               << format_double(mpi_efficiency(bench, p) *
                                dp_efficiency(model.n_parallel, model.n_sequential, s))
               << "\n";
        }
    }
}

}  // namespace parvqe
