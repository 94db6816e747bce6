#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pauli.hpp"

namespace parvqe {

struct CutoffScanRow {
    double retained_fraction = 1.0;
    double cutoff_ratio = 0.0;  // 1 - retained_fraction
    size_t term_count = 0;
    double energy = 0.0;
    double abs_error = 0.0;  // vs. the full (ratio 1.0) run
    double rel_error = 0.0;
};

struct CutoffScanReport {
    std::vector<CutoffScanRow> rows;
    double recommended_retained_fraction = 1.0;
    bool aborted = false;  // VQE failure mid-scan; rows hold the partial result
};

/// Runs full VQE on the retained Hamiltonian; throws on failure.
using VqeRunner = std::function<double(const QubitHamiltonian&)>;

inline std::pair<double, double> error_report(double e_cut, double e_full) {
    if (!std::isfinite(e_cut) || !std::isfinite(e_full))
        throw std::invalid_argument("error_report: non-finite input");
    double abs_err = std::abs(e_cut - e_full);
    if (e_full == 0.0)
        throw std::invalid_argument("error_report: relative error undefined for e_full = 0");
    return {abs_err, abs_err / std::abs(e_full)};
}

/// Cutoff-ratio search: run VQE at retained fractions 1.0, 0.9, ..., 0.1 and
/// recommend the last fraction before the error first reaches delta_e (or 0.1
/// if it never does). Each fraction re-optimizes independently.
inline CutoffScanReport cutoff_scan(const QubitHamiltonian& h_small, const VqeRunner& run_vqe,
                                    double delta_e) {
    if (!(delta_e > 0)) throw std::invalid_argument("cutoff_scan: delta_e must be positive");
    CutoffScanReport report;
    double e_full = 0.0;
    for (int tenths = 10; tenths >= 1; --tenths) {
        double fraction = tenths / 10.0;
        QubitHamiltonian cut = retain_fraction(h_small, fraction);
        CutoffScanRow row;
        row.retained_fraction = fraction;
        row.cutoff_ratio = (10 - tenths) / 10.0;
        row.term_count = cut.term_count();
        try {
            row.energy = run_vqe(cut);
        } catch (const std::exception&) {
            report.aborted = true;
            report.recommended_retained_fraction = fraction == 1.0 ? 1.0 : fraction + 0.1;
            return report;
        }
        if (tenths == 10) e_full = row.energy;
        auto [abs_err, rel_err] = error_report(row.energy, e_full);
        row.abs_error = abs_err;
        row.rel_error = rel_err;
        report.rows.push_back(row);
        if (abs_err >= delta_e) {
            report.recommended_retained_fraction = fraction + 0.1;
            return report;
        }
    }
    report.recommended_retained_fraction = 0.1;
    return report;
}

/// Inverts retain_fraction as a concrete threshold on a larger Hamiltonian:
/// th1 is the midpoint between the k-th and (k+1)-th sorted magnitudes, where
/// k = round-half-up(N * fraction). fraction = 1 maps to th1 = 0.
inline double threshold_for_fraction(const QubitHamiltonian& h_large, double retained_fraction) {
    if (!(retained_fraction > 0.0 && retained_fraction <= 1.0))
        throw std::invalid_argument("threshold_for_fraction: fraction must be in (0, 1]");
    if (retained_fraction == 1.0) return 0.0;
    const auto& terms = h_large.terms();
    const size_t n = terms.size();
    size_t k = round_half_up_count(n, retained_fraction);
    if (k == 0) throw std::invalid_argument("threshold_for_fraction: fraction retains zero terms");
    for (size_t i = 0; i + 1 < n; ++i)
        if (std::abs(terms[i].weight) < std::abs(terms[i + 1].weight))
            throw std::invalid_argument("threshold_for_fraction: Hamiltonian not sorted");
    if (k >= n) return 0.0;
    double wk = std::abs(terms[k - 1].weight);
    double wk1 = std::abs(terms[k].weight);
    if (wk == wk1)
        throw std::runtime_error(
            "threshold_for_fraction: fraction not realizable exactly (degenerate magnitudes)");
    return (wk + wk1) / 2.0;
}

/// Report CSV, Table-2 / Fig-8 style: both the retained and cut senses of
/// "ratio" are carried to avoid ambiguity.
inline void write_cutoff_report_csv(const CutoffScanReport& report, std::ostream& os) {
    os << "retained_fraction,cutoff_ratio,terms,energy,abs_error,rel_error\n";
    for (const auto& r : report.rows)
        os << format_double(r.retained_fraction) << "," << format_double(r.cutoff_ratio) << ","
           << r.term_count << "," << format_double(r.energy) << "," << format_double(r.abs_error)
           << "," << format_double(r.rel_error) << "\n";
}

}  // namespace parvqe
