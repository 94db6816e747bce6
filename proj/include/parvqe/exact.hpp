#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fermion.hpp"
#include "pauli.hpp"
#include "statevector.hpp"

namespace parvqe {

enum class DiagMode { FCI, CISD };

using SingleKey = std::pair<uint32_t, uint32_t>;  // occupied -> virtual
using OrbPair = std::pair<uint32_t, uint32_t>;    // ascending spin-orbital pair
using DoubleKey = std::pair<OrbPair, OrbPair>;    // occupied pair -> virtual pair

/// Normalized ground-state CI coefficients keyed by excitation from the HF
/// reference, with the global phase fixed so the reference coefficient is
/// positive.
struct CisdResult {
    double reference_coefficient = 0.0;
    std::map<SingleKey, double> singles;
    std::map<DoubleKey, double> doubles;
    double energy = 0.0;
};

namespace detail {

inline std::vector<uint64_t> bits_of(uint64_t mask) {
    std::vector<uint64_t> out;
    while (mask) {
        out.push_back(static_cast<uint64_t>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

}  // namespace detail

/// Lowest eigenstate of h restricted to the fixed-particle-number determinant
/// sector (CISD mode further restricts to {HF, singles, doubles}).
inline std::pair<double, CisdResult> exact_diagonalize(const QubitHamiltonian& h,
                                                       size_t n_electrons, DiagMode mode) {
    const size_t n = h.n_qubits();
    if (n > 16) throw std::invalid_argument("exact_diagonalize: qubit count over desk-scale guard");
    if (n_electrons > n)
        throw std::invalid_argument("exact_diagonalize: more electrons than qubits");
    const uint64_t ref = hf_reference_index(n, n_electrons);

    std::vector<uint64_t> basis;
    for (uint64_t b = 0; b < (uint64_t(1) << n); ++b) {
        if (static_cast<size_t>(std::popcount(b)) != n_electrons) continue;
        if (mode == DiagMode::CISD && std::popcount(b ^ ref) > 4) continue;
        basis.push_back(b);
    }
    if (basis.empty()) throw std::runtime_error("exact_diagonalize: empty determinant sector");

    std::map<uint64_t, size_t> index_of;
    for (size_t i = 0; i < basis.size(); ++i) index_of[basis[i]] = i;

    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<long>(basis.size()),
                                                  static_cast<long>(basis.size()));
    for (size_t col = 0; col < basis.size(); ++col) {
        uint64_t b = basis[col];
        mat(static_cast<long>(col), static_cast<long>(col)) += h.identity_offset();
        for (const auto& t : h.terms()) {
            uint64_t bx = b ^ t.string.x_mask();
            auto it = index_of.find(bx);
            if (it == index_of.end()) continue;
            Amplitude phase = pauli_basis_phase(t.string.y_count(), t.string.yz_mask(), b);
            mat(static_cast<long>(it->second), static_cast<long>(col)) += t.weight * phase;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("exact_diagonalize: eigensolver failed");
    long ground = 0;
    solver.eigenvalues().minCoeff(&ground);
    double energy = solver.eigenvalues()(ground);
    Eigen::VectorXcd vec = solver.eigenvectors().col(ground);

    // Rotate the (arbitrary) global phase onto the largest-magnitude entry,
    // then real coefficients are exact for a real-symmetric sector matrix.
    long biggest = 0;
    vec.cwiseAbs().maxCoeff(&biggest);
    vec *= std::abs(vec(biggest)) / vec(biggest);

    CisdResult result;
    result.energy = energy;
    auto ref_it = index_of.find(ref);
    double c0 = (ref_it != index_of.end()) ? vec(static_cast<long>(ref_it->second)).real() : 0.0;
    if (c0 < 0) {
        vec = -vec;
        c0 = -c0;
    }
    result.reference_coefficient = c0;
    for (size_t i = 0; i < basis.size(); ++i) {
        uint64_t b = basis[i];
        uint64_t diff = b ^ ref;
        int dist = std::popcount(diff);
        if (dist == 0 || dist > 4) continue;
        auto removed = detail::bits_of(diff & ref);   // occupied in ref, empty in b
        auto added = detail::bits_of(diff & ~ref);    // empty in ref, occupied in b
        double c = vec(static_cast<long>(i)).real();
        if (dist == 2) {
            result.singles[{static_cast<uint32_t>(removed[0]), static_cast<uint32_t>(added[0])}] =
                c;
        } else if (removed.size() == 2 && added.size() == 2) {
            DoubleKey key{{static_cast<uint32_t>(removed[0]), static_cast<uint32_t>(removed[1])},
                          {static_cast<uint32_t>(added[0]), static_cast<uint32_t>(added[1])}};
            result.doubles[key] = c;
        }
    }
    return {energy, result};
}

}  // namespace parvqe
