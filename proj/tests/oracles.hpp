// Test-only brute-force oracles, kept independent of the bitmask engine and
// the Jordan-Wigner code paths they verify.
#pragma once

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <random>

#include "parvqe/fermion.hpp"
#include "parvqe/pauli.hpp"
#include "parvqe/statevector.hpp"

namespace oracles {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using parvqe::PauliAxis;
using parvqe::PauliString;
using parvqe::QubitHamiltonian;

inline Matrix single_pauli_matrix(PauliAxis a) {
    Matrix m(2, 2);
    const std::complex<double> i(0, 1);
    switch (a) {
    case PauliAxis::I: m << 1, 0, 0, 1; break;
    case PauliAxis::X: m << 0, 1, 1, 0; break;
    case PauliAxis::Y: m << 0, -i, i, 0; break;
    case PauliAxis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

// Kronecker product with qubit 0 as the least significant index.
inline Matrix pauli_string_matrix(const PauliString& p) {
    Matrix m = Matrix::Identity(1, 1);
    for (size_t k = 0; k < p.size(); ++k) {
        Matrix factor = single_pauli_matrix(p.axis(k));
        Matrix next(m.rows() * 2, m.cols() * 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) = factor(r, c) * m;
        m = next;
    }
    return m;
}

inline Matrix hamiltonian_matrix(const QubitHamiltonian& h) {
    long dim = long(1) << h.n_qubits();
    Matrix m = h.identity_offset() * Matrix::Identity(dim, dim);
    for (const auto& t : h.terms()) m += t.weight * pauli_string_matrix(t.string);
    return m;
}

inline Vector to_vector(const parvqe::StateVector& psi) {
    Vector v(static_cast<long>(psi.dimension()));
    for (uint64_t i = 0; i < psi.dimension(); ++i) v(static_cast<long>(i)) = psi.amplitudes()[i];
    return v;
}

// Fock-space matrix of one ladder operator on m modes, built directly from
// occupation bitstrings with the standard fermionic parity sign.
inline Matrix ladder_matrix(uint32_t mode, bool dagger, size_t n_modes) {
    long dim = long(1) << n_modes;
    Matrix m = Matrix::Zero(dim, dim);
    for (long b = 0; b < dim; ++b) {
        bool occupied = (b >> mode) & 1;
        if (dagger == occupied) continue;
        long target = b ^ (long(1) << mode);
        uint64_t lower = static_cast<uint64_t>(b) & ((uint64_t(1) << mode) - 1);
        double sign = std::popcount(lower) % 2 ? -1.0 : 1.0;
        m(target, b) = sign;
    }
    return m;
}

inline Matrix fermion_matrix(const parvqe::FermionOperator& f, size_t n_modes) {
    long dim = long(1) << n_modes;
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& [product, coeff] : f.terms()) {
        Matrix term = Matrix::Identity(dim, dim);
        for (uint32_t i : product.create) term = term * ladder_matrix(i, true, n_modes);
        for (uint32_t i : product.annihilate) term = term * ladder_matrix(i, false, n_modes);
        m += coeff * term;
    }
    return m;
}

inline PauliString random_pauli_string(std::mt19937_64& rng, size_t n_qubits,
                                       bool allow_identity = true) {
    std::uniform_int_distribution<int> axis(0, 3);
    while (true) {
        std::vector<PauliAxis> axes(n_qubits);
        for (auto& a : axes) a = static_cast<PauliAxis>(axis(rng));
        PauliString p(std::move(axes));
        if (allow_identity || !p.is_identity()) return p;
    }
}

inline QubitHamiltonian random_hamiltonian(std::mt19937_64& rng, size_t n_qubits, size_t n_terms,
                                           double offset = 0.0) {
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    std::vector<parvqe::PauliTerm> terms;
    for (size_t i = 0; i < n_terms; ++i)
        terms.push_back({weight(rng), random_pauli_string(rng, n_qubits, false)});
    return QubitHamiltonian::from_terms(n_qubits, terms, offset);
}

inline parvqe::StateVector random_state(std::mt19937_64& rng, size_t n_qubits) {
    std::normal_distribution<double> gauss;
    std::vector<parvqe::Amplitude> amps(uint64_t(1) << n_qubits);
    double norm = 0;
    for (auto& a : amps) {
        a = {gauss(rng), gauss(rng)};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return parvqe::StateVector(n_qubits, std::move(amps));
}

}  // namespace oracles
