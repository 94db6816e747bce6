#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "pauli.hpp"

namespace parvqe {

using Amplitude = std::complex<double>;

// P|b> = pauli_basis_phase(P, b) |b ^ x_mask>
inline Amplitude pauli_basis_phase(size_t y_count, uint64_t yz_mask, uint64_t basis) {
    static const Amplitude i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Amplitude phase = i_pow[y_count % 4];
    if (std::popcount(basis & yz_mask) % 2) phase = -phase;
    return phase;
}

/// Full 2^n complex state vector, little-endian basis indexing (qubit k <-> bit k).
/// Exactly one writer at a time; gate application mutates in place.
class StateVector {
  public:
    StateVector(size_t n_qubits, uint64_t basis_index) : n_qubits_(n_qubits) {
        if (n_qubits >= 40) throw std::invalid_argument("StateVector: qubit count too large");
        if (basis_index >= dimension())
            throw std::out_of_range("StateVector: basis index out of range");
        amps_.assign(dimension(), Amplitude(0));
        amps_[basis_index] = Amplitude(1);
    }

    explicit StateVector(size_t n_qubits, std::vector<Amplitude> amps)
        : n_qubits_(n_qubits), amps_(std::move(amps)) {
        if (amps_.size() != dimension())
            throw std::invalid_argument("StateVector: amplitude count != 2^n");
    }

    size_t n_qubits() const { return n_qubits_; }
    uint64_t dimension() const { return uint64_t(1) << n_qubits_; }
    const std::vector<Amplitude>& amplitudes() const { return amps_; }
    std::vector<Amplitude>& amplitudes() { return amps_; }

    /// Amplitude storage in bytes: 2^(n+4).
    uint64_t memory_bytes() const { return dimension() * sizeof(Amplitude); }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    /// psi <- exp(-i (theta/2) P) psi = cos(theta/2) psi - i sin(theta/2) P psi
    void apply_pauli_rotation(const PauliString& p, double theta) {
        if (p.size() != n_qubits_)
            throw std::invalid_argument("apply_pauli_rotation: string length mismatch");
        const double c = std::cos(theta / 2), s = std::sin(theta / 2);
        const Amplitude mis(0, -s);  // -i sin(theta/2)
        const uint64_t x = p.x_mask(), yz = p.yz_mask();
        const size_t ny = p.y_count();
        if (x == 0) {
            // Diagonal string: per-basis phase only.
            for (uint64_t b = 0; b < dimension(); ++b)
                amps_[b] *= c + mis * pauli_basis_phase(ny, yz, b);
            return;
        }
        for (uint64_t b = 0; b < dimension(); ++b) {
            uint64_t bx = b ^ x;
            if (bx < b) continue;  // handle each pair once
            Amplitude a0 = amps_[b], a1 = amps_[bx];
            amps_[b] = c * a0 + mis * pauli_basis_phase(ny, yz, bx) * a1;
            amps_[bx] = c * a1 + mis * pauli_basis_phase(ny, yz, b) * a0;
        }
    }

    /// <psi|P|psi>, guaranteed real for a Pauli observable. Fixed summation
    /// order (basis index) keeps results reproducible.
    double expectation_pauli(const PauliString& p) const {
        if (p.size() != n_qubits_)
            throw std::invalid_argument("expectation_pauli: string length mismatch");
        const uint64_t x = p.x_mask(), yz = p.yz_mask();
        const size_t ny = p.y_count();
        Amplitude acc(0);
        for (uint64_t b = 0; b < dimension(); ++b) {
            uint64_t bx = b ^ x;
            acc += std::conj(amps_[b]) * pauli_basis_phase(ny, yz, bx) * amps_[bx];
        }
        return acc.real();
    }

    double expectation_hamiltonian(const QubitHamiltonian& h) const {
        if (h.n_qubits() != n_qubits_)
            throw std::invalid_argument("expectation_hamiltonian: qubit count mismatch");
        double e = h.identity_offset();
        for (const auto& t : h.terms()) e += t.weight * expectation_pauli(t.string);
        return e;
    }

  private:
    size_t n_qubits_;
    std::vector<Amplitude> amps_;
};

inline StateVector init_basis_state(size_t n_qubits, uint64_t index) {
    return StateVector(n_qubits, index);
}

// Debug amplitude dump: 8-byte little-endian qubit count, then 2^n
// little-endian complex doubles (re, im).
inline void dump_state(const StateVector& psi, std::ostream& os) {
    uint64_t n = psi.n_qubits();
    os.write(reinterpret_cast<const char*>(&n), 8);
    os.write(reinterpret_cast<const char*>(psi.amplitudes().data()),
             static_cast<std::streamsize>(psi.memory_bytes()));
}

inline StateVector load_state(std::istream& is) {
    uint64_t n = 0;
    is.read(reinterpret_cast<char*>(&n), 8);
    if (!is || n >= 40) throw std::runtime_error("load_state: bad header");
    std::vector<Amplitude> amps(uint64_t(1) << n);
    is.read(reinterpret_cast<char*>(amps.data()),
            static_cast<std::streamsize>(amps.size() * sizeof(Amplitude)));
    if (!is) throw std::runtime_error("load_state: truncated amplitude data");
    return StateVector(static_cast<size_t>(n), std::move(amps));
}

}  // namespace parvqe
