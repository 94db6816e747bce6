#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "statevector.hpp"

namespace parvqe {

inline bool is_power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// Per-worker amplitude storage: 2^(n - log2 W + 4) bytes.
inline uint64_t memory_per_worker(size_t n_qubits, uint64_t worker_count) {
    if (!is_power_of_two(worker_count))
        throw std::invalid_argument("memory_per_worker: worker count must be a power of two");
    size_t k = static_cast<size_t>(std::countr_zero(worker_count));
    if (k > n_qubits)
        throw std::invalid_argument("memory_per_worker: more workers than amplitudes");
    return uint64_t(1) << (n_qubits - k + 4);
}

/// Smallest power-of-two worker count whose per-worker slice fits the budget.
inline uint64_t min_workers(size_t n_qubits, uint64_t per_worker_budget_bytes) {
    if (per_worker_budget_bytes < 16)
        throw std::invalid_argument("min_workers: budget below one amplitude");
    uint64_t w = 1;
    while (memory_per_worker(n_qubits, w) > per_worker_budget_bytes) {
        if (w == (uint64_t(1) << n_qubits))
            throw std::runtime_error("min_workers: state does not fit even fully split");
        w <<= 1;
    }
    return w;
}

/// Rank r owns global indices whose top k bits equal r (W = 2^k workers).
struct PartitionLayout {
    size_t n_qubits = 0;
    uint64_t worker_count = 1;
    uint64_t rank = 0;

    size_t high_bits() const { return static_cast<size_t>(std::countr_zero(worker_count)); }
    size_t low_bits() const { return n_qubits - high_bits(); }
    uint64_t slice_length() const { return uint64_t(1) << low_bits(); }
    uint64_t global_base() const { return rank << low_bits(); }

    friend bool operator==(const PartitionLayout&, const PartitionLayout&) = default;
};

struct LocalSlice {
    PartitionLayout layout;
    std::vector<Amplitude> amplitudes;
};

/// Emulated rank group. Ranks interact only through explicit slice-exchange
/// messages at gate boundaries; every exchanged byte is counted so MPI-style
/// efficiency can be measured rather than modeled.
class PartitionedState {
  public:
    PartitionedState(std::vector<LocalSlice> slices) : slices_(std::move(slices)) {
        if (slices_.empty()) throw std::invalid_argument("PartitionedState: no slices");
        for (uint64_t r = 0; r < slices_.size(); ++r) {
            const auto& l = slices_[r].layout;
            if (l.worker_count != slices_.size() || l.rank != r ||
                l.n_qubits != slices_[0].layout.n_qubits ||
                slices_[r].amplitudes.size() != l.slice_length())
                throw std::invalid_argument("PartitionedState: inconsistent slice layouts");
        }
    }

    size_t n_qubits() const { return slices_[0].layout.n_qubits; }
    uint64_t worker_count() const { return slices_.size(); }
    const std::vector<LocalSlice>& slices() const { return slices_; }
    uint64_t bytes_exchanged() const { return bytes_exchanged_; }
    void reset_byte_counter() { bytes_exchanged_ = 0; }

    void apply_pauli_rotation(const PauliString& p, double theta) {
        if (p.size() != n_qubits())
            throw std::invalid_argument("apply_pauli_rotation: string length mismatch");
        const size_t m = slices_[0].layout.low_bits();
        const uint64_t x = p.x_mask(), yz = p.yz_mask();
        const size_t ny = p.y_count();
        const uint64_t x_low = x & ((uint64_t(1) << m) - 1);
        const uint64_t x_high = x >> m;
        const double c = std::cos(theta / 2), s = std::sin(theta / 2);
        const Amplitude mis(0, -s);

        if (x_high == 0) {
            // All flips confined to local bits: each rank updates independently.
            for (auto& slice : slices_) {
                const uint64_t base = slice.layout.global_base();
                auto& a = slice.amplitudes;
                if (x_low == 0) {
                    for (uint64_t j = 0; j < a.size(); ++j)
                        a[j] *= c + mis * pauli_basis_phase(ny, yz, base | j);
                } else {
                    for (uint64_t j = 0; j < a.size(); ++j) {
                        uint64_t jx = j ^ x_low;
                        if (jx < j) continue;
                        Amplitude a0 = a[j], a1 = a[jx];
                        a[j] = c * a0 + mis * pauli_basis_phase(ny, yz, base | jx) * a1;
                        a[jx] = c * a1 + mis * pauli_basis_phase(ny, yz, base | j) * a0;
                    }
                }
            }
            return;
        }

        // A flip on a high qubit pairs rank r with rank r ^ x_high; each rank
        // receives its partner's slice, then rewrites its own.
        std::vector<std::vector<Amplitude>> received(slices_.size());
        for (uint64_t r = 0; r < slices_.size(); ++r) {
            uint64_t partner = r ^ x_high;
            received[r] = exchange_receive(partner);
        }
        for (uint64_t r = 0; r < slices_.size(); ++r) {
            auto& slice = slices_[r];
            const uint64_t partner_base = (r ^ x_high) << m;
            for (uint64_t j = 0; j < slice.amplitudes.size(); ++j) {
                uint64_t global_bx = partner_base | (j ^ x_low);
                slice.amplitudes[j] = c * slice.amplitudes[j] +
                                      mis * pauli_basis_phase(ny, yz, global_bx) *
                                          received[r][j ^ x_low];
            }
        }
    }

    /// Matches the single-engine expectation on the gathered state; partial
    /// sums are reduced in rank order for determinism.
    double expectation_pauli(const PauliString& p) {
        if (p.size() != n_qubits())
            throw std::invalid_argument("expectation_pauli: string length mismatch");
        const size_t m = slices_[0].layout.low_bits();
        const uint64_t x = p.x_mask(), yz = p.yz_mask();
        const size_t ny = p.y_count();
        const uint64_t x_low = x & ((uint64_t(1) << m) - 1);
        const uint64_t x_high = x >> m;

        Amplitude total(0);
        for (uint64_t r = 0; r < slices_.size(); ++r) {
            const auto& a = slices_[r].amplitudes;
            const uint64_t base = slices_[r].layout.global_base();
            Amplitude partial(0);
            if (x_high == 0) {
                for (uint64_t j = 0; j < a.size(); ++j)
                    partial += std::conj(a[j]) *
                               pauli_basis_phase(ny, yz, base | (j ^ x_low)) * a[j ^ x_low];
            } else {
                std::vector<Amplitude> partner = exchange_receive(r ^ x_high);
                const uint64_t partner_base = (r ^ x_high) << m;
                for (uint64_t j = 0; j < a.size(); ++j)
                    partial += std::conj(a[j]) *
                               pauli_basis_phase(ny, yz, partner_base | (j ^ x_low)) *
                               partner[j ^ x_low];
            }
            total += partial;
        }
        return total.real();
    }

    double expectation_hamiltonian(const QubitHamiltonian& h) {
        if (h.n_qubits() != n_qubits())
            throw std::invalid_argument("expectation_hamiltonian: qubit count mismatch");
        double e = h.identity_offset();
        for (const auto& t : h.terms()) e += t.weight * expectation_pauli(t.string);
        return e;
    }

  private:
    // In-process stand-in for an inter-rank message; counts payload bytes the
    // way a wire transfer would.
    std::vector<Amplitude> exchange_receive(uint64_t from_rank) {
        bytes_exchanged_ += slices_[from_rank].amplitudes.size() * sizeof(Amplitude);
        return slices_[from_rank].amplitudes;
    }

    std::vector<LocalSlice> slices_;
    uint64_t bytes_exchanged_ = 0;
};

inline PartitionedState scatter(const StateVector& psi, uint64_t worker_count) {
    if (!is_power_of_two(worker_count))
        throw std::invalid_argument("scatter: worker count must be a power of two");
    if (worker_count > psi.dimension())
        throw std::invalid_argument("scatter: more workers than amplitudes");
    std::vector<LocalSlice> slices(worker_count);
    for (uint64_t r = 0; r < worker_count; ++r) {
        PartitionLayout l{psi.n_qubits(), worker_count, r};
        auto begin = psi.amplitudes().begin() + static_cast<long>(r * l.slice_length());
        slices[r] = {l, std::vector<Amplitude>(begin, begin + static_cast<long>(l.slice_length()))};
    }
    return PartitionedState(std::move(slices));
}

inline StateVector gather(const PartitionedState& state) {
    std::vector<Amplitude> amps;
    amps.reserve(uint64_t(1) << state.n_qubits());
    for (const auto& slice : state.slices())
        amps.insert(amps.end(), slice.amplitudes.begin(), slice.amplitudes.end());
    return StateVector(state.n_qubits(), std::move(amps));
}

}  // namespace parvqe
