#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "fcidump.hpp"
#include "pauli.hpp"

namespace parvqe {

/// One ladder operator: spin-orbital index plus dagger flag.
struct LadderOp {
    uint32_t index;
    bool dagger;
    friend auto operator<=>(const LadderOp&, const LadderOp&) = default;
};

/// Normal-ordered product: all creations before annihilations, indices
/// strictly increasing within each group.
struct LadderProduct {
    std::vector<uint32_t> create;
    std::vector<uint32_t> annihilate;
    friend auto operator<=>(const LadderProduct&, const LadderProduct&) = default;
};

/// Real-coefficient sum of normal-ordered ladder products. Arbitrary products
/// are brought to normal order on insertion via the fermionic anticommutation
/// relations; the scalar part lives in the empty product.
class FermionOperator {
  public:
    FermionOperator() = default;

    void add_scalar(double c) { terms_[LadderProduct{}] += c; }

    void add_product(const std::vector<LadderOp>& ops, double coeff) {
        if (coeff == 0.0) return;
        normal_order_into(ops, coeff);
    }

    const std::map<LadderProduct, double>& terms() const { return terms_; }

    uint32_t max_index() const {
        uint32_t m = 0;
        for (const auto& [p, c] : terms_) {
            for (uint32_t i : p.create) m = std::max(m, i + 1);
            for (uint32_t i : p.annihilate) m = std::max(m, i + 1);
        }
        return m;
    }

    FermionOperator& operator+=(const FermionOperator& other) {
        for (const auto& [p, c] : other.terms_) terms_[p] += c;
        return *this;
    }

  private:
    // Recursive reordering: swap adjacent out-of-order operators, branching on
    // the contraction term when {a_i, a_i^dagger} = 1 fires.
    void normal_order_into(std::vector<LadderOp> ops, double coeff) {
        for (size_t i = 0; i + 1 < ops.size(); ++i) {
            const LadderOp &a = ops[i], &b = ops[i + 1];
            bool out_of_order =
                (!a.dagger && b.dagger) ||
                (a.dagger && b.dagger && a.index > b.index) ||
                (!a.dagger && !b.dagger && a.index > b.index);
            if (a.dagger == b.dagger && a.index == b.index) return;  // a a or a+ a+ = 0
            if (!out_of_order) continue;
            if (a.dagger == b.dagger) {
                std::swap(ops[i], ops[i + 1]);
                normal_order_into(std::move(ops), -coeff);
                return;
            }
            // a_i a_j^dagger = delta_ij - a_j^dagger a_i
            if (a.index == b.index) {
                std::vector<LadderOp> contracted(ops.begin(), ops.begin() + static_cast<long>(i));
                contracted.insert(contracted.end(), ops.begin() + static_cast<long>(i) + 2,
                                  ops.end());
                normal_order_into(std::move(contracted), coeff);
            }
            std::swap(ops[i], ops[i + 1]);
            normal_order_into(std::move(ops), -coeff);
            return;
        }
        LadderProduct p;
        for (const auto& op : ops)
            (op.dagger ? p.create : p.annihilate).push_back(op.index);
        terms_[p] += coeff;
    }

    std::map<LadderProduct, double> terms_;
};

/// H = sum_pq h_pq a_p+ a_q + (1/2) sum (pq|rs) a_p+ a_r+ a_s a_q over spin
/// orbitals, plus the scalar core energy.
///
/// Index bookkeeping: the table stores chemist (pq|rs) over spatial orbitals,
/// where p,q share electron 1 and r,s share electron 2. The physicist-ordered
/// two-body operator is (1/2) sum_{pqrs,st} (pq|rs) a+_{p s} a+_{r t} a_{s t}
/// a_{q s} -- i.e. chemist (pq|rs) pairs creation p with annihilation q and
/// creation r with annihilation s, each pair spin-diagonal.
/// Spin orbitals are interleaved: spatial orbital i (1-based) maps to qubits
/// 2(i-1) (alpha) and 2(i-1)+1 (beta).
inline FermionOperator assemble_fermion_hamiltonian(const IntegralTable& t) {
    FermionOperator h;
    h.add_scalar(t.core_energy());
    const size_t n = t.n_spatial_orbitals();
    auto so = [](size_t spatial_1based, uint32_t spin) {
        return static_cast<uint32_t>(2 * (spatial_1based - 1) + spin);
    };
    for (size_t p = 1; p <= n; ++p)
        for (size_t q = 1; q <= n; ++q) {
            double v = t.one_body(p, q);
            if (v == 0.0) continue;
            for (uint32_t s = 0; s < 2; ++s)
                h.add_product({{so(p, s), true}, {so(q, s), false}}, v);
        }
    for (size_t p = 1; p <= n; ++p)
        for (size_t q = 1; q <= n; ++q)
            for (size_t r = 1; r <= n; ++r)
                for (size_t s = 1; s <= n; ++s) {
                    double v = t.two_body(p, q, r, s);
                    if (v == 0.0) continue;
                    for (uint32_t sp = 0; sp < 2; ++sp)
                        for (uint32_t tp = 0; tp < 2; ++tp)
                            h.add_product({{so(p, sp), true},
                                           {so(r, tp), true},
                                           {so(s, tp), false},
                                           {so(q, sp), false}},
                                          0.5 * v);
                }
    return h;
}

/// a_p -> (X_p + iY_p)/2 (x) Z-string on qubits < p; dagger flips the sign of
/// the Y part.
inline std::map<PauliString, std::complex<double>> jw_ladder(uint32_t p, bool dagger,
                                                             size_t n_qubits) {
    PauliString with_x(n_qubits), with_y(n_qubits);
    for (uint32_t k = 0; k < p; ++k) {
        with_x.set_axis(k, PauliAxis::Z);
        with_y.set_axis(k, PauliAxis::Z);
    }
    with_x.set_axis(p, PauliAxis::X);
    with_y.set_axis(p, PauliAxis::Y);
    std::complex<double> y_coeff(0, dagger ? -0.5 : 0.5);
    return {{with_x, {0.5, 0}}, {with_y, y_coeff}};
}

inline std::map<PauliString, std::complex<double>>
jordan_wigner_complex(const FermionOperator& f, size_t n_qubits) {
    std::map<PauliString, std::complex<double>> result;
    for (const auto& [product, coeff] : f.terms()) {
        std::map<PauliString, std::complex<double>> acc = {
            {PauliString::identity(n_qubits), {coeff, 0}}};
        std::vector<LadderOp> ops;
        for (uint32_t i : product.create) ops.push_back({i, true});
        for (uint32_t i : product.annihilate) ops.push_back({i, false});
        for (const auto& op : ops) {
            if (op.index >= n_qubits)
                throw std::invalid_argument("jordan_wigner: index exceeds qubit count");
            auto ladder = jw_ladder(op.index, op.dagger, n_qubits);
            std::map<PauliString, std::complex<double>> next;
            for (const auto& [pa, ca] : acc)
                for (const auto& [pb, cb] : ladder) {
                    auto [phase, prod] = pauli_multiply(pa, pb);
                    next[prod] += ca * cb * phase;
                }
            acc = std::move(next);
        }
        for (const auto& [p, c] : acc) result[p] += c;
    }
    return result;
}

/// Map a Hermitian fermionic operator to a real-coefficient qubit Hamiltonian.
inline QubitHamiltonian jordan_wigner(const FermionOperator& f, size_t n_qubits = 0,
                                      double imag_tolerance = 1e-12) {
    if (n_qubits == 0) n_qubits = f.max_index();
    auto complex_terms = jordan_wigner_complex(f, n_qubits);
    std::vector<PauliTerm> terms;
    double offset = 0.0;
    for (const auto& [p, c] : complex_terms) {
        if (std::abs(c.imag()) > imag_tolerance)
            throw std::runtime_error("jordan_wigner: residual imaginary coefficient " +
                                     std::to_string(c.imag()) + " (non-Hermitian input?)");
        if (c.real() == 0.0) continue;
        if (p.is_identity())
            offset += c.real();
        else
            terms.push_back({c.real(), p});
    }
    return QubitHamiltonian::from_terms(n_qubits, terms, offset);
}

/// Computational-basis index of the Hartree-Fock determinant: the n_electrons
/// lowest spin-orbital qubits occupied.
inline uint64_t hf_reference_index(size_t n_qubits, size_t n_electrons) {
    if (n_electrons > n_qubits)
        throw std::invalid_argument("hf_reference_index: more electrons than qubits");
    return (n_electrons == 64) ? ~uint64_t(0) : (uint64_t(1) << n_electrons) - 1;
}

}  // namespace parvqe
