#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "exact.hpp"
#include "fermion.hpp"
#include "pauli.hpp"
#include "statevector.hpp"

namespace parvqe {

enum class ExcitationKind : uint8_t { Single, Double };

/// One S or D gate: spin-orbital excitation with its CI coefficient.
struct ExcitationOp {
    ExcitationKind kind;
    // Single: create[0] <- annihilate[0]. Double: (create[0],create[1]) <-
    // (annihilate[0],annihilate[1]), both pairs ascending.
    std::array<uint32_t, 2> create{0, 0};
    std::array<uint32_t, 2> annihilate{0, 0};
    double ci_coefficient = 0.0;
    size_t parameter_index = 0;
};

struct AnsatzConfig {
    double th2 = 0.0;  // CI-coefficient magnitude threshold for inclusion
};

/// Commuting Pauli-rotation factorization of one excitation exponential:
/// gate(theta) = prod_k exp(-i (theta * coefficient_k / 2) P_k).
struct GateDecomposition {
    std::vector<std::pair<PauliString, double>> rotations;
};

struct AnsatzCircuit {
    size_t n_qubits = 0;
    size_t n_electrons = 0;
    uint64_t reference_index = 0;
    std::vector<ExcitationOp> gates;          // all S first, then all D; applied in order
    std::vector<double> theta0;               // one parameter per gate
    std::vector<GateDecomposition> rotation_decomposition;
};

/// Every single/double excitation with |c| >= th2, singles before doubles,
/// each block sorted by descending |c| then index order.
inline std::vector<ExcitationOp> select_excitations(const CisdResult& cisd,
                                                    const AnsatzConfig& cfg) {
    std::vector<ExcitationOp> singles, doubles;
    for (const auto& [key, c] : cisd.singles) {
        if (c == 0.0 || std::abs(c) < cfg.th2) continue;
        ExcitationOp op;
        op.kind = ExcitationKind::Single;
        op.annihilate[0] = key.first;
        op.create[0] = key.second;
        op.ci_coefficient = c;
        singles.push_back(op);
    }
    for (const auto& [key, c] : cisd.doubles) {
        if (c == 0.0 || std::abs(c) < cfg.th2) continue;
        ExcitationOp op;
        op.kind = ExcitationKind::Double;
        op.annihilate = {key.first.first, key.first.second};
        op.create = {key.second.first, key.second.second};
        op.ci_coefficient = c;
        doubles.push_back(op);
    }
    auto by_magnitude = [](const ExcitationOp& a, const ExcitationOp& b) {
        double ma = std::abs(a.ci_coefficient), mb = std::abs(b.ci_coefficient);
        if (ma != mb) return ma > mb;
        if (a.annihilate != b.annihilate) return a.annihilate < b.annihilate;
        return a.create < b.create;
    };
    std::sort(singles.begin(), singles.end(), by_magnitude);
    std::sort(doubles.begin(), doubles.end(), by_magnitude);
    singles.insert(singles.end(), doubles.begin(), doubles.end());
    for (size_t i = 0; i < singles.size(); ++i) singles[i].parameter_index = i;
    return singles;
}

/// theta0_i = arctan(c_i / c_0): exact amplitude split for an isolated
/// excitation, first-order correct in general.
inline std::vector<double> initial_parameters(const CisdResult& cisd,
                                              const std::vector<ExcitationOp>& selected) {
    if (cisd.reference_coefficient == 0.0)
        throw std::invalid_argument("initial_parameters: degenerate reference (c0 = 0)");
    std::vector<double> theta0;
    theta0.reserve(selected.size());
    for (const auto& op : selected)
        theta0.push_back(std::atan(op.ci_coefficient / cisd.reference_coefficient));
    return theta0;
}

namespace detail {

inline FermionOperator excitation_generator(const ExcitationOp& op) {
    FermionOperator g;
    if (op.kind == ExcitationKind::Single) {
        g.add_product({{op.create[0], true}, {op.annihilate[0], false}}, 1.0);
        g.add_product({{op.annihilate[0], true}, {op.create[0], false}}, -1.0);
    } else {
        g.add_product({{op.create[0], true},
                       {op.create[1], true},
                       {op.annihilate[1], false},
                       {op.annihilate[0], false}},
                      1.0);
        g.add_product({{op.annihilate[0], true},
                       {op.annihilate[1], true},
                       {op.create[1], false},
                       {op.create[0], false}},
                      -1.0);
    }
    return g;
}

}  // namespace detail

/// Expand each excitation into its commuting Pauli-rotation factorization.
/// The fermionic-ordering sign is folded into the rotation coefficients so
/// that <excited|G|ref> = +1 in the basis-state convention, which makes
/// theta0 = arctan(c/c0) exact for an isolated excitation.
inline AnsatzCircuit build_circuit(const std::vector<ExcitationOp>& selected, size_t n_qubits,
                                   size_t n_electrons) {
    AnsatzCircuit circ;
    circ.n_qubits = n_qubits;
    circ.n_electrons = n_electrons;
    circ.reference_index = hf_reference_index(n_qubits, n_electrons);
    circ.gates = selected;

    for (const auto& op : selected) {
        for (uint32_t i : op.create)
            if (i >= n_qubits) throw std::out_of_range("build_circuit: index out of qubit range");
        for (uint32_t i : op.annihilate)
            if (i >= n_qubits) throw std::out_of_range("build_circuit: index out of qubit range");

        // Anti-Hermitian generator G = T - T^dagger; JW image is i * (real
        // coefficients) over mutually commuting strings.
        auto jw = jordan_wigner_complex(detail::excitation_generator(op), n_qubits);

        uint64_t moved = 0;
        size_t arity = op.kind == ExcitationKind::Single ? 1 : 2;
        for (size_t i = 0; i < arity; ++i)
            moved |= (uint64_t(1) << op.create[i]) | (uint64_t(1) << op.annihilate[i]);
        uint64_t excited = circ.reference_index ^ moved;

        // <excited|G|ref>: sums the Pauli terms that map ref onto excited.
        std::complex<double> bracket(0);
        for (const auto& [p, c] : jw)
            if ((circ.reference_index ^ p.x_mask()) == excited)
                bracket += c * pauli_basis_phase(p.y_count(), p.yz_mask(), circ.reference_index);
        double sign = bracket.real() >= 0 ? 1.0 : -1.0;

        GateDecomposition dec;
        for (const auto& [p, c] : jw) {
            if (std::abs(c.real()) > 1e-12)
                throw std::runtime_error("build_circuit: generator JW image not anti-Hermitian");
            double ck = c.imag() * sign;  // G = i * sum ck Pk
            if (ck == 0.0) continue;
            // exp(theta * i * ck * Pk) = exp(-i ((-2 ck * theta)/2) Pk)
            dec.rotations.emplace_back(p, -2.0 * ck);
        }
        for (size_t a = 0; a < dec.rotations.size(); ++a)
            for (size_t b = a + 1; b < dec.rotations.size(); ++b)
                if (!dec.rotations[a].first.commutes_with(dec.rotations[b].first))
                    throw std::logic_error("build_circuit: decomposition terms do not commute");
        circ.rotation_decomposition.push_back(std::move(dec));
    }
    circ.theta0.assign(circ.gates.size(), 0.0);
    return circ;
}

/// Apply the circuit's rotations to an already-prepared engine state.
template <class Engine>
void apply_ansatz(const AnsatzCircuit& circ, const std::vector<double>& theta, Engine& engine) {
    if (theta.size() != circ.gates.size())
        throw std::invalid_argument("apply_ansatz: parameter count mismatch");
    for (size_t g = 0; g < circ.gates.size(); ++g)
        for (const auto& [p, coeff] : circ.rotation_decomposition[g].rotations)
            engine.apply_pauli_rotation(p, coeff * theta[g]);
}

/// psi(theta) = U(theta) |HF> on a fresh single-process engine.
inline StateVector prepare_state(const AnsatzCircuit& circ, const std::vector<double>& theta) {
    StateVector psi = init_basis_state(circ.n_qubits, circ.reference_index);
    apply_ansatz(circ, theta, psi);
    return psi;
}

// ---- circuit text format --------------------------------------------------
// Header `qubits: n` / `electrons: m`, then one line per gate:
// `S <p> <q> <theta0>` for p<-q, `D <p> <q> <r> <s> <theta0>` for (p,q)<-(r,s).

inline void serialize_circuit(const AnsatzCircuit& circ, std::ostream& os) {
    os << "qubits: " << circ.n_qubits << "\n";
    os << "electrons: " << circ.n_electrons << "\n";
    for (size_t g = 0; g < circ.gates.size(); ++g) {
        const auto& op = circ.gates[g];
        if (op.kind == ExcitationKind::Single)
            os << "S " << op.create[0] << " " << op.annihilate[0];
        else
            os << "D " << op.create[0] << " " << op.create[1] << " " << op.annihilate[0] << " "
               << op.annihilate[1];
        os << " " << format_double(circ.theta0[g]) << "\n";
    }
}

inline std::string serialize_circuit(const AnsatzCircuit& circ) {
    std::ostringstream os;
    serialize_circuit(circ, os);
    return os.str();
}

inline AnsatzCircuit parse_circuit(std::istream& is) {
    std::string line;
    size_t n_qubits = 0, n_electrons = 0;
    bool have_q = false, have_e = false;
    std::vector<ExcitationOp> gates;
    std::vector<double> theta0;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "qubits:") {
            ls >> n_qubits;
            have_q = true;
        } else if (tag == "electrons:") {
            ls >> n_electrons;
            have_e = true;
        } else if (tag == "S" || tag == "D") {
            ExcitationOp op;
            double th = 0.0;
            if (tag == "S") {
                op.kind = ExcitationKind::Single;
                if (!(ls >> op.create[0] >> op.annihilate[0] >> th))
                    throw std::runtime_error("circuit parse: bad S line " + std::to_string(lineno));
            } else {
                op.kind = ExcitationKind::Double;
                if (!(ls >> op.create[0] >> op.create[1] >> op.annihilate[0] >> op.annihilate[1] >>
                      th))
                    throw std::runtime_error("circuit parse: bad D line " + std::to_string(lineno));
            }
            op.parameter_index = gates.size();
            gates.push_back(op);
            theta0.push_back(th);
        } else {
            throw std::runtime_error("circuit parse: unknown tag at line " + std::to_string(lineno));
        }
    }
    if (!have_q || !have_e) throw std::runtime_error("circuit parse: missing header");
    AnsatzCircuit circ = build_circuit(gates, n_qubits, n_electrons);
    circ.theta0 = std::move(theta0);
    return circ;
}

inline AnsatzCircuit parse_circuit(const std::string& text) {
    std::istringstream is(text);
    return parse_circuit(is);
}

}  // namespace parvqe
