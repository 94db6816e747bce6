#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace parvqe {

enum class PauliAxis : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char axis_char(PauliAxis a) {
    switch (a) {
    case PauliAxis::I: return 'I';
    case PauliAxis::X: return 'X';
    case PauliAxis::Y: return 'Y';
    case PauliAxis::Z: return 'Z';
    }
    throw std::logic_error("invalid PauliAxis");
}

inline PauliAxis axis_from_char(char c) {
    switch (c) {
    case 'I': return PauliAxis::I;
    case 'X': return PauliAxis::X;
    case 'Y': return PauliAxis::Y;
    case 'Z': return PauliAxis::Z;
    }
    throw std::invalid_argument(std::string("invalid Pauli axis character: ") + c);
}

/// Tensor product of single-qubit Paulis; axes[k] acts on qubit k.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<PauliAxis> axes) : axes_(std::move(axes)) {}
    explicit PauliString(size_t n_qubits) : axes_(n_qubits, PauliAxis::I) {}

    static PauliString identity(size_t n_qubits) { return PauliString(n_qubits); }

    static PauliString parse(const std::string& s) {
        std::vector<PauliAxis> axes;
        axes.reserve(s.size());
        for (char c : s) axes.push_back(axis_from_char(c));
        return PauliString(std::move(axes));
    }

    size_t size() const { return axes_.size(); }
    PauliAxis axis(size_t k) const { return axes_[k]; }
    const std::vector<PauliAxis>& axes() const { return axes_; }

    void set_axis(size_t k, PauliAxis a) { axes_[k] = a; }

    bool is_identity() const {
        return std::all_of(axes_.begin(), axes_.end(),
                           [](PauliAxis a) { return a == PauliAxis::I; });
    }

    // Bit masks over qubits: X/Y flip the basis bit, Y/Z contribute a sign.
    uint64_t x_mask() const {
        uint64_t m = 0;
        for (size_t k = 0; k < axes_.size(); ++k)
            if (axes_[k] == PauliAxis::X || axes_[k] == PauliAxis::Y) m |= uint64_t(1) << k;
        return m;
    }
    uint64_t yz_mask() const {
        uint64_t m = 0;
        for (size_t k = 0; k < axes_.size(); ++k)
            if (axes_[k] == PauliAxis::Y || axes_[k] == PauliAxis::Z) m |= uint64_t(1) << k;
        return m;
    }
    size_t y_count() const {
        size_t n = 0;
        for (PauliAxis a : axes_)
            if (a == PauliAxis::Y) ++n;
        return n;
    }

    std::string str() const {
        std::string s;
        s.reserve(axes_.size());
        for (PauliAxis a : axes_) s += axis_char(a);
        return s;
    }

    bool commutes_with(const PauliString& other) const {
        if (size() != other.size())
            throw std::invalid_argument("PauliString length mismatch");
        size_t anticommuting = 0;
        for (size_t k = 0; k < size(); ++k) {
            PauliAxis a = axes_[k], b = other.axes_[k];
            if (a != PauliAxis::I && b != PauliAxis::I && a != b) ++anticommuting;
        }
        return anticommuting % 2 == 0;
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;
    friend auto operator<=>(const PauliString& a, const PauliString& b) {
        return a.axes_ <=> b.axes_;
    }

  private:
    std::vector<PauliAxis> axes_;
};

/// Componentwise product of two equal-length strings. The returned phase is
/// one of {+1, -1, +i, -i}.
inline std::pair<std::complex<double>, PauliString>
pauli_multiply(const PauliString& a, const PauliString& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pauli_multiply: length mismatch");
    // phase_power counts factors of i (mod 4)
    int phase_power = 0;
    std::vector<PauliAxis> out(a.size());
    for (size_t k = 0; k < a.size(); ++k) {
        int pa = static_cast<int>(a.axis(k));
        int pb = static_cast<int>(b.axis(k));
        if (pa == 0) {
            out[k] = b.axis(k);
        } else if (pb == 0 || pa == pb) {
            out[k] = (pa == pb) ? PauliAxis::I : a.axis(k);
        } else {
            // XY=iZ, YZ=iX, ZX=iY; reversed order gives -i
            out[k] = static_cast<PauliAxis>(6 - pa - pb);
            bool cyclic = (pb - pa + 3) % 3 == 1;  // X->Y->Z->X
            phase_power += cyclic ? 1 : 3;
        }
    }
    static const std::complex<double> phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return {phases[phase_power % 4], PauliString(std::move(out))};
}

struct PauliTerm {
    double weight = 0.0;
    PauliString string;
};

/// Weighted sum of Pauli strings with the all-identity contribution kept as a
/// separate scalar offset. Terms are deduplicated at construction.
class QubitHamiltonian {
  public:
    QubitHamiltonian() = default;
    QubitHamiltonian(size_t n_qubits, double identity_offset = 0.0)
        : n_qubits_(n_qubits), identity_offset_(identity_offset) {}

    static QubitHamiltonian from_terms(size_t n_qubits, const std::vector<PauliTerm>& terms,
                                       double identity_offset = 0.0) {
        std::map<PauliString, double> merged;
        for (const auto& t : terms) {
            if (!std::isfinite(t.weight))
                throw std::invalid_argument("QubitHamiltonian: non-finite weight");
            if (t.string.size() != n_qubits)
                throw std::invalid_argument("QubitHamiltonian: term length mismatch");
            if (t.string.is_identity())
                identity_offset += t.weight;
            else
                merged[t.string] += t.weight;
        }
        QubitHamiltonian h(n_qubits, identity_offset);
        for (const auto& [s, w] : merged)
            if (w != 0.0) h.terms_.push_back({w, s});
        return h;
    }

    size_t n_qubits() const { return n_qubits_; }
    double identity_offset() const { return identity_offset_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

  private:
    friend QubitHamiltonian sort_terms(const QubitHamiltonian&);
    friend QubitHamiltonian cutoff_by_threshold(const QubitHamiltonian&, double);
    friend QubitHamiltonian retain_fraction(const QubitHamiltonian&, double);

    size_t n_qubits_ = 0;
    double identity_offset_ = 0.0;
    std::vector<PauliTerm> terms_;
};

/// Non-increasing |weight|; ties broken by lexicographic axis order (I<X<Y<Z).
inline QubitHamiltonian sort_terms(const QubitHamiltonian& h) {
    QubitHamiltonian out = h;
    std::stable_sort(out.terms_.begin(), out.terms_.end(),
                     [](const PauliTerm& a, const PauliTerm& b) {
                         double wa = std::abs(a.weight), wb = std::abs(b.weight);
                         if (wa != wb) return wa > wb;
                         return a.string < b.string;
                     });
    return out;
}

/// Retains exactly the terms with |weight| > th1. The identity offset is never cut.
inline QubitHamiltonian cutoff_by_threshold(const QubitHamiltonian& h, double th1) {
    if (!(th1 >= 0.0))
        throw std::invalid_argument("cutoff_by_threshold: threshold must be >= 0");
    QubitHamiltonian out(h.n_qubits(), h.identity_offset());
    for (const auto& t : h.terms())
        if (std::abs(t.weight) > th1) out.terms_.push_back(t);
    return out;
}

inline size_t round_half_up_count(size_t n, double ratio) {
    return static_cast<size_t>(std::floor(static_cast<double>(n) * ratio + 0.5));
}

/// Keeps the top round(N*ratio) terms of a sorted Hamiltonian (round half-up).
inline QubitHamiltonian retain_fraction(const QubitHamiltonian& h, double ratio) {
    if (!(ratio >= 0.0 && ratio <= 1.0))
        throw std::invalid_argument("retain_fraction: ratio must be in [0,1]");
    size_t keep = round_half_up_count(h.term_count(), ratio);
    QubitHamiltonian out(h.n_qubits(), h.identity_offset());
    out.terms_.assign(h.terms().begin(), h.terms().begin() + static_cast<long>(keep));
    return out;
}

/// Sum of |w| over the terms cutoff_by_threshold(h, th1) would remove. Bounds
/// the energy perturbation of the cut at any fixed state.
inline double tail_weight(const QubitHamiltonian& h, double th1) {
    if (!(th1 >= 0.0)) throw std::invalid_argument("tail_weight: threshold must be >= 0");
    double sum = 0.0;
    for (const auto& t : h.terms())
        if (!(std::abs(t.weight) > th1)) sum += std::abs(t.weight);
    return sum;
}

// ---- text format ----------------------------------------------------------
// Header lines `qubits: <n>` and `offset: <value>`, then one term per line:
// `<coefficient> <axes>` with axes[0] acting on qubit 0. `#` starts a comment.

inline std::string format_double(double v) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void serialize_hamiltonian(const QubitHamiltonian& h, std::ostream& os) {
    os << "qubits: " << h.n_qubits() << "\n";
    os << "offset: " << format_double(h.identity_offset()) << "\n";
    for (const auto& t : h.terms())
        os << format_double(t.weight) << " " << t.string.str() << "\n";
}

inline std::string serialize_hamiltonian(const QubitHamiltonian& h) {
    std::ostringstream os;
    serialize_hamiltonian(h, os);
    return os.str();
}

inline QubitHamiltonian parse_hamiltonian(std::istream& is) {
    std::string line;
    size_t n_qubits = 0;
    bool have_qubits = false;
    double offset = 0.0;
    std::vector<PauliTerm> terms;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "qubits:") {
            if (!(ls >> n_qubits))
                throw std::runtime_error("hamiltonian parse: bad qubits header, line " +
                                         std::to_string(lineno));
            have_qubits = true;
        } else if (first == "offset:") {
            if (!(ls >> offset))
                throw std::runtime_error("hamiltonian parse: bad offset, line " +
                                         std::to_string(lineno));
        } else {
            double w;
            std::string axes;
            try {
                size_t pos = 0;
                w = std::stod(first, &pos);
                if (pos != first.size()) throw std::invalid_argument(first);
            } catch (const std::exception&) {
                throw std::runtime_error("hamiltonian parse: bad coefficient, line " +
                                         std::to_string(lineno));
            }
            if (!(ls >> axes))
                throw std::runtime_error("hamiltonian parse: missing axes, line " +
                                         std::to_string(lineno));
            terms.push_back({w, PauliString::parse(axes)});
        }
    }
    if (!have_qubits) throw std::runtime_error("hamiltonian parse: missing qubits header");
    for (const auto& t : terms)
        if (t.string.size() != n_qubits)
            throw std::runtime_error("hamiltonian parse: term length != qubit count");
    return QubitHamiltonian::from_terms(n_qubits, terms, offset);
}

inline QubitHamiltonian parse_hamiltonian(const std::string& text) {
    std::istringstream is(text);
    return parse_hamiltonian(is);
}

}  // namespace parvqe
