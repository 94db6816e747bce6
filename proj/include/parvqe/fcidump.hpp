#pragma once

#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace parvqe {

/// One- and two-electron integrals over spatial orbitals, 1-based indices.
/// Two-body values are chemist-notation (pq|rs) with the full 8-fold
/// real-orbital symmetry; both maps store one canonical key per class.
class IntegralTable {
  public:
    IntegralTable(size_t n_spatial_orbitals, size_t n_electrons, double core_energy = 0.0)
        : n_orb_(n_spatial_orbitals), n_elec_(n_electrons), core_(core_energy) {}

    size_t n_spatial_orbitals() const { return n_orb_; }
    size_t n_electrons() const { return n_elec_; }
    double core_energy() const { return core_; }
    void set_core_energy(double e) { core_ = e; }

    void set_one_body(size_t p, size_t q, double v) {
        check_index(p);
        check_index(q);
        one_body_[canonical1(p, q)] = v;
    }
    double one_body(size_t p, size_t q) const {
        check_index(p);
        check_index(q);
        auto it = one_body_.find(canonical1(p, q));
        return it == one_body_.end() ? 0.0 : it->second;
    }

    void set_two_body(size_t p, size_t q, size_t r, size_t s, double v) {
        check_index(p); check_index(q); check_index(r); check_index(s);
        two_body_[canonical2(p, q, r, s)] = v;
    }
    /// Chemist (pq|rs), expanded through the 8-fold symmetry on read.
    double two_body(size_t p, size_t q, size_t r, size_t s) const {
        check_index(p); check_index(q); check_index(r); check_index(s);
        auto it = two_body_.find(canonical2(p, q, r, s));
        return it == two_body_.end() ? 0.0 : it->second;
    }

  private:
    void check_index(size_t p) const {
        if (p < 1 || p > n_orb_)
            throw std::out_of_range("IntegralTable: orbital index out of range");
    }
    static std::array<size_t, 2> canonical1(size_t p, size_t q) {
        return {std::min(p, q), std::max(p, q)};
    }
    // (pq|rs) = (qp|rs) = (pq|sr) = (rs|pq)
    static std::array<size_t, 4> canonical2(size_t p, size_t q, size_t r, size_t s) {
        if (p < q) std::swap(p, q);
        if (r < s) std::swap(r, s);
        if (p < r || (p == r && q < s)) {
            std::swap(p, r);
            std::swap(q, s);
        }
        return {p, q, r, s};
    }

    size_t n_orb_, n_elec_;
    double core_;
    std::map<std::array<size_t, 2>, double> one_body_;
    std::map<std::array<size_t, 4>, double> two_body_;
};

/// FCIDUMP reader: namelist header with NORB/NELEC/MS2, then `value i j k l`
/// lines. `i j k l = 0` carries the core energy, `k l = 0` one-body h_ij,
/// otherwise chemist (ij|kl).
inline IntegralTable parse_fcidump(std::istream& is) {
    std::string line;
    size_t lineno = 0;

    // Header: everything up to &END or /
    std::string header;
    bool header_done = false;
    while (!header_done && std::getline(is, line)) {
        ++lineno;
        header += line + " ";
        if (line.find("&END") != std::string::npos || line.find('/') != std::string::npos)
            header_done = true;
    }
    auto read_field = [&](const std::string& key) -> long {
        auto pos = header.find(key);
        if (pos == std::string::npos) return -1;
        pos += key.size();
        while (pos < header.size() && (header[pos] == '=' || header[pos] == ' ')) ++pos;
        return std::strtol(header.c_str() + pos, nullptr, 10);
    };
    long norb = read_field("NORB");
    long nelec = read_field("NELEC");
    if (norb <= 0) throw std::runtime_error("parse_fcidump: missing or invalid NORB");
    if (nelec < 0) throw std::runtime_error("parse_fcidump: missing or invalid NELEC");

    IntegralTable table(static_cast<size_t>(norb), static_cast<size_t>(nelec));

    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string vstr;
        if (!(ls >> vstr)) continue;
        double v;
        try {
            size_t pos = 0;
            v = std::stod(vstr, &pos);
            if (pos != vstr.size()) throw std::invalid_argument(vstr);
        } catch (const std::exception&) {
            throw std::runtime_error("parse_fcidump: malformed value at line " +
                                     std::to_string(lineno));
        }
        long i, j, k, l;
        if (!(ls >> i >> j >> k >> l))
            throw std::runtime_error("parse_fcidump: malformed indices at line " +
                                     std::to_string(lineno));
        if (i < 0 || j < 0 || k < 0 || l < 0 || i > norb || j > norb || k > norb || l > norb)
            throw std::runtime_error("parse_fcidump: index out of range at line " +
                                     std::to_string(lineno));
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            table.set_core_energy(v);
        } else if (k == 0 && l == 0) {
            if (i == 0 || j == 0)
                throw std::runtime_error("parse_fcidump: bad one-body indices at line " +
                                         std::to_string(lineno));
            table.set_one_body(static_cast<size_t>(i), static_cast<size_t>(j), v);
        } else {
            if (i == 0 || j == 0 || k == 0 || l == 0)
                throw std::runtime_error("parse_fcidump: bad two-body indices at line " +
                                         std::to_string(lineno));
            table.set_two_body(static_cast<size_t>(i), static_cast<size_t>(j),
                               static_cast<size_t>(k), static_cast<size_t>(l), v);
        }
    }
    return table;
}

inline IntegralTable parse_fcidump(const std::string& text) {
    std::istringstream is(text);
    return parse_fcidump(is);
}

}  // namespace parvqe
