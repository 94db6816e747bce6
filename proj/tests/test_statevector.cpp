#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "parvqe/statevector.hpp"

using namespace parvqe;
using Catch::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("init_basis_state places a single unit amplitude") {
    auto psi = init_basis_state(2, 3);
    CHECK(psi.amplitudes() == std::vector<Amplitude>{{0, 0}, {0, 0}, {0, 0}, {1, 0}});

    auto zero = init_basis_state(1, 0);
    CHECK(zero.amplitudes() == std::vector<Amplitude>{{1, 0}, {0, 0}});

    auto five = init_basis_state(3, 5);
    for (uint64_t b = 0; b < 8; ++b)
        CHECK(five.amplitudes()[b] == (b == 5 ? Amplitude(1, 0) : Amplitude(0, 0)));

    CHECK_THROWS_AS(init_basis_state(2, 4), std::out_of_range);
}

TEST_CASE("rotation on an eigenstate applies a phase") {
    auto psi = init_basis_state(1, 0);
    double theta = 0.7;
    psi.apply_pauli_rotation(PauliString::parse("Z"), theta);
    Amplitude expected = std::exp(Amplitude(0, -theta / 2));
    CHECK(std::abs(psi.amplitudes()[0] - expected) < 1e-15);
    CHECK(std::abs(psi.amplitudes()[1]) == 0.0);
}

TEST_CASE("half-turn X rotation maps |0> to -i|1>") {
    auto psi = init_basis_state(1, 0);
    psi.apply_pauli_rotation(PauliString::parse("X"), kPi);
    CHECK(std::abs(psi.amplitudes()[0]) < 1e-15);
    CHECK(std::abs(psi.amplitudes()[1] - Amplitude(0, -1)) < 1e-15);
}

TEST_CASE("quarter-turn Y rotation builds the plus state") {
    auto psi = init_basis_state(1, 0);
    psi.apply_pauli_rotation(PauliString::parse("Y"), kPi / 2);
    double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(psi.amplitudes()[0] - Amplitude(r, 0)) < 1e-15);
    CHECK(std::abs(psi.amplitudes()[1] - Amplitude(r, 0)) < 1e-15);
}

TEST_CASE("expectation values on basis and rotated states") {
    auto zero = init_basis_state(1, 0);
    CHECK(zero.expectation_pauli(PauliString::parse("Z")) == Approx(1.0));

    auto plus = init_basis_state(1, 0);
    plus.apply_pauli_rotation(PauliString::parse("Y"), kPi / 2);
    CHECK(plus.expectation_pauli(PauliString::parse("X")) == Approx(1.0));

    auto two = init_basis_state(2, 0);
    CHECK(two.expectation_pauli(PauliString::parse("XX")) == Approx(0.0).margin(1e-15));

    CHECK_THROWS_AS(zero.expectation_pauli(PauliString::parse("ZZ")), std::invalid_argument);
}

TEST_CASE("hamiltonian expectation is the weighted term sum plus offset") {
    auto psi = init_basis_state(1, 0);
    auto h = QubitHamiltonian::from_terms(1, {{0.5, PauliString::parse("Z")}});
    CHECK(psi.expectation_hamiltonian(h) == Approx(0.5));

    QubitHamiltonian offset_only(1, 2.0);
    CHECK(psi.expectation_hamiltonian(offset_only) == Approx(2.0));
}

TEST_CASE("hamiltonian expectation matches the dense quadratic form") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        auto h = oracles::random_hamiltonian(rng, 6, 30, 0.4);
        auto psi = oracles::random_state(rng, 6);
        oracles::Matrix m = oracles::hamiltonian_matrix(h);
        oracles::Vector v = oracles::to_vector(psi);
        double expected = (v.adjoint() * m * v)(0, 0).real();
        CHECK(psi.expectation_hamiltonian(h) == Approx(expected).margin(1e-10));
    }
}

TEST_CASE("norm is preserved over long random rotation sequences") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    auto psi = init_basis_state(5, 9);
    for (int k = 0; k < 1000; ++k)
        psi.apply_pauli_rotation(oracles::random_pauli_string(rng, 5), angle(rng));
    CHECK(std::abs(psi.norm_squared() - 1.0) <= 1e-10);
}

TEST_CASE("rotations about the same axis compose additively") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = oracles::random_pauli_string(rng, 4);
        double a = angle(rng), b = angle(rng);
        auto lhs = oracles::random_state(rng, 4);
        auto rhs = lhs;
        lhs.apply_pauli_rotation(p, a);
        lhs.apply_pauli_rotation(p, b);
        rhs.apply_pauli_rotation(p, a + b);
        for (uint64_t i = 0; i < lhs.dimension(); ++i)
            CHECK(std::abs(lhs.amplitudes()[i] - rhs.amplitudes()[i]) <= 1e-12);
    }
}

TEST_CASE("expectations stay inside the Pauli bounds") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        auto psi = oracles::random_state(rng, 5);
        auto p = oracles::random_pauli_string(rng, 5);
        CHECK(std::abs(psi.expectation_pauli(p)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("amplitude storage accounting reports 2^(n+4) bytes") {
    for (size_t n : {1u, 4u, 10u})
        CHECK(init_basis_state(n, 0).memory_bytes() == uint64_t(1) << (n + 4));
}

TEST_CASE("amplitude dump round-trips bit-exactly") {
    std::mt19937_64 rng(41);
    auto psi = oracles::random_state(rng, 4);
    std::stringstream buf;
    dump_state(psi, buf);
    auto back = load_state(buf);
    REQUIRE(back.n_qubits() == psi.n_qubits());
    CHECK(back.amplitudes() == psi.amplitudes());

    std::stringstream truncated(buf.str().substr(0, 20));
    CHECK_THROWS_AS(load_state(truncated), std::runtime_error);
}
