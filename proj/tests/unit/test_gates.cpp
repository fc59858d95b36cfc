#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <numeric>

#include "helpers.hpp"
#include "qmlkit/circuit.hpp"

using namespace qmlkit;
using namespace qmlkit::testing;

TEST_SUITE("gates") {
  TEST_CASE("standard gate literals") {
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(max_abs_diff(standard_gate("H").matrix(), CMatrix{{r, r}, {r, -r}}) < 1e-15);
    CHECK(max_abs_diff(standard_gate("NOT").matrix(), standard_gate("x").matrix()) == 0.0);
    CHECK(max_abs_diff(standard_gate("R", std::numbers::pi / 2).matrix(),
                       CMatrix{{1, 0}, {0, cplx(0, 1)}}) < 1e-15);
    CHECK_THROWS_AS(standard_gate("R"), DomainError);
    CHECK_THROWS_AS(standard_gate("toffoli"), DomainError);
    const auto swapped = apply(standard_gate("SWAP"), {0, 1}, basis_state(2, 0b01));
    CHECK(swapped[0b10] == cplx(1.0));
  }

  TEST_CASE("unitarity is validated on construction") {
    CHECK_THROWS_AS(GateMatrix(CMatrix{{1, 1}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(GateMatrix(CMatrix::Identity(3, 3)), DomainError);
  }

  TEST_CASE("kron products") {
    const auto h = standard_gate("H");
    const auto i = standard_gate("I");
    const double r = 1.0 / std::numbers::sqrt2;
    CMatrix hi = CMatrix::Zero(4, 4);
    hi << r, 0, r, 0, 0, r, 0, r, r, 0, -r, 0, 0, r, 0, -r;
    CHECK(max_abs_diff(kron({h, i}).matrix(), hi) < 1e-15);
    CHECK(max_abs_diff(kron({i, i}).matrix(), CMatrix::Identity(4, 4)) == 0.0);
    const CVector hh = kron({h, h}).matrix() * basis_state(2, 0).amplitudes();
    for (int k = 0; k < 4; ++k) CHECK(std::abs(hh[k] - 0.5) < 1e-15);
    CHECK_THROWS_AS(kron(std::span<const GateMatrix>{}), DomainError);
  }

  TEST_CASE("controlled gates") {
    const auto cr = controlled(standard_gate("R", std::numbers::pi / 2)).matrix();
    CMatrix expected = CMatrix::Identity(4, 4);
    expected(3, 3) = cplx(0, 1);
    CHECK(max_abs_diff(cr, expected) < 1e-15);
    const auto cnot = controlled(standard_gate("X"));
    CHECK(apply(cnot, {0, 1}, basis_state(2, 0b10))[0b11] == cplx(1.0));
    RngStream rng(1);
    for (int t = 0; t < 10; ++t) {
      const auto u = random_unitary(2, rng);
      const auto phi = random_state(2, rng);
      const auto in = tensor(basis_state(1, 0), phi);
      CHECK(max_abs_diff(apply(controlled(u), {0, 1, 2}, in).amplitudes(), in.amplitudes()) < 1e-12);
    }
  }

  TEST_CASE("controlled U commutes with measuring a basis-state control") {
    RngStream rng(6);
    for (int t = 0; t < 10; ++t) {
      const auto u = random_unitary(1, rng);
      const auto phi = random_state(1, rng);
      for (int c = 0; c < 2; ++c) {
        const auto in = tensor(basis_state(1, c), phi);
        const auto out = apply(controlled(u), {0, 1}, in);
        const int q[] = {0};
        const auto m = measure_subset(out, q, rng);
        CHECK(m.bits[0] == c);
        CHECK(m.probability == doctest::Approx(1.0));
      }
    }
  }

  TEST_CASE("apply reproduces the worked two-qubit circuit") {
    const auto s1 = apply(standard_gate("H"), {0}, basis_state(2, 0));
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(max_abs_diff(s1.amplitudes(), CVector{{r, 0, r, 0}}) < 1e-15);
    const auto s2 = apply(standard_gate("SWAP"), {0, 1}, s1);
    CHECK(max_abs_diff(s2.amplitudes(), CVector{{r, r, 0, 0}}) < 1e-15);
    CHECK(max_abs_diff(apply(standard_gate("I"), {1}, s2).amplitudes(), s2.amplitudes()) == 0.0);
    CHECK_THROWS_AS(apply(standard_gate("SWAP"), {0}, s2), DomainError);
    CHECK_THROWS_AS(apply(standard_gate("H"), {2}, s2), DomainError);
  }

  TEST_CASE("apply equals multiplication by the expanded matrix") {
    RngStream rng(31);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 2 + trial % 5;
      const int k = 1 + trial % std::min(3, n);
      std::vector<int> pool(n);
      std::iota(pool.begin(), pool.end(), 0);
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<int> targets(pool.begin(), pool.begin() + k);
      const auto g = random_unitary(k, rng);
      const auto psi = random_state(n, rng);
      const auto out = apply(g, targets, psi);
      const CVector expected = expand_gate(g.matrix(), targets, n) * psi.amplitudes();
      CHECK(max_abs_diff(out.amplitudes(), expected) < 1e-12);
      CHECK(std::abs(out.amplitudes().norm() - 1.0) < 1e-9);
    }
  }

  TEST_CASE("apply on a ten-qubit register matches the expanded matrix") {
    RngStream rng(32);
    const auto g = random_unitary(2, rng);
    const std::vector<int> targets{7, 2};
    const auto psi = random_state(10, rng);
    const CVector expected = expand_gate(g.matrix(), targets, 10) * psi.amplitudes();
    CHECK(max_abs_diff(apply(g, targets, psi).amplitudes(), expected) < 1e-12);
  }

  TEST_CASE("circuits run steps in order and match the matrix product") {
    Circuit c(2);
    c.add("H", {0}).add("SWAP", {0, 1});
    const auto out = run_circuit(c, basis_state(2, 0));
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(max_abs_diff(out.amplitudes(), CVector{{r, r, 0, 0}}) < 1e-15);
    CHECK(max_abs_diff(run_circuit(Circuit(2), out).amplitudes(), out.amplitudes()) == 0.0);
    CHECK_THROWS_AS(run_circuit(c, basis_state(3, 0)), DomainError);
    CHECK_THROWS_AS(c.add("H", {0, 1}), DomainError);
  }

  TEST_CASE("circuit JSON round trip") {
    Circuit c(3);
    RngStream rng(2);
    c.add("H", {0}).add("CR", {0, 2}, 0.25).add(random_unitary(1, rng), {1});
    const auto back = circuit_from_json(circuit_to_json(c));
    CHECK(back.n_qubits() == 3);
    CHECK(back.steps().size() == 3);
    CHECK(max_abs_diff(back.to_matrix(), c.to_matrix()) < 1e-15);
    CHECK_THROWS_AS(circuit_from_json("{\"steps\": []}"), DomainError);
    CHECK_THROWS_AS(circuit_from_json("not json"), DomainError);
  }

  TEST_CASE("function oracle") {
    const auto zero = function_oracle([](std::uint64_t) { return 0; }, 2, 1);
    CHECK(max_abs_diff(zero.matrix(), CMatrix::Identity(8, 8)) == 0.0);
    const auto copy = function_oracle([](std::uint64_t x) { return x; }, 1, 1);
    CHECK(max_abs_diff(copy.matrix(), controlled(standard_gate("X")).matrix()) == 0.0);

    auto f = [](std::uint64_t x) -> std::uint64_t { return x == 1 || x == 2; };
    const auto o = function_oracle(f, 2, 1);
    const auto in = tensor(apply(kron({standard_gate("H"), standard_gate("H")}), {0, 1},
                                 basis_state(2, 0)),
                           basis_state(1, 0));
    const auto out = apply(o, {0, 1, 2}, in);
    for (std::uint64_t x = 0; x < 4; ++x) CHECK(std::abs(out[(x << 1) | f(x)] - 0.5) < 1e-15);

    CHECK(max_abs_diff(CMatrix(o.matrix() * o.matrix()), CMatrix::Identity(8, 8)) == 0.0);
    for (Eigen::Index r = 0; r < 8; ++r) {
      CHECK(o.matrix().row(r).cwiseAbs().sum() == 1.0);
      CHECK(o.matrix().col(r).cwiseAbs().sum() == 1.0);
    }
    CHECK_THROWS_AS(function_oracle([](std::uint64_t) { return 2; }, 2, 1), DomainError);
  }
}
