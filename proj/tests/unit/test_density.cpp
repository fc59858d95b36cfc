#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "qmlkit/density.hpp"

using namespace qmlkit;
using namespace qmlkit::testing;

namespace {

const cplx I1(0.0, 1.0);
const double S3 = std::sqrt(3.0);

StateVector psi_example() { return StateVector(CVector{{I1 / 2.0, cplx(S3 / 2.0)}}); }
StateVector phi_example() { return StateVector(CVector{{cplx(M_SQRT1_2), cplx(M_SQRT1_2)}}); }

}  // namespace

TEST_SUITE("density") {
  TEST_CASE("pure density literal and trace") {
    const auto rho = pure_density(psi_example());
    const CMatrix expected{{0.25, I1 * S3 / 4.0}, {-I1 * S3 / 4.0, 0.75}};
    CHECK(max_abs_diff(rho.matrix(), expected) < 1e-15);
    CHECK(max_abs_diff(pure_density(basis_state(1, 0)).matrix(), CMatrix{{1, 0}, {0, 0}}) == 0.0);
    CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-15);
  }

  TEST_CASE("mixed density literal and trace expectation") {
    const std::pair<double, StateVector> parts[] = {{0.25, psi_example()}, {0.75, phi_example()}};
    const auto rho = mixed_density(parts);
    const CMatrix expected{{7.0 / 16, (6.0 + I1 * S3) / 16.0}, {(6.0 - I1 * S3) / 16.0, 9.0 / 16}};
    CHECK(max_abs_diff(rho.matrix(), expected) < 1e-15);
    const Observable o(CMatrix{{1, 0}, {0, 2}});
    CHECK(std::abs(trace_expectation(rho, o) - 1.5625) < 1e-12);
    CHECK(std::abs(trace_expectation(pure_density(psi_example()), o) - 1.75) < 1e-12);
    CHECK(trace_expectation(rho, Observable(CMatrix::Identity(2, 2))) == doctest::Approx(1.0));
  }

  TEST_CASE("mixed density edge cases") {
    const std::pair<double, StateVector> single[] = {{1.0, psi_example()}};
    CHECK(max_abs_diff(mixed_density(single).matrix(), pure_density(psi_example()).matrix()) < 1e-15);
    const std::pair<double, StateVector> half[] = {{0.5, basis_state(1, 0)}, {0.5, basis_state(1, 1)}};
    CHECK(max_abs_diff(mixed_density(half).matrix(), 0.5 * CMatrix::Identity(2, 2)) == 0.0);
    const std::pair<double, StateVector> bad[] = {{0.7, basis_state(1, 0)}, {0.7, basis_state(1, 1)}};
    CHECK_THROWS_AS(mixed_density(bad), DomainError);
    const std::pair<double, StateVector> neg[] = {{1.5, basis_state(1, 0)}, {-0.5, basis_state(1, 1)}};
    CHECK_THROWS_AS(mixed_density(neg), DomainError);
  }

  TEST_CASE("density validation") {
    CHECK_THROWS_AS(DensityMatrix(CMatrix{{1, 0}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(DensityMatrix(CMatrix{{1.5, 0}, {0, -0.5}}), DomainError);
    CHECK_THROWS_AS(DensityMatrix(CMatrix{{0.5, 1}, {0, 0.5}}), DomainError);
  }

  TEST_CASE("trace expectation equals pure-state expectation") {
    RngStream rng(17);
    for (int t = 0; t < 50; ++t) {
      const int n = 1 + t % 3;
      const auto psi = random_state(n, rng);
      const Observable o(random_hermitian(Eigen::Index{1} << n, rng));
      CHECK(std::abs(trace_expectation(pure_density(psi), o) - expectation(o, psi)) < 1e-9);
    }
  }

  TEST_CASE("random mixtures have eigenvalues in [0, 1] and unit trace") {
    RngStream rng(18);
    for (int t = 0; t < 30; ++t) {
      std::vector<std::pair<double, StateVector>> parts;
      double left = 1.0;
      for (int j = 0; j < 3; ++j) {
        const double p = j == 2 ? left : left * rng.uniform();
        left -= p;
        parts.emplace_back(p, random_state(2, rng));
      }
      const auto rho = mixed_density(parts);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
      CHECK(es.eigenvalues().minCoeff() >= -1e-9);
      CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-9);
      CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-9);
    }
  }

  TEST_CASE("partial trace of products, Bell pairs and identity selection") {
    RngStream rng(19);
    const auto a = random_state(1, rng);
    const auto b = random_state(2, rng);
    const auto rho = pure_density(tensor(a, b));
    const int left[] = {0};
    const int right[] = {1, 2};
    CHECK(max_abs_diff(partial_trace(rho, left).matrix(), pure_density(a).matrix()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(rho, right).matrix(), pure_density(b).matrix()) < 1e-12);

    const auto bell = pure_density(StateVector::normalize(CVector{{1.0, 0.0, 0.0, 1.0}}));
    const int q0[] = {0};
    const int q1[] = {1};
    CHECK(max_abs_diff(partial_trace(bell, q0).matrix(), 0.5 * CMatrix::Identity(2, 2)) < 1e-15);
    CHECK(max_abs_diff(partial_trace(bell, q1).matrix(), 0.5 * CMatrix::Identity(2, 2)) < 1e-15);

    const int all[] = {0, 1, 2};
    CHECK(max_abs_diff(partial_trace(rho, all).matrix(), rho.matrix()) < 1e-15);
    const int dup[] = {1, 1};
    CHECK_THROWS_AS(partial_trace(rho, dup), DomainError);
  }

  TEST_CASE("partial trace keeps requested order") {
    const auto rho = pure_density(basis_state(3, 0b100));
    const int order[] = {2, 0};
    CHECK(partial_trace(rho, order).matrix()(0b01, 0b01) == cplx(1.0));
  }

  TEST_CASE("partial trace maps random mixtures to valid densities") {
    RngStream rng(20);
    for (int t = 0; t < 30; ++t) {
      const std::pair<double, StateVector> parts[] = {{0.3, random_state(3, rng)},
                                                      {0.7, random_state(3, rng)}};
      const auto rho = mixed_density(parts);
      const int keep[] = {t % 3};
      const auto red = partial_trace(rho, keep);
      CHECK(std::abs(red.matrix().trace() - 1.0) < 1e-9);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(red.matrix());
      CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}
