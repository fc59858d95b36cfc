#pragma once

#include <cmath>
#include <vector>

#include <Eigen/QR>

#include "qmlkit/gates.hpp"
#include "qmlkit/rng.hpp"
#include "qmlkit/state.hpp"

namespace qmlkit::testing {

template <class A, class B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a.eval() - b.eval()).cwiseAbs().maxCoeff();
}

inline CVector random_complex(Eigen::Index n, RngStream& rng) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return v;
}

inline RVector random_real(Eigen::Index n, RngStream& rng, double lo = -1.0, double hi = 1.0) {
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline StateVector random_state(int n_qubits, RngStream& rng) {
  return StateVector::normalize(random_complex(Eigen::Index{1} << n_qubits, rng));
}

/// Haar-ish random unitary from the QR factorization of a complex Gaussian-like matrix.
inline GateMatrix random_unitary(int n_qubits, RngStream& rng) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  CMatrix a(d, d);
  for (Eigen::Index c = 0; c < d; ++c) a.col(c) = random_complex(d, rng);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  return GateMatrix(q);
}

inline CMatrix random_hermitian(Eigen::Index d, RngStream& rng) {
  CMatrix a(d, d);
  for (Eigen::Index c = 0; c < d; ++c) a.col(c) = random_complex(d, rng);
  return 0.5 * (a + a.adjoint());
}

/// Full-register matrix of a gate on `targets`, built entry by entry.
inline CMatrix expand_gate(const CMatrix& gate, const std::vector<int>& targets, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::size_t k = targets.size();
  auto sub_index = [&](Eigen::Index full) {
    Eigen::Index s = 0;
    for (std::size_t j = 0; j < k; ++j) s = (s << 1) | ((full >> (n - 1 - targets[j])) & 1);
    return s;
  };
  Eigen::Index target_mask = 0;
  for (int t : targets) target_mask |= Eigen::Index{1} << (n - 1 - t);
  CMatrix full = CMatrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if ((r & ~target_mask) == (c & ~target_mask)) full(r, c) = gate(sub_index(r), sub_index(c));
  return full;
}

/// Lower and upper 3-sigma binomial bounds on a success count.
inline std::pair<double, double> three_sigma(double p, int trials) {
  const double mean = p * trials;
  const double sd = std::sqrt(trials * p * (1 - p));
  return {mean - 3 * sd, mean + 3 * sd};
}

}  // namespace qmlkit::testing
