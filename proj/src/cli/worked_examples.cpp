#include "worked_examples.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "qmlkit/clustering.hpp"
#include "qmlkit/density.hpp"
#include "qmlkit/fourier.hpp"
#include "qmlkit/minimizer.hpp"

namespace qmlkit::cli {
namespace {

constexpr double kPi = std::numbers::pi;
const double kR2 = std::numbers::sqrt2;
const double kS3 = std::sqrt(3.0);
const cplx kI(0.0, 1.0);

double diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

StateVector psi_example() { return StateVector(CVector{{kI / 2.0, cplx(kS3 / 2.0)}}); }
StateVector phi_example() { return StateVector(CVector{{cplx(M_SQRT1_2), cplx(M_SQRT1_2)}}); }
Observable diag12() { return Observable(CMatrix{{1, 0}, {0, 2}}); }

SignOracle marks(int n, std::vector<std::uint64_t> set) {
  return {n, [set](std::uint64_t x) { return std::find(set.begin(), set.end(), x) != set.end(); },
          set.size()};
}

std::vector<std::uint8_t> mask(int n, std::initializer_list<std::uint64_t> set) {
  std::vector<std::uint8_t> m(std::size_t{1} << n, 0);
  for (auto x : set) m[x] = 1;
  return m;
}

/// Runs one check body and turns any exception into a failure.
class Recorder {
 public:
  struct Outcome {
    bool passed;
    std::string detail;
  };

  void add(std::string name, std::string example, const std::function<Outcome()>& body) {
    Outcome o{false, {}};
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    checks_.push_back({std::move(name), std::move(example), o.passed, std::move(o.detail)});
  }

  std::vector<WorkedCheck> take() { return std::move(checks_); }

 private:
  std::vector<WorkedCheck> checks_;
};

Recorder::Outcome within(double got, double want, double tol) {
  return {std::abs(got - want) <= tol, "value " + num(got) + ", expected " + num(want) + " +- " + num(tol)};
}

Recorder::Outcome max_diff(double d, double tol) {
  return {d <= tol, "max abs difference " + num(d) + " (tolerance " + num(tol) + ")"};
}

void state_checks(Recorder& r) {
  r.add("basis-ket-10", "two-qubit basis ket |10>", [] {
    return max_diff(diff(basis_state(2, 2).amplitudes(), CVector{{0.0, 0.0, 1.0, 0.0}}), 0.0);
  });
  r.add("bra-ket-products", "inner products with psi = (i/2, sqrt3/2)", [] {
    const auto psi = psi_example();
    const double d = std::max({std::abs(inner_product(basis_state(1, 0), psi) - kI / 2.0),
                               std::abs(inner_product(psi, psi) - 1.0),
                               std::abs(inner_product(basis_state(1, 1), basis_state(1, 0)))});
    return max_diff(d, 1e-15);
  });
  r.add("tensor-product", "|+> tensor |0>", [] {
    const auto s = tensor(phi_example(), basis_state(1, 0));
    return max_diff(diff(s.amplitudes(), CVector{{M_SQRT1_2, 0.0, M_SQRT1_2, 0.0}}), 1e-15);
  });
  r.add("product-state-separates", "two-particle product state", [] {
    const bool sep = is_product_two_subsystems(tensor(psi_example(), phi_example()), 1);
    return Recorder::Outcome{sep, sep ? "separable" : "reported entangled"};
  });
  r.add("bell-state-entangled", "(|00> + |11>)/sqrt2", [] {
    const bool sep = is_product_two_subsystems(StateVector(CVector{{M_SQRT1_2, 0.0, 0.0, M_SQRT1_2}}), 1);
    return Recorder::Outcome{!sep, sep ? "reported separable" : "entangled"};
  });
  r.add("bell-measurement-correlation", "measuring one half of a Bell pair fixes the other", [] {
    RngStream rng(11);
    const StateVector bell(CVector{{M_SQRT1_2, 0.0, 0.0, M_SQRT1_2}});
    const int first[] = {0};
    const int second[] = {1};
    int agree = 0;
    for (int t = 0; t < 200; ++t) {
      const auto m = measure_subset(bell, first, rng);
      agree += measure_subset(m.collapsed, second, rng).bits[0] == m.bits[0];
    }
    return Recorder::Outcome{agree == 200, std::to_string(agree) + "/200 outcomes agree"};
  });
  r.add("observable-expectation", "<psi|diag(1,2)|psi> = 1.75", [] {
    return within(expectation(diag12(), psi_example()), 1.75, 1e-12);
  });
  r.add("observable-variance", "variance of diag(1,2) in psi = 0.1875", [] {
    return within(variance(diag12(), psi_example()), 0.1875, 1e-12);
  });
  r.add("uncertainty-bound", "sigma1/sigma2 uncertainty product on psi", [] {
    const CMatrix s1{{0, 1}, {1, 0}};
    const CMatrix s2{{0, -kI}, {kI, 0}};
    const auto psi = psi_example();
    const cplx c = psi.amplitudes().dot((s1 * s2 - s2 * s1) * psi.amplitudes());
    const double lhs = variance(Observable(s1), psi) * variance(Observable(s2), psi);
    const double rhs = 0.25 * std::norm(c);
    return Recorder::Outcome{lhs >= rhs - 1e-12, "product " + num(lhs) + ", bound " + num(rhs)};
  });
}

void density_checks(Recorder& r) {
  r.add("pure-density-literal", "|psi><psi| for psi = (i/2, sqrt3/2)", [] {
    const CMatrix want{{0.25, kI * kS3 / 4.0}, {-kI * kS3 / 4.0, 0.75}};
    return max_diff(diff(pure_density(psi_example()).matrix(), want), 1e-15);
  });
  r.add("pure-density-trace-expectation", "tr(rho O) = 1.75", [] {
    return within(trace_expectation(pure_density(psi_example()), diag12()), 1.75, 1e-12);
  });
  r.add("mixed-density-literal", "1/4 |psi><psi| + 3/4 |phi><phi|", [] {
    const std::pair<double, StateVector> parts[] = {{0.25, psi_example()}, {0.75, phi_example()}};
    const CMatrix want{{7.0 / 16, (6.0 + kI * kS3) / 16.0}, {(6.0 - kI * kS3) / 16.0, 9.0 / 16}};
    return max_diff(diff(mixed_density(parts).matrix(), want), 1e-15);
  });
  r.add("mixed-density-trace-expectation", "tr(rho O) = 1.5625 for the mixture", [] {
    const std::pair<double, StateVector> parts[] = {{0.25, psi_example()}, {0.75, phi_example()}};
    return within(trace_expectation(mixed_density(parts), diag12()), 1.5625, 1e-12);
  });
}

void gate_checks(Recorder& r) {
  const double h = M_SQRT1_2;
  r.add("hadamard-literal", "H = [[1, 1], [1, -1]] / sqrt2", [h] {
    return max_diff(diff(standard_gate("H").matrix(), CMatrix{{h, h}, {h, -h}}), 1e-15);
  });
  r.add("swap-gate", "SWAP |01> = |10>", [] {
    return max_diff(diff(apply(standard_gate("SWAP"), {0, 1}, basis_state(2, 1)).amplitudes(),
                         basis_state(2, 2).amplitudes()), 0.0);
  });
  r.add("phase-gate-literal", "R(pi/2) = diag(1, i)", [] {
    return max_diff(diff(standard_gate("R", kPi / 2).matrix(), CMatrix{{1, 0}, {0, kI}}), 1e-15);
  });
  r.add("controlled-phase-literal", "C-R(pi/2) = diag(1, 1, 1, i)", [] {
    CMatrix want = CMatrix::Identity(4, 4);
    want(3, 3) = kI;
    return max_diff(diff(controlled(standard_gate("R", kPi / 2)).matrix(), want), 1e-15);
  });
  r.add("hadamard-identity-kron", "H tensor I", [h] {
    CMatrix want(4, 4);
    want << h, 0, h, 0, 0, h, 0, h, h, 0, -h, 0, 0, h, 0, -h;
    return max_diff(diff(kron({standard_gate("H"), standard_gate("I")}).matrix(), want), 1e-15);
  });
  r.add("hadamard-swap-circuit", "H on the first qubit of |00>, then SWAP", [h] {
    Circuit c(2);
    c.add("H", {0}).add("SWAP", {0, 1});
    const auto out = run_circuit(c, basis_state(2, 0));
    return max_diff(diff(out.amplitudes(), CVector{{h, h, 0.0, 0.0}}), 1e-15);
  });
  r.add("function-oracle-parallel-evaluation", "O |x, 0> = |x, f(x)> on a uniform two-qubit input", [] {
    auto f = [](std::uint64_t x) -> std::uint64_t { return x == 1 || x == 2; };
    const auto in = tensor(apply(kron({standard_gate("H"), standard_gate("H")}), {0, 1}, basis_state(2, 0)),
                           basis_state(1, 0));
    const auto out = apply(function_oracle(f, 2, 1), {0, 1, 2}, in);
    CVector want = CVector::Zero(8);
    for (std::uint64_t x = 0; x < 4; ++x) want[static_cast<Eigen::Index>((x << 1) | f(x))] = 0.5;
    return max_diff(diff(out.amplitudes(), want), 1e-15);
  });
}

void grover_checks(Recorder& r) {
  r.add("grover-oracle-literal", "two-qubit oracle marking |10>", [] {
    const CMatrix want = CVector{{1.0, 1.0, -1.0, 1.0}}.asDiagonal().toDenseMatrix();
    return max_diff(diff(oracle_gate(marks(2, {2})).matrix(), want), 0.0);
  });
  r.add("diffusion-literal", "two-qubit inversion around the mean", [] {
    CMatrix want = CMatrix::Constant(4, 4, 0.5);
    want.diagonal().setConstant(-0.5);
    return max_diff(diff(diffusion(2).matrix(), want), 1e-15);
  });
  r.add("grover-three-qubit-first-round", "one round on three qubits marking |001>", [] {
    const auto s = grover_state(3, mask(3, {1}), 1);
    CVector want = CVector::Constant(8, kR2 / 8);
    want[1] = 5 * kR2 / 8;
    return max_diff(diff(s.amplitudes(), want), 1e-15);
  });
  r.add("grover-two-qubit-state", "one round on two qubits marking |10>", [] {
    RngStream rng(7);
    const auto res = grover_search(marks(2, {2}), 1, rng);
    return max_diff(diff(res.final_state.amplitudes(), CVector{{0.0, 0.0, 1.0, 0.0}}), 1e-12);
  });
  r.add("grover-two-qubit-always-measured", "the searched input is measured every time", [] {
    RngStream rng(7);
    int hits = 0;
    for (int t = 0; t < 200; ++t) hits += grover_search(marks(2, {2}), 1, rng).measured_index == 2;
    return Recorder::Outcome{hits == 200, std::to_string(hits) + "/200 measurements returned 2"};
  });
  r.add("grover-three-qubit-amplitude", "marked amplitude 11 sqrt2 / 16 after two rounds", [] {
    RngStream rng(9);
    const auto res = grover_search(marks(3, {1}), std::nullopt, rng);
    if (res.iterations_used != 2) return Recorder::Outcome{false, "used " + std::to_string(res.iterations_used) + " rounds"};
    return within(std::abs(res.final_state[1]), 11 * kR2 / 16, 1e-12);
  });
  r.add("grover-three-qubit-probability", "success probability 0.9453125 after two rounds", [] {
    RngStream rng(9);
    return within(grover_search(marks(3, {1}), std::nullopt, rng).success_probability, 0.9453125, 1e-9);
  });
  r.add("grover-three-qubit-quoted-probability", "success probability quoted as 0.945", [] {
    RngStream rng(9);
    return within(grover_search(marks(3, {1}), std::nullopt, rng).success_probability, 0.945, 5e-4);
  });
}

ObjectiveFn demo_objective() {
  return {3, [](std::uint64_t x) { return x == 4 ? 0.0 : x == 0 ? 1.0 : x == 1 ? 2.0 : 3.0; }};
}

void minimizer_checks(Recorder& r) {
  r.add("threshold-oracle-marks", "threshold y = f(001) marks {000, 100}", [] {
    const auto m = threshold_oracle(demo_objective(), 2.0).mask();
    const std::vector<std::uint8_t> want{1, 0, 0, 0, 1, 0, 0, 0};
    return Recorder::Outcome{m == want, m == want ? "marks 000 and 100" : "wrong marked set"};
  });
  r.add("minimization-first-measurement", "first register after one round with threshold register |10>", [] {
    const auto state = tensor(grover_state(3, mask(3, {0, 4}), 1), basis_state(2, 2));
    const int first[] = {0, 1, 2};
    const auto p = marginal_distribution(state, first);
    const double d = std::max(std::abs(p[0] - 0.5), std::abs(p[4] - 0.5));
    return max_diff(d, 1e-12);
  });
  r.add("minimization-second-round-state", "amplitudes 0.972 and -0.088 with threshold register |01>", [] {
    const auto state = tensor(grover_state(3, mask(3, {4}), 2), basis_state(2, 1));
    double d = std::abs(state[(4 << 2) | 1] - 0.972);
    for (std::uint64_t x = 0; x < 8; ++x)
      if (x != 4) d = std::max(d, std::abs(state[(x << 2) | 1] + 0.088));
    return max_diff(d, 5e-4);
  });
  r.add("minimization-second-round-probability", "probability 0.945 of measuring 100", [] {
    return within(grover_state(3, mask(3, {4}), 2).probability(4), 0.945, 5e-4);
  });
  r.add("minimization-result", "minimum of the three-bit objective is at 100", [] {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      RngStream rng(seed);
      hits += minimize(demo_objective(), rng).argmin_bits == "100";
    }
    return Recorder::Outcome{hits >= 48, std::to_string(hits) + "/50 seeded runs returned 100"};
  });
}

void fourier_checks(Recorder& r) {
  r.add("dft-two-sine-peaks", "two-sine signal, N = 1000, peaks at 10 and 50", [] {
    const int n = 1000;
    CVector x(n);
    for (int j = 0; j < n; ++j) {
      const double t = static_cast<double>(j) / n;
      x[j] = 2 * std::sin(2 * kPi * 10 * t) + 0.3 * std::sin(2 * kPi * 50 * t);
    }
    const RVector mag = classical_dft(x).cwiseAbs();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + 4, idx.end(), [&](int a, int b) { return mag[a] > mag[b]; });
    std::vector<int> top(idx.begin(), idx.begin() + 4);
    std::sort(top.begin(), top.end());
    const bool ok = top == std::vector<int>{10, 50, 950, 990};
    std::string got;
    for (int k : top) got += (got.empty() ? "" : ",") + std::to_string(k);
    return Recorder::Outcome{ok, "largest bins " + got};
  });
  const CMatrix f2 = 0.5 * CMatrix{{1, 1, 1, 1}, {1, kI, -1, -kI}, {1, -1, 1, -1}, {1, -kI, -1, kI}};
  r.add("qft-two-qubit-literal", "two-qubit Fourier matrix", [f2] {
    return max_diff(diff(qft_gate(2).matrix(), f2), 1e-12);
  });
  r.add("qft-amplitude-expansion", "b_k as sums of a_j omega^(jk) on four amplitudes", [] {
    const CVector a = StateVector::normalize(CVector{{cplx(1, 0), cplx(0.5, -1), cplx(-2, 0.25), cplx(0.75, 1.5)}}).amplitudes();
    const CVector b = qft_gate(2).matrix() * a;
    CVector want(4);
    for (int k = 0; k < 4; ++k) {
      want[k] = 0;
      for (int j = 0; j < 4; ++j) want[k] += a[j] * std::polar(1.0, 2 * kPi * j * k / 4);
      want[k] *= 0.5;
    }
    return max_diff(diff(b, want), 1e-15);
  });
  r.add("qft-two-qubit-circuit", "Hadamard and controlled-phase decomposition", [f2] {
    return max_diff(diff(qft_circuit(2).to_matrix(), f2), 1e-12);
  });
  r.add("inverse-qft-one-qubit", "one-qubit inverse transform", [] {
    const CMatrix want = M_SQRT1_2 * CMatrix{{1, 1}, {1, std::polar(1.0, -kPi)}};
    return max_diff(diff(inverse_qft_gate(1).matrix(), want), 1e-15);
  });
  r.add("phase-estimation-identity", "identity unitary gives phase 0 with certainty", [] {
    RngStream rng(1);
    const auto pe = phase_estimate(GateMatrix(CMatrix::Identity(2, 2)), basis_state(1, 0), 1, rng);
    if (pe.measured_register != 0) return Recorder::Outcome{false, "measured " + std::to_string(pe.measured_register)};
    return within(pe.success_probability, 1.0, 1e-12);
  });
  r.add("phase-estimation-bound", "nearest approximation found with probability at least 4/pi^2", [] {
    RngStream rng(2);
    const GateMatrix u(CVector{{cplx(1.0), std::polar(1.0, 2 * kPi / 3)}}.asDiagonal().toDenseMatrix());
    const auto pe = phase_estimate(u, basis_state(1, 1), 4, rng);
    double worst = 1.0;
    for (int n = 1; n <= 20; ++n) worst = std::min(worst, rounding_success_probability(0.5 / std::ldexp(1.0, n), n));
    const double bound = 4 / (kPi * kPi);
    const bool ok = pe.success_probability >= bound && worst >= bound - 1e-12;
    return Recorder::Outcome{ok, "theta = 1/3: " + num(pe.success_probability) + "; worst case " + num(worst) +
                                     " vs " + num(bound)};
  });
}

void learning_checks(Recorder& r) {
  r.add("encoding-qubit-count", "an 8-feature vector needs 3 qubits", [] {
    const int q = encode(RVector::LinSpaced(8, 1.0, 8.0)).state.n_qubits();
    return Recorder::Outcome{q == 3 && encoding_qubits(8) == 3, std::to_string(q) + " qubits"};
  });
  r.add("swap-test-identical", "identical states give P(0) = 1", [] {
    RngStream rng(3);
    const StateVector a(CVector{{0.6, 0.8}});
    return within(swap_test(a, a, 100, rng).exact_p0, 1.0, 1e-12);
  });
  r.add("swap-test-orthogonal", "orthogonal states give P(0) = 1/2", [] {
    RngStream rng(4);
    return within(swap_test(basis_state(1, 0), basis_state(1, 1), 100, rng).exact_p0, 0.5, 1e-12);
  });
  r.add("cluster-mean", "centroid of a four-member cluster", [] {
    RMatrix data(6, 2);
    data << 1, 2, 9, 9, 3, 4, 5, 0, 8, 8, -1, 6;
    const std::vector<int> labels{0, 1, 0, 0, 1, 0};
    const RMatrix mu = cluster_means(data, labels, 2);
    return max_diff(diff(mu.row(0).cast<cplx>(), RVector{{2.0, 3.0}}.transpose().cast<cplx>()), 1e-15);
  });
  r.add("kmedians-centroids-are-rows", "k-medians centroids are data points", [] {
    RMatrix data(8, 2);
    data << 1, 1, 1.2, 1.1, 0.9, 1.3, 1.1, 0.8, 5, 5, 5.3, 4.8, 4.9, 5.2, 5.1, 5.1;
    ClusterConfig cfg;
    RngStream rng(5);
    const auto model = kmedians(data, cfg, rng);
    bool ok = true;
    for (int c = 0; c < model.k; ++c)
      ok = ok && model.centroids.row(c) == data.row(model.centroid_rows[static_cast<std::size_t>(c)]);
    return Recorder::Outcome{ok, ok ? "every centroid is a row" : "a centroid is not a data row"};
  });
}

void cli_checks(Recorder& r) {
  r.add("cli-grover-example", "grover --bits 2 --marked 2 --seed 7", [] {
    std::ostringstream out, err;
    const int code = run({"grover", "--bits", "2", "--marked", "2", "--seed", "7"}, out, err);
    if (code != 0) return Recorder::Outcome{false, "exit code " + std::to_string(code) + ": " + err.str()};
    const auto j = nlohmann::json::parse(out.str());
    const auto& res = j.at("result");
    const bool ok = res.at("measured") == 2 && std::abs(res.at("success_probability").get<double>() - 1.0) < 1e-12;
    return Recorder::Outcome{ok, "measured " + res.at("measured").dump() + ", success probability " +
                                     res.at("success_probability").dump()};
  });
}

}  // namespace

std::vector<WorkedCheck> run_worked_checks() {
  Recorder r;
  state_checks(r);
  density_checks(r);
  gate_checks(r);
  grover_checks(r);
  minimizer_checks(r);
  fourier_checks(r);
  learning_checks(r);
  cli_checks(r);
  return r.take();
}

}  // namespace qmlkit::cli
