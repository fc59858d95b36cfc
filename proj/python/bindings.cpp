#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commands.hpp"
#include "qmlkit/clustering.hpp"
#include "qmlkit/density.hpp"
#include "qmlkit/fourier.hpp"
#include "qmlkit/minimizer.hpp"
#include "qmlkit/qnn.hpp"
#include "qmlkit/qpca.hpp"
#include "qmlkit/qsvm.hpp"

namespace py = pybind11;
using namespace qmlkit;

namespace {

EstimateMode estimate_mode(const std::string& s) {
  if (s == "exact") return EstimateMode::Exact;
  if (s == "shots") return EstimateMode::Shots;
  throw ConfigError("mode must be 'exact' or 'shots'");
}

std::vector<std::uint8_t> mark_vector(int n_bits, const std::vector<std::uint64_t>& marked) {
  if (n_bits < 1 || n_bits > kMaxQubits) throw ConfigError("n_bits out of range");
  std::vector<std::uint8_t> mask(std::size_t{1} << n_bits, 0);
  for (auto m : marked) {
    if (m >= mask.size()) throw DomainError("marked index outside the register");
    mask[m] = 1;
  }
  return mask;
}

py::dict cluster_dict(const ClusterModel& m) {
  py::dict d;
  d["k"] = m.k;
  d["centroids"] = m.centroids;
  d["assignments"] = m.assignments;
  d["iterations"] = m.iterations;
  d["converged"] = m.converged;
  d["centroid_rows"] = m.centroid_rows;
  d["warnings"] = m.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "State-vector quantum algorithms and quantum machine-learning routines";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("expectation", [](const CMatrix& obs, const CVector& psi) {
    return expectation(Observable(obs), StateVector(psi));
  }, py::arg("observable"), py::arg("psi"));
  m.def("variance", [](const CMatrix& obs, const CVector& psi) {
    return variance(Observable(obs), StateVector(psi));
  }, py::arg("observable"), py::arg("psi"));
  m.def("mixed_density", [](const std::vector<std::pair<double, CVector>>& parts) {
    std::vector<std::pair<double, StateVector>> states;
    for (const auto& [p, v] : parts) states.emplace_back(p, StateVector(v));
    return CMatrix(mixed_density(states).matrix());
  }, py::arg("parts"), "Weighted sum of |psi><psi| over (probability, amplitudes) pairs.");

  m.def("grover_state", [](int n_bits, const std::vector<std::uint64_t>& marked, int iterations) {
    return CVector(grover_state(n_bits, mark_vector(n_bits, marked), iterations).amplitudes());
  }, py::arg("n_bits"), py::arg("marked"), py::arg("iterations"));
  m.def("grover_search", [](int n_bits, const std::vector<std::uint64_t>& marked, std::optional<int> iterations,
                            std::uint64_t seed) {
    const auto mask = mark_vector(n_bits, marked);
    RngStream rng(seed);
    const SignOracle oracle{n_bits, [&mask](std::uint64_t x) { return mask[x] != 0; },
                            static_cast<std::uint64_t>(std::count(mask.begin(), mask.end(), 1))};
    const auto r = grover_search(oracle, iterations, rng);
    py::dict d;
    d["measured"] = r.measured_index;
    d["iterations"] = r.iterations_used;
    d["success_probability"] = r.success_probability;
    d["amplitudes"] = CVector(r.final_state.amplitudes());
    return d;
  }, py::arg("n_bits"), py::arg("marked"), py::arg("iterations") = py::none(), py::arg("seed") = 0);

  m.def("minimize", [](const std::vector<double>& values, std::uint64_t seed) {
    const int n = std::max(1, log2_exact(values.size()));
    if (values.size() != (std::size_t{1} << n)) throw DomainError("table length must be a power of two");
    RngStream rng(seed);
    const auto r = minimize({n, [&values](std::uint64_t x) { return values[x]; }}, rng);
    py::dict d;
    d["argmin"] = r.argmin;
    d["argmin_bits"] = r.argmin_bits;
    d["min_value"] = r.min_value;
    d["main_iterations"] = r.main_iterations;
    d["oracle_calls"] = r.oracle_calls;
    return d;
  }, py::arg("values"), py::arg("seed") = 0, "Quantum minimum finding over a table of 2^n values.");

  m.def("classical_dft", &classical_dft, py::arg("x"));
  m.def("inverse_dft", &inverse_dft, py::arg("y"));
  m.def("qft_matrix", [](int n) { return CMatrix(qft_gate(n).matrix()); }, py::arg("n_qubits"));
  m.def("qft", [](const CVector& amps) {
    const StateVector psi(amps);
    return CVector(run_circuit(qft_circuit(psi.n_qubits()), psi).amplitudes());
  }, py::arg("amplitudes"), "Runs the QFT circuit on a normalized amplitude vector.");
  m.def("phase_estimate", [](const CMatrix& u, const CVector& eigvec, int n_control, std::uint64_t seed) {
    RngStream rng(seed);
    const auto pe = phase_estimate(GateMatrix(u), StateVector(eigvec), n_control, rng);
    py::dict d;
    d["measured_register"] = pe.measured_register;
    d["theta_estimate"] = pe.theta_estimate;
    d["true_theta"] = pe.true_theta;
    d["success_probability"] = pe.success_probability;
    d["distribution"] = pe.distribution;
    return d;
  }, py::arg("unitary"), py::arg("eigenvector"), py::arg("n_control"), py::arg("seed") = 0);

  m.def("swap_test", [](const CVector& a, const CVector& b, int shots, std::uint64_t seed) {
    RngStream rng(seed);
    const auto e = swap_test(StateVector(a), StateVector(b), shots, rng);
    py::dict d;
    d["p0_hat"] = e.p0_hat;
    d["overlap_sq_hat"] = e.overlap_sq_hat;
    d["exact_p0"] = e.exact_p0;
    return d;
  }, py::arg("a"), py::arg("b"), py::arg("shots") = kDefaultShots, py::arg("seed") = 0);
  m.def("dist_calc", [](const RVector& a, const RVector& b, const std::string& mode, int shots, std::uint64_t seed) {
    RngStream rng(seed);
    return dist_calc(a, b, estimate_mode(mode), shots, rng).dist_sq;
  }, py::arg("a"), py::arg("b"), py::arg("mode") = "exact", py::arg("shots") = kDefaultShots, py::arg("seed") = 0,
     "Squared Euclidean distance estimated through the swap test.");
  m.def("median_calc", [](const RMatrix& points, const std::string& mode, int shots, std::uint64_t seed) {
    RngStream rng(seed);
    return median_calc(points, estimate_mode(mode), shots, rng).index;
  }, py::arg("points"), py::arg("mode") = "exact", py::arg("shots") = kDefaultShots, py::arg("seed") = 0);

  auto cluster = [](bool medians) {
    return [medians](const RMatrix& data, int k, const std::string& mode, int shots, bool grover_argmin, double eta,
                     int max_iterations, int threads, std::uint64_t seed) {
      ClusterConfig cfg;
      cfg.k = k;
      cfg.distance_mode = estimate_mode(mode);
      cfg.shots = shots;
      cfg.use_grover_argmin = grover_argmin;
      cfg.eta = eta;
      cfg.max_iterations = max_iterations;
      cfg.threads = threads;
      RngStream rng(seed);
      return cluster_dict(medians ? kmedians(data, cfg, rng) : kmeans(data, cfg, rng));
    };
  };
  for (const auto& [name, medians] : {std::pair{"kmeans", false}, std::pair{"kmedians", true}})
    m.def(name, cluster(medians), py::arg("data"), py::arg("k"), py::arg("mode") = "exact",
          py::arg("shots") = kDefaultShots, py::arg("grover_argmin") = false, py::arg("eta") = 1e-6,
          py::arg("max_iterations") = 100, py::arg("threads") = 1, py::arg("seed") = 0);

  m.def("qsvm", [](const RMatrix& x, const RVector& y, const std::string& kernel, std::optional<double> gamma,
                   int bits, double alpha_max, std::uint64_t seed) {
    const LabeledDataset data{x, y};
    if (kernel != "linear" && kernel != "gaussian") throw ConfigError("kernel must be 'linear' or 'gaussian'");
    const KernelSpec spec{kernel == "gaussian" ? KernelKind::Gaussian : KernelKind::Linear, gamma};
    RngStream rng(seed);
    const auto s = solve(data, spec, {bits, alpha_max, std::nullopt}, rng);
    std::vector<int> predictions;
    for (Eigen::Index i = 0; i < x.rows(); ++i) predictions.push_back(predict(s, data, spec, x.row(i).transpose()));
    py::dict d;
    d["alphas"] = s.alphas;
    d["b"] = s.b;
    d["penalized_value"] = s.penalized_value;
    d["support_indices"] = s.support_indices;
    d["predictions"] = predictions;
    return d;
  }, py::arg("x"), py::arg("y"), py::arg("kernel") = "linear", py::arg("gamma") = py::none(), py::arg("bits") = 2,
     py::arg("alpha_max") = 4.0, py::arg("seed") = 0);

  m.def("qpca", [](const RMatrix& data, int components, bool standardize, int samples, std::uint64_t seed) {
    const auto in = preprocess(data, standardize);
    const auto model = build_model(in);
    RngStream rng(seed);
    std::vector<int> counts(static_cast<std::size_t>(model.eigenvalues.size()), 0);
    for (const auto& s : eigen_sample(model, samples, rng)) counts[static_cast<std::size_t>(s.component_index)] += s.counts;
    py::dict d;
    d["eigenvalues"] = model.eigenvalues;
    d["eigenvectors"] = model.eigenvectors;
    d["sampled_counts"] = counts;
    d["scores"] = extract_scores(model, in, components, ScoreMode::Exact, 0, rng);
    return d;
  }, py::arg("data"), py::arg("components") = 1, py::arg("standardize") = false, py::arg("samples") = 1000,
     py::arg("seed") = 0);

  m.def("qnn_train", [](const std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>>& examples,
                        int k_bits, int m_bits, const std::string& cost_name, double eta, int epochs,
                        std::uint64_t seed) {
    const QnnEncoding enc{k_bits, m_bits};
    std::vector<QnnExample> data;
    for (const auto& [x1, x2, y] : examples) data.push_back({x1, x2, y});
    QnnTrainConfig cfg;
    if (cost_name != "overlap" && cost_name != "pauli") throw ConfigError("cost must be 'overlap' or 'pauli'");
    cfg.cost = cost_name == "pauli" ? QnnCost::Pauli : QnnCost::Overlap;
    cfg.eta = eta;
    cfg.epochs = epochs;
    RngStream rng(seed);
    const auto r = train(enc, data, cfg, rng);
    std::vector<double> fid;
    for (const auto& ex : data) fid.push_back(label_fidelity(r.params, enc, ex));
    py::dict d;
    d["params"] = r.params;
    d["trace"] = r.trace;
    d["fidelities"] = fid;
    d["stopped_early"] = r.stopped_early;
    return d;
  }, py::arg("examples"), py::arg("k_bits") = 1, py::arg("m_bits") = 1, py::arg("cost") = "overlap",
     py::arg("eta") = 0.1, py::arg("epochs") = 500, py::arg("seed") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs one command-line invocation in-process; returns (exit_code, stdout, stderr).");
}
