#include "commands.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"
#include "worked_examples.hpp"
#include "qmlkit/clustering.hpp"
#include "qmlkit/fourier.hpp"
#include "qmlkit/qnn.hpp"
#include "qmlkit/qpca.hpp"
#include "qmlkit/qsvm.hpp"

namespace qmlkit::cli {
namespace {

using Json = nlohmann::ordered_json;

Json to_json(const RVector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json to_json(const CVector& v) {
  Json a = Json::array();
  for (const cplx& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

Json to_json(const RMatrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(RVector(m.row(r).transpose())));
  return a;
}

Json to_json(const std::vector<double>& v) { return Json(v); }

double max_abs(const CVector& a, const CVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Shared state of one invocation.
struct Context {
  std::uint64_t seed = 0;
  std::string seed_source;
  int threads = 1;
  bool verbose = false;
  std::string format = "json";
  Json timings = Json::object();
  std::vector<std::string> warnings;
  std::ostream* err = nullptr;

  RngStream rng() const { return RngStream(seed); }

  template <class F>
  auto timed(const std::string& stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = f();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    timings[stage] = ms;
    if (verbose) *err << "[" << stage << "] " << std::fixed << std::setprecision(3) << ms << " ms\n";
    return result;
  }
};

EstimateMode parse_estimate_mode(const std::string& s) {
  return s == "shots" ? EstimateMode::Shots : EstimateMode::Exact;
}

int checked_qubits(int n, const char* what) {
  if (n < 1 || n > kMaxQubits)
    throw ConfigError(std::string(what) + " must be in [1, " + std::to_string(kMaxQubits) + "]");
  return n;
}

// ---------------------------------------------------------------- grover

struct GroverArgs {
  int bits = 0;
  std::vector<std::uint64_t> marked;
  std::optional<int> iterations;
  bool amplitudes = false;
};

Json cmd_grover(const GroverArgs& a, Context& ctx) {
  checked_qubits(a.bits, "--bits");
  const std::uint64_t size = std::uint64_t{1} << a.bits;
  std::set<std::uint64_t> marked(a.marked.begin(), a.marked.end());
  for (auto m : marked)
    if (m >= size) throw DomainError("marked index " + std::to_string(m) + " is outside [0, 2^bits)");
  if (a.iterations && *a.iterations < 0) throw DomainError("--iterations must be non-negative");
  const SignOracle oracle{a.bits, [marked](std::uint64_t x) { return marked.count(x) > 0; },
                          marked.size()};
  auto rng = ctx.rng();
  const auto res = ctx.timed("search", [&] { return grover_search(oracle, a.iterations, rng); });
  Json out;
  out["measured"] = res.measured_index;
  out["measured_bits"] = to_bitstring(res.measured_index, a.bits);
  out["iterations"] = res.iterations_used;
  out["success_probability"] = res.success_probability;
  out["marked"] = Json(std::vector<std::uint64_t>(marked.begin(), marked.end()));
  if (a.amplitudes) out["amplitudes"] = to_json(res.final_state.amplitudes());
  return out;
}

// -------------------------------------------------------------- minimize

struct MinimizeArgs {
  std::optional<int> bits;
  std::string objective;
  std::optional<int> budget;
  std::string backend = "auto";
  bool lowest_on_ties = false;
};

Json cmd_minimize(const MinimizeArgs& a, Context& ctx) {
  std::vector<double> table;
  int bits = 0;
  if (a.objective == "builtin:demo3") {
    if (a.bits && *a.bits != 3) throw ConfigError("builtin:demo3 is defined on 3 bits");
    bits = 3;
    table = {1.0, 2.0, 3.0, 3.0, 0.0, 3.0, 3.0, 3.0};
  } else if (a.objective == "builtin:popcount") {
    if (!a.bits) throw ConfigError("builtin:popcount needs --bits");
    bits = *a.bits;
    if (bits < 1 || bits > kMinimizerMaxBits)
      throw ConfigError("--bits must be in [1, " + std::to_string(kMinimizerMaxBits) + "]");
    table.resize(std::size_t{1} << bits);
    for (std::size_t x = 0; x < table.size(); ++x) table[x] = std::popcount(x);
  } else if (a.objective.rfind("builtin:", 0) == 0) {
    throw ConfigError("unknown builtin objective '" + a.objective + "' (demo3, popcount)");
  } else {
    if (!a.bits) throw ConfigError("an objective table needs --bits");
    bits = *a.bits;
    table = read_objective(a.objective, bits);
  }

  MinimizeConfig cfg;
  cfg.max_main_iterations = a.budget;
  if (a.budget && *a.budget < 1) throw ConfigError("--budget must be positive");
  cfg.prefer_lower_index_on_ties = a.lowest_on_ties;
  cfg.backend = a.backend == "statevector" ? GroverBackend::StateVector
                : a.backend == "closedform" ? GroverBackend::ClosedForm
                                            : GroverBackend::Auto;
  const ObjectiveFn f{bits, [&table](std::uint64_t x) { return table[x]; }};
  auto rng = ctx.rng();
  const auto res = ctx.timed("minimize", [&] { return minimize(f, rng, cfg); });
  const auto host = ctx.timed("host_scan", [&] {
    return static_cast<std::uint64_t>(std::min_element(table.begin(), table.end()) - table.begin());
  });

  Json trace = Json::array();
  for (const auto& s : res.trace)
    trace.push_back({{"threshold", s.threshold},
                     {"threshold_index", s.threshold_index},
                     {"candidate", s.candidate},
                     {"candidate_value", s.candidate_value},
                     {"rounds", s.rounds},
                     {"accepted", s.accepted}});
  Json out;
  out["argmin"] = res.argmin;
  out["argmin_bits"] = res.argmin_bits;
  out["min_value"] = res.min_value;
  out["main_iterations"] = res.main_iterations;
  out["oracle_calls"] = res.oracle_calls;
  out["trace"] = trace;
  out["host_check"] = {{"argmin", host},
                       {"argmin_bits", to_bitstring(host, bits)},
                       {"min_value", table[host]},
                       {"matches", table[host] == res.min_value}};
  if (table[host] != res.min_value)
    ctx.warnings.push_back("minimize returned a non-minimal value; the host scan disagrees");
  return out;
}

// ------------------------------------------------------------------- qft

struct QftArgs {
  int qubits = 0;
  std::string amps;
};

StateVector normalized_input(CVector v, Context& ctx, const std::string& what) {
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kTolerance) {
    std::ostringstream msg;
    msg << what << " had norm " << std::setprecision(12) << norm << " and was normalized";
    ctx.warnings.push_back(msg.str());
    return StateVector::normalize(std::move(v));
  }
  return StateVector(std::move(v));
}

Json cmd_qft(const QftArgs& a, Context& ctx) {
  checked_qubits(a.qubits, "--qubits");
  CVector raw = read_complex_vector(a.amps);
  if (raw.size() != (Eigen::Index{1} << a.qubits))
    throw DomainError("amplitude file has " + std::to_string(raw.size()) + " entries, expected 2^" +
                      std::to_string(a.qubits));
  const StateVector psi = normalized_input(std::move(raw), ctx, "amplitude vector");
  const Circuit circuit = qft_circuit(a.qubits);
  const StateVector out_state = ctx.timed("circuit", [&] { return run_circuit(circuit, psi); });
  const CVector dft = ctx.timed("classical_dft", [&] { return classical_dft(psi.amplitudes()); });
  Json out;
  out["n_qubits"] = a.qubits;
  out["input"] = to_json(psi.amplitudes());
  out["output"] = to_json(out_state.amplitudes());
  out["dft_max_abs_diff"] = max_abs(out_state.amplitudes(), dft);
  if (a.qubits <= kDenseQftMaxQubits) {
    const CVector via_matrix = qft_gate(a.qubits).matrix() * psi.amplitudes();
    out["matrix_max_abs_diff"] = max_abs(out_state.amplitudes(), via_matrix);
  } else {
    out["matrix_max_abs_diff"] = nullptr;
  }
  out["gate_count"] = circuit.steps().size();
  return out;
}

// ------------------------------------------------------------------- dft

struct DftArgs {
  std::string signal;
  int top = 4;
  std::optional<int> keep;
};

struct DftOutput {
  Json json;
  RVector magnitudes;
};

DftOutput cmd_dft(const DftArgs& a, Context& ctx) {
  const CVector x = read_complex_vector(a.signal);
  if (a.top < 0) throw ConfigError("--top must be non-negative");
  const CVector y = ctx.timed("dft", [&] { return classical_dft(x); });
  const RVector mag = y.cwiseAbs();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(mag.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return mag[i] > mag[j]; });

  const auto pick = [&](int count) {
    std::vector<Eigen::Index> bins(order.begin(),
                                   order.begin() + std::min<std::ptrdiff_t>(count, std::ssize(order)));
    std::sort(bins.begin(), bins.end());
    return bins;
  };
  Json out;
  out["n"] = x.size();
  out["top_bins"] = Json(pick(a.top));
  out["magnitudes"] = to_json(mag);
  if (a.keep) {
    if (*a.keep < 0) throw ConfigError("--keep must be non-negative");
    CVector filtered = CVector::Zero(y.size());
    for (auto k : pick(*a.keep)) filtered[k] = y[k];
    const CVector back = ctx.timed("inverse_dft", [&] { return inverse_dft(filtered); });
    out["kept_bins"] = Json(pick(*a.keep));
    out["denoised"] = to_json(RVector(back.real()));
    out["denoised_max_imag"] = back.imag().cwiseAbs().maxCoeff();
  }
  return {out, mag};
}

// ------------------------------------------------------------- phase-est

struct PhaseArgs {
  std::string unitary;
  std::string eigvec;
  int controls = 0;
};

Json cmd_phase(const PhaseArgs& a, Context& ctx) {
  checked_qubits(a.controls, "--controls");
  const GateMatrix u(matrix_from_json(read_text(a.unitary)));
  const StateVector phi = normalized_input(read_complex_vector(a.eigvec), ctx, "eigenvector");
  auto rng = ctx.rng();
  const auto pe = ctx.timed("phase_estimate", [&] { return phase_estimate(u, phi, a.controls, rng); });
  Json out;
  out["n_control"] = pe.n_control;
  out["measured_register"] = pe.measured_register;
  out["theta_estimate"] = pe.theta_estimate;
  out["true_theta"] = pe.true_theta;
  out["nearest_register"] = pe.nearest_register;
  out["delta"] = pe.delta;
  out["success_probability"] = pe.success_probability;
  out["rounding_bound"] = rounding_success_probability(pe.delta, pe.n_control);
  out["distribution"] = to_json(pe.distribution);
  return out;
}

// -------------------------------------------------------- swaptest, dist

struct PairArgs {
  std::string a;
  std::string b;
  std::string mode = "exact";
  int shots = kDefaultShots;
};

Json cmd_swaptest(const PairArgs& p, Context& ctx) {
  if (p.shots < 1) throw ConfigError("--shots must be positive");
  const auto ea = encode(read_vector(p.a));
  const auto eb = encode(read_vector(p.b));
  if (ea.state.dim() != eb.state.dim())
    throw DomainError("vectors encode into registers of different size (" +
                      std::to_string(ea.state.n_qubits()) + " and " +
                      std::to_string(eb.state.n_qubits()) + " qubits)");
  auto rng = ctx.rng();
  const auto est = ctx.timed("swap_test", [&] { return swap_test(ea.state, eb.state, p.shots, rng); });
  const double overlap = std::norm(inner_product(ea.state, eb.state));
  Json out;
  out["register_qubits"] = ea.state.n_qubits();
  out["shots"] = est.shots;
  out["p0_hat"] = est.p0_hat;
  out["overlap_sq_hat"] = est.overlap_sq_hat;
  out["p0_exact"] = est.exact_p0;
  out["overlap_sq_exact"] = overlap;
  return out;
}

Json cmd_dist(const PairArgs& p, Context& ctx) {
  if (p.shots < 1) throw ConfigError("--shots must be positive");
  const RVector a = read_vector(p.a);
  const RVector b = read_vector(p.b);
  auto rng = ctx.rng();
  const auto d = ctx.timed("dist_calc", [&] { return dist_calc(a, b, parse_estimate_mode(p.mode), p.shots, rng); });
  Json out;
  out["dist_sq"] = d.dist_sq;
  out["dist"] = std::sqrt(std::max(0.0, d.dist_sq));
  out["inner_prod"] = d.inner_prod;
  out["z"] = d.z;
  out["register_qubits"] = encoding_qubits(std::max(a.size(), b.size()));
  out["overlap"] = {{"p0_hat", d.overlap.p0_hat},
                    {"overlap_sq_hat", d.overlap.overlap_sq_hat},
                    {"p0_exact", d.overlap.exact_p0},
                    {"shots", d.overlap.shots}};
  out["host_dist_sq"] = a.size() == b.size() ? Json((a - b).squaredNorm()) : Json(nullptr);
  return out;
}

// ---------------------------------------------------------------- median

struct MedianArgs {
  std::string points;
  std::string mode = "exact";
  int shots = kDefaultShots;
};

Json cmd_median(const MedianArgs& m, Context& ctx) {
  if (m.shots < 1) throw ConfigError("--shots must be positive");
  const RMatrix pts = read_vectors(m.points);
  auto rng = ctx.rng();
  const auto r = ctx.timed("median_calc", [&] { return median_calc(pts, parse_estimate_mode(m.mode), m.shots, rng); });
  Json out;
  out["index"] = r.index;
  out["point"] = to_json(r.point);
  out["sums"] = to_json(r.sums);
  return out;
}

// -------------------------------------------------------------- clusters

struct ClusterArgs {
  std::string data;
  int k = 2;
  std::string mode = "exact";
  int shots = kDefaultShots;
  bool grover_argmin = false;
  double eta = 1e-6;
  int max_iterations = 100;
};

Json cmd_cluster(const ClusterArgs& c, bool medians, Context& ctx) {
  if (c.shots < 1) throw ConfigError("--shots must be positive");
  if (c.max_iterations < 1) throw ConfigError("--max-iterations must be positive");
  if (!(c.eta > 0)) throw ConfigError("--eta must be positive");
  const RMatrix data = read_vectors(c.data);
  ClusterConfig cfg;
  cfg.k = c.k;
  cfg.max_iterations = c.max_iterations;
  cfg.eta = c.eta;
  cfg.distance_mode = parse_estimate_mode(c.mode);
  cfg.shots = c.shots;
  cfg.use_grover_argmin = c.grover_argmin;
  cfg.threads = ctx.threads;
  auto rng = ctx.rng();
  const auto model = ctx.timed(medians ? "kmedians" : "kmeans", [&] {
    return medians ? kmedians(data, cfg, rng) : kmeans(data, cfg, rng);
  });
  for (const auto& w : model.warnings) ctx.warnings.push_back(w);

  Json trace = Json::array();
  for (const auto& it : model.trace)
    trace.push_back({{"iteration", it.iteration},
                     {"objective_before", it.objective_before ? Json(*it.objective_before) : Json(nullptr)},
                     {"objective_after", it.objective_after},
                     {"max_shift", it.max_shift},
                     {"reassigned", it.reassigned}});
  Json out;
  out["k"] = model.k;
  out["centroids"] = to_json(model.centroids);
  out["assignments"] = Json(model.assignments);
  out["iterations"] = model.iterations;
  out["converged"] = model.converged;
  if (medians) out["centroid_rows"] = Json(model.centroid_rows);
  out["trace"] = trace;
  return out;
}

// ------------------------------------------------------------------ qsvm

struct SvmArgs {
  std::string data;
  std::string kernel = "linear";
  std::optional<double> gamma;
  int bits = 2;
  double alpha_max = 4.0;
  std::optional<double> penalty;
};

Json cmd_qsvm(const SvmArgs& s, Context& ctx) {
  const auto data = read_labeled(s.data);
  const KernelSpec spec{s.kernel == "gaussian" ? KernelKind::Gaussian : KernelKind::Linear, s.gamma};
  if (spec.kind == KernelKind::Gaussian && !s.gamma) throw ConfigError("--kernel gaussian needs --gamma");
  if (s.bits < 1) throw ConfigError("--bits must be positive");
  if (!(s.alpha_max > 0)) throw ConfigError("--alpha-max must be positive");
  const AlphaGrid grid{s.bits, s.alpha_max, s.penalty};
  auto rng = ctx.rng();
  const auto sol = ctx.timed("solve", [&] { return solve(data, spec, grid, rng); });
  std::vector<int> predictions;
  int correct = 0;
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    predictions.push_back(predict(sol, data, spec, data.x.row(i).transpose()));
    correct += predictions.back() == data.y[i];
  }
  Json out;
  out["alphas"] = to_json(sol.alphas);
  out["theta"] = sol.theta ? to_json(*sol.theta) : Json(nullptr);
  out["b"] = sol.b;
  out["dual_value"] = sol.dual_value;
  out["penalized_value"] = sol.penalized_value;
  out["penalty_coeff"] = sol.penalty_coeff;
  out["constraint_residual"] = sol.alphas.dot(data.y);
  out["support_indices"] = Json(sol.support_indices);
  out["grid_index"] = sol.grid_index;
  out["minimizer_index"] = sol.minimizer_index;
  out["oracle_calls"] = sol.oracle_calls;
  out["main_iterations"] = sol.main_iterations;
  out["predictions"] = Json(predictions);
  out["training_accuracy"] = static_cast<double>(correct) / static_cast<double>(data.x.rows());
  return out;
}

// ------------------------------------------------------------------ qpca

struct PcaArgs {
  std::string data;
  int components = 1;
  bool standardize = false;
  std::string mode = "exact";
  int samples = 1000;
  int controls = kDefaultPhaseControls;
  double time = kDefaultEvolutionTime;
  int shots = kDefaultShots;
};

Json cmd_qpca(const PcaArgs& p, Context& ctx) {
  if (p.samples < 1) throw ConfigError("--samples must be positive");
  if (p.shots < 1) throw ConfigError("--shots must be positive");
  checked_qubits(p.controls, "--controls");
  const RMatrix raw = read_vectors(p.data);
  const auto input = preprocess(raw, p.standardize);
  const auto model = ctx.timed("build_model", [&] { return build_model(input, p.time, p.controls); });
  auto rng = ctx.rng();
  auto sample_rng = rng.split(1);
  auto score_rng = rng.split(2);
  const auto samples = ctx.timed("eigen_sample", [&] { return eigen_sample(model, p.samples, sample_rng); });
  const auto mode = p.mode == "swaptest" ? ScoreMode::SwapTest : ScoreMode::Exact;
  const RMatrix scores = ctx.timed("scores", [&] {
    return extract_scores(model, input, p.components, mode, p.shots, score_rng);
  });

  Json counts = Json::array();
  for (const auto& s : samples)
    counts.push_back({{"component", s.component_index},
                      {"register", s.register_value},
                      {"lambda_measured", s.lambda_measured},
                      {"counts", s.counts}});
  Json out;
  out["eigenvalues"] = to_json(model.eigenvalues);
  out["eigenvectors"] = to_json(RMatrix(model.eigenvectors.leftCols(p.components).transpose()));
  out["rank"] = numerical_rank(model);
  out["t"] = model.t;
  out["n_control"] = model.n_control;
  out["lambda_resolution"] = 2 * std::numbers::pi / (model.t * std::ldexp(1.0, model.n_control));
  out["sampled_counts"] = counts;
  out["scores"] = to_json(scores);
  return out;
}

// ------------------------------------------------------------------- qnn

struct QnnArgs {
  std::string data;
  int k_bits = 1;
  int m_bits = 1;
  std::string cost = "overlap";
  double eta = 0.1;
  int epochs = 500;
  std::optional<std::string> params_out;
};

Json cmd_qnn(const QnnArgs& q, Context& ctx) {
  const QnnEncoding enc{q.k_bits, q.m_bits};
  enc.validate();
  if (!(q.eta > 0)) throw ConfigError("--eta must be positive");
  if (q.epochs < 0) throw ConfigError("--epochs must be non-negative");
  const auto data = read_qnn(q.data);
  QnnTrainConfig cfg;
  cfg.eta = q.eta;
  cfg.epochs = q.epochs;
  cfg.cost = q.cost == "pauli" ? QnnCost::Pauli : QnnCost::Overlap;
  auto rng = ctx.rng();
  const auto res = ctx.timed("train", [&] { return train(enc, data, cfg, rng); });
  if (res.stopped_early) ctx.warnings.push_back("training stopped early after repeated cost increases");

  if (q.params_out) {
    std::ofstream f(*q.params_out);
    if (!f) throw InputError("cannot write parameter file: " + *q.params_out);
    f << std::setprecision(17);
    for (double v : res.params) f << v << '\n';
  }
  Json fidelities = Json::array();
  for (const auto& ex : data) fidelities.push_back(label_fidelity(res.params, enc, ex));
  Json out;
  out["n_qubits"] = enc.n_total();
  out["n_params"] = enc.n_params();
  out["final_cost"] = res.trace.back();
  out["trace"] = to_json(res.trace);
  out["epochs_run"] = res.epochs_run;
  out["final_eta"] = res.final_eta;
  out["stopped_early"] = res.stopped_early;
  out["fidelities"] = fidelities;
  out["params_file"] = q.params_out ? Json(*q.params_out) : Json(nullptr);
  return out;
}

// ----------------------------------------------------------- paper-check

Json cmd_worked(Context& ctx, bool& all_passed) {
  const auto checks = ctx.timed("checks", [] { return run_worked_checks(); });
  Json list = Json::array();
  int passed = 0;
  for (const auto& c : checks) {
    passed += c.passed;
    list.push_back({{"name", c.name}, {"example", c.example}, {"passed", c.passed}, {"detail", c.detail}});
  }
  all_passed = passed == static_cast<int>(checks.size()) && !checks.empty();
  Json out;
  out["total"] = checks.size();
  out["passed"] = passed;
  out["failed"] = static_cast<int>(checks.size()) - passed;
  out["checks"] = list;
  return out;
}

// ------------------------------------------------------------- plumbing

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::string& source) {
  if (flag) {
    source = "flag";
    return *flag;
  }
  if (const char* env = std::getenv("QMLKIT_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw ConfigError("QMLKIT_SEED must be a non-negative 64-bit integer, got '" + s + "'");
    source = "env";
    return v;
  }
  source = "random";
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) ^ rd();
}

Json echo_options(const CLI::App* sub) {
  Json cfg = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "help-all") continue;
    if (opt->get_expected_min() == 0) {
      cfg[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      if (r.size() == 1) {
        cfg[name] = r.front();
      } else {
        cfg[name] = Json(r);
      }
    } else if (!opt->get_default_str().empty()) {
      cfg[name] = opt->get_default_str();
    } else {
      cfg[name] = nullptr;
    }
  }
  return cfg;
}

void write_text(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw InputError("cannot write output file: " + *path);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum algorithm and quantum machine-learning toolkit (state-vector simulation)", "qmlkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::optional<std::uint64_t> seed_flag;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::optional<std::string> output;
  Context ctx;
  ctx.err = &err;
  app.add_option("--seed", seed_flag, "64-bit seed (falls back to QMLKIT_SEED, then a random seed)");
  app.add_option("--threads", threads, "Worker threads for parallel stages")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--output,-o", output, "Write the report to this file instead of stdout");
  app.add_option("--format", ctx.format, "Report format")->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--verbose,-v", ctx.verbose, "Print stage timings to stderr");

  const auto modes = CLI::IsMember({"exact", "shots"});

  GroverArgs grover;
  auto* g = app.add_subcommand("grover", "Grover search for marked inputs");
  g->add_option("--bits", grover.bits, "Register size n")->required();
  g->add_option("--marked", grover.marked, "Marked indices, comma separated")->required()->delimiter(',');
  g->add_option("--iterations", grover.iterations, "Rounds (default floor(pi/4 sqrt(2^n/k)))");
  g->add_flag("--amplitudes", grover.amplitudes, "Include final amplitudes");

  MinimizeArgs mini;
  auto* mn = app.add_subcommand("minimize", "Quantum minimum finding over an n-bit objective");
  mn->add_option("--bits", mini.bits, "Input size n");
  mn->add_option("--objective", mini.objective, "CSV of 'bitstring,value' rows, or builtin:demo3 / builtin:popcount")
      ->required();
  mn->add_option("--budget", mini.budget, "Main-loop iteration budget");
  mn->add_option("--backend", mini.backend, "Grover simulation backend")->capture_default_str()
      ->check(CLI::IsMember({"auto", "statevector", "closedform"}));
  mn->add_flag("--lowest-on-ties", mini.lowest_on_ties, "Resolve equal values to the lowest index");

  QftArgs qft;
  auto* qf = app.add_subcommand("qft", "Quantum Fourier transform of an amplitude vector");
  qf->add_option("--qubits", qft.qubits, "Register size n")->required();
  qf->add_option("--amps", qft.amps, "CSV with 're' or 're,im' per row")->required();

  DftArgs dft;
  auto* df = app.add_subcommand("dft", "Classical DFT magnitudes of a signal");
  df->add_option("--signal", dft.signal, "CSV with one sample per row")->required();
  df->add_option("--top", dft.top, "Report the largest bins")->capture_default_str();
  df->add_option("--keep", dft.keep, "Zero all but the largest bins and transform back");

  PhaseArgs phase;
  auto* pe = app.add_subcommand("phase-est", "Phase estimation of an eigenvector");
  pe->add_option("--unitary", phase.unitary, "JSON matrix [[[re, im], ...], ...]")->required();
  pe->add_option("--eigvec", phase.eigvec, "CSV eigenvector")->required();
  pe->add_option("--controls", phase.controls, "Control qubits")->required();

  PairArgs swap;
  auto* sw = app.add_subcommand("swaptest", "Swap test overlap of two encoded vectors");
  sw->add_option("--a", swap.a, "First vector CSV")->required();
  sw->add_option("--b", swap.b, "Second vector CSV")->required();
  sw->add_option("--shots", swap.shots, "Measurements")->capture_default_str();

  PairArgs dist;
  auto* di = app.add_subcommand("dist", "Euclidean distance through the swap test");
  di->add_option("--a", dist.a, "First vector CSV")->required();
  di->add_option("--b", dist.b, "Second vector CSV")->required();
  di->add_option("--mode", dist.mode, "Overlap estimate")->capture_default_str()->check(modes);
  di->add_option("--shots", dist.shots, "Measurements in shots mode")->capture_default_str();

  MedianArgs median;
  auto* me = app.add_subcommand("median", "Point with the smallest summed distance");
  me->add_option("--points", median.points, "CSV, one point per row")->required();
  me->add_option("--mode", median.mode, "Overlap estimate")->capture_default_str()->check(modes);
  me->add_option("--shots", median.shots, "Measurements in shots mode")->capture_default_str();

  ClusterArgs cluster;
  auto add_cluster = [&](const char* name, const char* desc) {
    auto* s = app.add_subcommand(name, desc);
    s->add_option("--data", cluster.data, "CSV, one vector per row")->required();
    s->add_option("--k", cluster.k, "Clusters")->capture_default_str();
    s->add_option("--mode", cluster.mode, "Distance estimate")->capture_default_str()->check(modes);
    s->add_option("--shots", cluster.shots, "Measurements in shots mode")->capture_default_str();
    s->add_flag("--grover-argmin", cluster.grover_argmin, "Assign through quantum minimum finding");
    s->add_option("--eta", cluster.eta, "Centroid movement threshold")->capture_default_str();
    s->add_option("--max-iterations", cluster.max_iterations, "Iteration cap")->capture_default_str();
    return s;
  };
  auto* km = add_cluster("kmeans", "Quantum k-means clustering");
  auto* kd = add_cluster("kmedians", "Quantum k-medians clustering");

  SvmArgs svm;
  auto* sv = app.add_subcommand("qsvm", "Support vector machine through grid minimization");
  sv->add_option("--data", svm.data, "CSV of features followed by a label in {-1, 1}")->required();
  sv->add_option("--kernel", svm.kernel, "Kernel")->capture_default_str()
      ->check(CLI::IsMember({"linear", "gaussian"}));
  sv->add_option("--gamma", svm.gamma, "Gaussian width");
  sv->add_option("--bits", svm.bits, "Bits per multiplier")->capture_default_str();
  sv->add_option("--alpha-max", svm.alpha_max, "Largest multiplier")->capture_default_str();
  sv->add_option("--penalty", svm.penalty, "Equality-constraint penalty weight");

  PcaArgs pca;
  auto* pc = app.add_subcommand("qpca", "Quantum principal component analysis");
  pc->add_option("--data", pca.data, "CSV, one sample per row")->required();
  pc->add_option("--components", pca.components, "Score components R")->capture_default_str();
  pc->add_flag("--standardize", pca.standardize, "Scale columns to unit variance");
  pc->add_option("--mode", pca.mode, "Score estimate")->capture_default_str()
      ->check(CLI::IsMember({"exact", "swaptest"}));
  pc->add_option("--samples", pca.samples, "Eigen-sampling draws")->capture_default_str();
  pc->add_option("--controls", pca.controls, "Phase-estimation control qubits")->capture_default_str();
  pc->add_option("--time", pca.time, "Evolution time t")->capture_default_str();
  pc->add_option("--shots", pca.shots, "Swap-test measurements")->capture_default_str();

  QnnArgs qnn;
  auto* qn = app.add_subcommand("qnn", "Train a quantum neural network");
  qn->add_option("--data", qnn.data, "CSV rows 'x1,x2,y'")->required();
  qn->add_option("--k-bits", qnn.k_bits, "Bits per feature")->capture_default_str();
  qn->add_option("--m-bits", qnn.m_bits, "Label bits")->capture_default_str();
  qn->add_option("--cost", qnn.cost, "Cost function")->capture_default_str()
      ->check(CLI::IsMember({"overlap", "pauli"}));
  qn->add_option("--eta", qnn.eta, "Learning rate")->capture_default_str();
  qn->add_option("--epochs", qnn.epochs, "Epochs")->capture_default_str();
  qn->add_option("--params-out", qnn.params_out, "Write trained parameters here");

  auto* wc = app.add_subcommand("paper-check", "Replay every worked numeric example");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    if (ctx.format == "csv" && sub != df) throw ConfigError("--format csv is only available for dft");
    ctx.seed = resolve_seed(seed_flag, ctx.seed_source);
    ctx.threads = threads;

    Json result;
    bool ok = true;
    std::optional<RVector> csv_magnitudes;
    if (sub == g) result = cmd_grover(grover, ctx);
    else if (sub == mn) result = cmd_minimize(mini, ctx);
    else if (sub == qf) result = cmd_qft(qft, ctx);
    else if (sub == df) {
      auto d = cmd_dft(dft, ctx);
      result = std::move(d.json);
      csv_magnitudes = std::move(d.magnitudes);
    } else if (sub == pe) result = cmd_phase(phase, ctx);
    else if (sub == sw) result = cmd_swaptest(swap, ctx);
    else if (sub == di) result = cmd_dist(dist, ctx);
    else if (sub == me) result = cmd_median(median, ctx);
    else if (sub == km) result = cmd_cluster(cluster, false, ctx);
    else if (sub == kd) result = cmd_cluster(cluster, true, ctx);
    else if (sub == sv) result = cmd_qsvm(svm, ctx);
    else if (sub == pc) result = cmd_qpca(pca, ctx);
    else if (sub == qn) result = cmd_qnn(qnn, ctx);
    else if (sub == wc) result = cmd_worked(ctx, ok);

    for (const auto& w : ctx.warnings) err << "warning: " << w << '\n';

    if (ctx.format == "csv") {
      std::ostringstream csv;
      csv << "k,magnitude\n" << std::setprecision(17);
      for (Eigen::Index k = 0; k < csv_magnitudes->size(); ++k) csv << k << ',' << (*csv_magnitudes)[k] << '\n';
      write_text(output, csv.str(), out);
    } else {
      Json config;
      config["seed"] = ctx.seed;
      config["seed_source"] = ctx.seed_source;
      config["threads"] = ctx.threads;
      config["format"] = ctx.format;
      config["options"] = echo_options(sub);
      Json report;
      report["command"] = command;
      report["config"] = config;
      report["result"] = result;
      report["timings_ms"] = ctx.timings;
      report["warnings"] = Json(ctx.warnings);
      write_text(output, report.dump(2) + "\n", out);
    }
    if (!ok) {
      err << "error: " << result["failed"].get<int>() << " of " << result["total"].get<int>()
          << " worked examples failed\n";
      return kExitDomain;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << command << ": " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace qmlkit::cli
