#include "qmlkit/circuit.hpp"

#include <json.hpp>

namespace qmlkit {
namespace {

using nlohmann::json;

GateMatrix named_gate(std::string_view name, std::optional<double> phase) {
  if (name.size() > 1 && (name[0] == 'C' || name[0] == 'c'))
    return controlled(named_gate(name.substr(1), phase));
  return standard_gate(name, phase);
}

CMatrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  CMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
      throw DomainError("matrix must be square");
    for (Eigen::Index c = 0; c < rows; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw DomainError("matrix entry must be a number or [re, im]");
      }
    }
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw ConfigError("circuit qubit count " + std::to_string(n_qubits) + " out of range");
}

Circuit& Circuit::add(GateMatrix gate, std::vector<int> targets, std::string label,
                      std::optional<double> phase) {
  validate_positions(targets, n_qubits_, "circuit step");
  if (gate.dim() != (std::size_t{1} << targets.size()))
    throw DomainError("circuit step: gate dimension does not match " +
                      std::to_string(targets.size()) + " targets");
  steps_.push_back({std::move(gate), std::move(targets), std::move(label), phase});
  return *this;
}

Circuit& Circuit::add(std::string_view name, std::vector<int> targets,
                      std::optional<double> phase) {
  return add(named_gate(name, phase), std::move(targets), std::string(name), phase);
}

CMatrix Circuit::to_matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  CMatrix m(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    CVector v = CVector::Zero(dim);
    v[col] = 1.0;
    for (const auto& s : steps_) detail::apply_matrix(s.gate.matrix(), s.targets, n_qubits_, v);
    m.col(col) = v;
  }
  return m;
}

StateVector run_circuit(const Circuit& c, const StateVector& psi) {
  if (c.n_qubits() != psi.n_qubits())
    throw DomainError("run_circuit: circuit has " + std::to_string(c.n_qubits()) +
                      " qubits, state has " + std::to_string(psi.n_qubits()));
  CVector amps = psi.amplitudes();
  for (const auto& s : c.steps()) detail::apply_matrix(s.gate.matrix(), s.targets, c.n_qubits(), amps);
  return StateVector(std::move(amps));
}

std::string circuit_to_json(const Circuit& c) {
  json steps = json::array();
  for (const auto& s : c.steps()) {
    json step = {{"gate", s.label}, {"targets", s.targets}};
    if (s.phase) step["phase"] = *s.phase;
    if (s.label == "matrix") step["matrix"] = matrix_to_json(s.gate.matrix());
    steps.push_back(std::move(step));
  }
  return json{{"n_qubits", c.n_qubits()}, {"steps", std::move(steps)}}.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("circuit JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n_qubits") || !doc["n_qubits"].is_number_integer())
    throw DomainError("circuit JSON: missing integer n_qubits");
  Circuit c(doc["n_qubits"].get<int>());
  if (!doc.contains("steps")) return c;
  if (!doc["steps"].is_array()) throw DomainError("circuit JSON: steps must be an array");
  for (const json& step : doc["steps"]) {
    if (!step.contains("gate") || !step["gate"].is_string() || !step.contains("targets"))
      throw DomainError("circuit JSON: each step needs gate and targets");
    const auto targets = step["targets"].get<std::vector<int>>();
    const auto name = step["gate"].get<std::string>();
    std::optional<double> phase;
    if (step.contains("phase")) phase = step["phase"].get<double>();
    if (name == "matrix") {
      if (!step.contains("matrix")) throw DomainError("circuit JSON: matrix step without matrix");
      c.add(GateMatrix(parse_matrix(step["matrix"])), targets, "matrix");
    } else {
      c.add(name, targets, phase);
    }
  }
  return c;
}

CMatrix matrix_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    return parse_matrix(doc.is_object() && doc.contains("matrix") ? doc["matrix"] : doc);
  } catch (const json::exception& e) {
    throw DomainError(std::string("matrix JSON: ") + e.what());
  }
}

}  // namespace qmlkit
