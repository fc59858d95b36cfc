#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qmlkit/minimizer.hpp"

namespace qmlkit::cli {
namespace {

struct Row {
  int line;
  std::vector<std::string> fields;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw InputError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<Row> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  std::vector<Row> rows;
  std::string text;
  for (int line = 1; std::getline(in, text); ++line) {
    if (trim(text).empty()) continue;
    Row row{line, {}};
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) row.fields.push_back(trim(field));
    if (!text.empty() && text.back() == ',') row.fields.emplace_back();
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path + ": file has no data rows");
  return rows;
}

double to_double(const std::string& path, int line, const std::string& field) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc{} || ptr != last)
    fail(path, line, "'" + field + "' is not a number");
  if (!std::isfinite(v)) fail(path, line, "non-finite value '" + field + "'");
  return v;
}

std::uint64_t to_uint(const std::string& path, int line, const std::string& field) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    fail(path, line, "'" + field + "' is not a non-negative integer");
  return v;
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RMatrix read_vectors(const std::string& path) {
  const auto rows = read_rows(path);
  const std::size_t width = rows.front().fields.size();
  RMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].fields.size() != width)
      fail(path, rows[r].line, "expected " + std::to_string(width) + " columns, found " +
                                   std::to_string(rows[r].fields.size()));
    for (std::size_t c = 0; c < width; ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          to_double(path, rows[r].line, rows[r].fields[c]);
  }
  return out;
}

RVector read_vector(const std::string& path) {
  const RMatrix m = read_vectors(path);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw InputError(path + ": expected a single row or a single column");
}

CVector read_complex_vector(const std::string& path) {
  const auto rows = read_rows(path);
  CVector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() > 2) fail(path, rows[r].line, "expected 're' or 're,im'");
    const double re = to_double(path, rows[r].line, f[0]);
    const double im = f.size() == 2 ? to_double(path, rows[r].line, f[1]) : 0.0;
    out[static_cast<Eigen::Index>(r)] = cplx(re, im);
  }
  return out;
}

LabeledDataset read_labeled(const std::string& path) {
  const RMatrix m = read_vectors(path);
  if (m.cols() < 2) throw InputError(path + ": labeled data needs features and a label column");
  const auto rows = read_rows(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double y = m(i, m.cols() - 1);
    if (y != 1.0 && y != -1.0)
      fail(path, rows[static_cast<std::size_t>(i)].line, "label must be -1 or 1");
  }
  return {m.leftCols(m.cols() - 1), m.col(m.cols() - 1)};
}

std::vector<double> read_objective(const std::string& path, int n_bits) {
  if (n_bits < 1 || n_bits > kMinimizerMaxBits)
    throw ConfigError("objective: bit count must be in [1, " + std::to_string(kMinimizerMaxBits) + "]");
  const auto rows = read_rows(path);
  const std::size_t size = std::size_t{1} << n_bits;
  std::vector<double> values(size);
  std::vector<int> seen(size, 0);
  for (const auto& row : rows) {
    if (row.fields.size() != 2) fail(path, row.line, "expected 'bitstring,value'");
    const std::string& bits = row.fields[0];
    if (bits.size() != static_cast<std::size_t>(n_bits) ||
        bits.find_first_not_of("01") != std::string::npos)
      fail(path, row.line, "'" + bits + "' is not a " + std::to_string(n_bits) + "-bit string");
    const auto x = from_bitstring(bits);
    if (seen[x]) fail(path, row.line, "duplicate bitstring " + bits + " (first on line " + std::to_string(seen[x]) + ")");
    seen[x] = row.line;
    values[x] = to_double(path, row.line, row.fields[1]);
  }
  for (std::size_t x = 0; x < size; ++x)
    if (!seen[x]) throw InputError(path + ": no value for input " + to_bitstring(x, n_bits));
  return values;
}

std::vector<QnnExample> read_qnn(const std::string& path) {
  std::vector<QnnExample> out;
  for (const auto& row : read_rows(path)) {
    if (row.fields.size() != 3) fail(path, row.line, "expected 'x1,x2,y'");
    out.push_back({to_uint(path, row.line, row.fields[0]), to_uint(path, row.line, row.fields[1]),
                   to_uint(path, row.line, row.fields[2])});
  }
  return out;
}

}  // namespace qmlkit::cli
