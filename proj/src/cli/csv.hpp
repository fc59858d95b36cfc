#pragma once

#include <string>
#include <vector>

#include "qmlkit/qnn.hpp"
#include "qmlkit/qsvm.hpp"

namespace qmlkit::cli {

/// Raised for unreadable or malformed input files. The message starts with
/// "path:line:" when a specific line is at fault (lines are 1-based).
class InputError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Comma-separated numeric rows of equal width, no header. Blank lines are skipped.
RMatrix read_vectors(const std::string& path);

/// One vector, written either as a single row or as a single column.
RVector read_vector(const std::string& path);

/// One complex amplitude per row: "re" or "re,im".
CVector read_complex_vector(const std::string& path);

/// Features followed by a label in {-1, +1}.
LabeledDataset read_labeled(const std::string& path);

/// Rows "bitstring,value" covering every n-bit input exactly once.
std::vector<double> read_objective(const std::string& path, int n_bits);

/// Rows "x1,x2,y" of non-negative integers.
std::vector<QnnExample> read_qnn(const std::string& path);

std::string read_text(const std::string& path);

}  // namespace qmlkit::cli
