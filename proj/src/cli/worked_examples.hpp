#pragma once

#include <string>
#include <vector>

namespace qmlkit::cli {

struct WorkedCheck {
  std::string name;
  /// Which worked example the check replays.
  std::string example;
  bool passed;
  std::string detail;
};

/// Replays every worked numeric example with fixed seeds.
std::vector<WorkedCheck> run_worked_checks();

}  // namespace qmlkit::cli
