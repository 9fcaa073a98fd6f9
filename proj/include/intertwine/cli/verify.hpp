#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "intertwine/complex_matrix.hpp"

namespace intertwine::cli {

struct VerifyCheck {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  // Swappable so a deliberately broken superoperator can be fed in.
  std::function<ComplexMatrix(const ComplexMatrix&)> liouvillian_builder;
  std::optional<double> tolerance_override;
  unsigned seed = 20240611;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  // Which printed form of the classical second invariant matches
  // -i(eta1 G - G^dag eta1)/2: "text", "caption", "both" or "neither".
  std::string eta2_form;
  bool all_passed() const;
};

VerifyReport run_verify_suite(const VerifyOptions& options = {});
void print_verify_table(const VerifyReport& report, std::ostream& os);

}  // namespace intertwine::cli
