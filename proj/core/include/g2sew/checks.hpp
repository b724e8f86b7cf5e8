#pragma once
// Library-level verification bundles: ten self-contained checks, each pinning
// an identity or limit the library must reproduce, with fixed parameters and
// deterministic seeds.  They back both the standalone verification binary and
// the command-line `check` subcommand.
//
// Each bundle reports the worst residual it measured together with the bound
// that residual was held to.  Bundles with several parts at different
// tolerances report the part that came closest to (or crossed) its bound,
// and list every part in the detail string.

#include <g2sew/types.hpp>

#include <string>
#include <vector>

namespace g2sew::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;  // worst measured residual, in that part's metric
  double tolerance = 0.0;     // the bound it was compared against
  double elapsed_seconds = 0.0;
  std::string detail;
};

// Fixed catalogue. Indices are 1-based and stable.
int criterion_count();
const std::string& criterion_name(int index);

CheckResult run_criterion(int index);
CheckResult run_named(const std::string& name);
std::vector<CheckResult> run_all();

// Backs `check jacobi-product --order N`: truncate the cycle-graph product at
// total order N and require the fitted residual order to exceed N.
CheckResult check_jacobi_product(int order);

}  // namespace g2sew::checks
