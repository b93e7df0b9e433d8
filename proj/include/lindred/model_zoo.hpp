#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lindred/lindblad.hpp"

namespace lindred {

/// Catalog entry for one benchmark model: name, tunable parameters with
/// defaults, and the analytically known facts the test suites check against.
struct ZooEntry {
  std::string name;
  std::string summary;
  std::map<std::string, double> defaults;
  Eigen::Index expected_dbar = 0;
  std::optional<double> expected_gamma;          // when known in closed form
  std::optional<std::string> expected_note;      // e.g. effective-rate formula
};

using ZooParams = std::map<std::string, double>;

const std::vector<ZooEntry>& zoo_entries();

/// Builds a benchmark model by name. Unknown parameter keys and invalid values
/// (nonpositive rates, n_max < 4 for two_photon_loss) are rejected.
GKSLModel zoo_build(const std::string& name, const ZooParams& params = {});

/// Purcell effective decay rate 4 g^2 / kappa carried by eps^2 F^{(2)}.
double purcell_effective_rate(double g, double kappa);

} // namespace lindred
