#pragma once

// Combined report on a realized pattern: verification, sectors, singular
// link and diagrams, end holonomy, budget and classification.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cone_forge/io.hpp"

namespace cone_forge {

struct ReportConfig {
  std::uint64_t projection_seed = 1;
  int projection_count = 5;
  double tolerance = kDefaultTolerance;
  std::optional<Rational> clip_radius;  // default: bounding radius + largest box side
};

/// Clip radius used when the config leaves it unset.
Rational default_clip_radius(const RealizedPattern& realized);

/// `jobs` spreads the projections and end checks over threads; the report
/// does not depend on it. `input_problems` lists inconsistencies found while
/// reading the realization and marks the report as failed.
io::Json build_report(const RealizedPattern& realized, const ReportConfig& config, int jobs = 1,
                      const std::vector<std::string>& input_problems = {});

/// Linking matrices of projection_count generic projections with seeds
/// seed, seed + 1, ...
std::vector<std::vector<std::vector<int>>> linking_matrices(const PolylineLink& link, std::uint64_t seed, int count,
                                                            int jobs = 1);

}  // namespace cone_forge
