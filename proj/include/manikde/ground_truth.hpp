#pragma once

namespace manikde {

// Exact quantities a synthetic model knows about itself. f_min can be 0
// (the parameter densities vanish at the support edge); tau is a numeric
// lower bound for the reach, used for bandwidth-validity warnings only.
struct GroundTruth {
  double f_at_x = 0.0;
  double f_max = 0.0;
  double f_min = 0.0;
  int d = 0;
  double tau = 0.0;
};

}  // namespace manikde
