#pragma once

// Umbrella header: density estimation for data on an unknown low-dimensional
// manifold. Compactly supported higher-order kernels, pointwise estimates
// with deviation bounds, dyadic bandwidth selection, ball-count dimension
// estimation, graph-geodesic estimation for curves, and a Monte-Carlo rate
// benchmark harness.

#include "manikde/benchmark.hpp"
#include "manikde/curve_model.hpp"
#include "manikde/dimension.hpp"
#include "manikde/gbeta.hpp"
#include "manikde/geodesic.hpp"
#include "manikde/kde.hpp"
#include "manikde/kernel.hpp"
#include "manikde/lepski.hpp"
#include "manikde/numeric.hpp"
#include "manikde/parallel.hpp"
#include "manikde/point_cloud.hpp"
#include "manikde/quadrature.hpp"
#include "manikde/rng.hpp"
#include "manikde/torus_model.hpp"
