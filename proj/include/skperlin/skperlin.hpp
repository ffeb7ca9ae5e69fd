#pragma once

// Umbrella header: skeleton-based Perlin noise for motion label smoothing,
// with property verifiers, baseline strategies and pose metrics.

#include "skperlin/analysis.hpp"
#include "skperlin/io.hpp"
#include "skperlin/metrics.hpp"
#include "skperlin/motion.hpp"
#include "skperlin/noise.hpp"
#include "skperlin/rotmath.hpp"
#include "skperlin/skeleton.hpp"
#include "skperlin/smoothing.hpp"
