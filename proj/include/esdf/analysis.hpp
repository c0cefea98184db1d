// analysis.hpp: envelope metrics used to compare trajectories
//
// Relaxation is measured on |rho11 - 1/2|, decoherence on |rho12|. The decay
// time is the last moment the quantity is still at or above 1/e of its
// initial value, linearly interpolated between samples.

#pragma once

#include <vector>

#include "esdf/quapi.hpp"

namespace esdf::analysis {

// Last time at which |values - offset| >= level (linear interpolation of the
// downward crossing). Returns the final time if the level is never left.
double envelope_time(const std::vector<double>& times, const std::vector<double>& values,
                     double offset, double level);

double settling_time(const quapi::TrajectoryResult& r);
double decoherence_time(const quapi::TrajectoryResult& r);

// max_i |a_i - b_i| over the common prefix.
double max_pointwise(const std::vector<double>& a, const std::vector<double>& b);

} // namespace esdf::analysis
