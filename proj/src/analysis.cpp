#include "esdf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "esdf/errors.hpp"

namespace esdf::analysis {

double envelope_time(const std::vector<double>& times, const std::vector<double>& values,
                     double offset, double level) {
    if (times.size() != values.size() || times.empty())
        throw DomainError("envelope_time: need matching non-empty series");
    std::size_t last = times.size();
    for (std::size_t i = times.size(); i-- > 0;) {
        if (std::abs(values[i] - offset) >= level) {
            last = i;
            break;
        }
    }
    if (last == times.size()) return times.front();
    if (last + 1 == times.size()) return times.back();
    const double a = std::abs(values[last] - offset) - level;
    const double b = std::abs(values[last + 1] - offset) - level;
    const double frac = a / (a - b);
    return times[last] + frac * (times[last + 1] - times[last]);
}

double settling_time(const quapi::TrajectoryResult& r) {
    const auto v = r.rho11();
    const double amp = std::abs(v.front() - 0.5);
    return envelope_time(r.times, v, 0.5, amp / std::numbers::e);
}

double decoherence_time(const quapi::TrajectoryResult& r) {
    const auto v = r.abs_rho12();
    return envelope_time(r.times, v, 0.0, v.front() / std::numbers::e);
}

double max_pointwise(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace esdf::analysis
