#include "esdf/quadrature.hpp"

#include <Eigen/Dense>

namespace esdf::quad {

double wynn_epsilon(std::span<const double> s) {
    const std::size_t n = s.size();
    if (n == 0) throw DomainError("wynn_epsilon: empty sequence");
    if (n < 3) return s.back();
    // e[k] holds column k of the epsilon table for the current diagonal.
    std::vector<std::vector<double>> e(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) e[i][1] = s[i];
    for (std::size_t k = 2; k <= n; ++k) {
        for (std::size_t i = 0; i + k <= n; ++i) {
            const double diff = e[i + 1][k - 1] - e[i][k - 1];
            if (diff == 0.0) return e[i + 1][k - 1];
            e[i][k] = e[i + 1][k - 2] + 1.0 / diff;
        }
    }
    // Odd columns (1-based) carry the estimates; take the deepest one.
    const std::size_t deepest = (n % 2 == 1) ? n : n - 1;
    return e[0][deepest];
}

double richardson(std::span<const double> h, std::span<const double> values,
                  std::span<const int> powers) {
    const std::size_t n = h.size();
    if (n == 0 || values.size() != n) throw DomainError("richardson: sample size mismatch");
    if (powers.size() + 1 < n) throw DomainError("richardson: not enough error powers");
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, 0) = 1.0;
        for (std::size_t j = 1; j < n; ++j) a(i, j) = std::pow(h[i], powers[j - 1]);
        b(i) = values[i];
    }
    return a.colPivHouseholderQr().solve(b)(0);
}

} // namespace esdf::quad
