#pragma once

#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace wirepol {

/// Neumaier-compensated running sum. Deterministic for a fixed term order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            correction_ += (sum_ - t) + x;
        else
            correction_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw domain_error("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pnm1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * std::abs(x) + 1e-300) break;
        }
        // Recompute the derivative at the converged root for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// The rule mapped affinely onto [lo, hi].
inline QuadratureRule gauss_legendre(int n, double lo, double hi) {
    QuadratureRule rule = gauss_legendre(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

} // namespace wirepol
