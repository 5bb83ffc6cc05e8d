#pragma once

// Integer-order Bessel functions of complex argument and Hankel functions
// of the first kind for real positive argument.
//
// J_m(z): ascending series for |z| <= series_radius, Miller's downward
// recurrence above it. The recurrence is normalised with
//     e^{-iz} = J_0(z) + 2 sum_{k>=1} (-i)^k J_k(z)        (Im z >= 0)
// (conjugate identity for Im z < 0, and 1 = J_0 + 2 sum J_{2k} for real z)
// and carried with periodic rescaling, so the exponentially scaled values
// J_m(z) e^{-|Im z|} are available for any |Im z|.
//
// Y_0, Y_1 for real x: Neumann series over J_k for x <= asymptotic_threshold,
// Hankel's asymptotic expansion above; Y_m by upward recurrence.

#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace wirepol::special {

using complex = std::complex<double>;

inline constexpr int max_order = 100000;
inline constexpr double series_radius = 8.0;
inline constexpr double overflow_guard = 700.0;
inline constexpr double asymptotic_threshold = 25.0;

namespace detail {

template <class T>
inline constexpr bool is_complex_v = !std::is_floating_point_v<T>;

inline void check_order(int m) {
    if (m > max_order || m < -max_order)
        throw range_error("Bessel order " + std::to_string(m) + " exceeds ceiling " +
                          std::to_string(max_order));
}

inline double imag_part(double) { return 0.0; }
inline double imag_part(const complex& z) { return z.imag(); }

/// Starting order for the downward recurrence: well past the turning
/// point |z| so the neglected dominant solution is below double precision.
inline int miller_start(double abs_z, int max_order_needed) {
    const double base = std::max<double>(max_order_needed, std::ceil(abs_z));
    int n = static_cast<int>(base + std::ceil(12.0 * std::cbrt(std::max(abs_z, 1.0)))) + 30;
    return n + (n & 1);
}

/// J_m(z) by the ascending series. Accurate for small |z|.
template <class T>
T series_single(int m, T z) {
    if (z == T(0)) return m == 0 ? T(1) : T(0);
    const T half = z / 2.0;
    T lead(1);
    for (int k = 1; k <= m; ++k) {
        lead *= half / static_cast<double>(k);
        if (lead == T(0)) return T(0);
    }
    const T q = -half * half;
    T term(1), sum(1);
    const double abs_z = std::abs(z);
    for (int j = 1; j < 1000; ++j) {
        term *= q / (static_cast<double>(j) * static_cast<double>(j + m));
        sum += term;
        if (j > abs_z && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return lead * sum;
}

/// Miller's algorithm: J_0..J_max times e^{-|Im z|}.
template <class T>
std::vector<T> miller_scaled(T z, int max_order_needed) {
    const int start = miller_start(std::abs(z), max_order_needed);
    std::vector<T> out(static_cast<std::size_t>(max_order_needed) + 1, T(0));

    // Normalisation weights w_k of the generating-function identity.
    const bool upper = imag_part(z) >= 0.0;
    auto weight = [upper](int k) -> T {
        if (k == 0) return T(1);
        if constexpr (is_complex_v<T>) {
            static const complex cycle_upper[4] = {{2, 0}, {0, -2}, {-2, 0}, {0, 2}};
            static const complex cycle_lower[4] = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
            return upper ? cycle_upper[k & 3] : cycle_lower[k & 3];
        } else {
            return (k & 1) ? T(0) : T(2);
        }
    };

    constexpr double big = 1e250;
    constexpr double shrink = 1e-250;
    T above(0);
    T cur(1);
    T sum = weight(start) * cur;
    if (start <= max_order_needed) out[start] = cur;
    int lowest_stored = start <= max_order_needed ? start : max_order_needed + 1;

    for (int k = start; k >= 1; --k) {
        const T below = (2.0 * k / z) * cur - above;
        above = cur;
        cur = below;
        const int idx = k - 1;
        if (idx <= max_order_needed) {
            out[idx] = cur;
            lowest_stored = idx;
        }
        sum += weight(idx) * cur;
        if (std::abs(cur) > big) {
            cur *= shrink;
            above *= shrink;
            sum *= shrink;
            for (int j = lowest_stored; j <= max_order_needed; ++j) out[j] *= shrink;
        }
    }

    T target(1);
    if constexpr (is_complex_v<T>) {
        // e^{-iz} e^{-Im z} for Im z >= 0, e^{iz} e^{Im z} otherwise.
        target = upper ? std::polar(1.0, -z.real()) : std::polar(1.0, z.real());
    }
    const T factor = target / sum;
    for (auto& v : out) v *= factor;
    return out;
}

inline void check_finite(const complex& v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw range_error(std::string(what) + ": result not representable in double precision");
}

inline void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw range_error(std::string(what) + ": result not representable in double precision");
}

/// Hankel's expansion of H^(1)_nu(x) for nu in {0, 1}, large x.
inline complex hankel1_asymptotic(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    complex sum(1.0, 0.0);
    complex ik(1.0, 0.0);
    double previous = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(term) > previous) break;
        ik *= complex(0.0, 1.0);
        sum += ik * term;
        previous = std::abs(term);
        if (previous < 1e-18) break;
    }
    // e^{i(x - pi/4 - nu pi/2)}
    const double c = std::cos(x), s = std::sin(x);
    complex phase((c + s) / std::numbers::sqrt2, (s - c) / std::numbers::sqrt2);
    if (nu == 1) phase *= complex(0.0, -1.0);
    return std::sqrt(2.0 / (constants::pi * x)) * phase * sum;
}

inline std::pair<double, double> bessel_y01(double x) {
    if (x > asymptotic_threshold) {
        return {hankel1_asymptotic(0, x).imag(), hankel1_asymptotic(1, x).imag()};
    }
    const int n = miller_start(x, 0);
    const std::vector<double> j = miller_scaled(x, n);
    const double log_term = std::log(x / 2.0) + constants::euler_gamma;
    // Neumann series, summed from the small tail upward.
    double s0 = 0.0, s1 = 0.0;
    for (int k = n / 2 - 1; k >= 1; --k) {
        const double sign = (k & 1) ? -1.0 : 1.0;
        s0 += sign * j[2 * k] / k;
        s1 += sign * (1.0 + 2.0 * k) * j[2 * k + 1] / (static_cast<double>(k) * (k + 1));
    }
    const double y0 = (2.0 / constants::pi) * (log_term * j[0] - 2.0 * s0);
    const double y1 = -2.0 / (constants::pi * x) * j[0] +
                      (2.0 / constants::pi) * ((log_term - 1.0) * j[1] - s1);
    return {y0, y1};
}

template <class T>
T parity(int m, T v) {
    return (m < 0 && (-m) % 2 == 1) ? -v : v;
}

} // namespace detail

/// J_0(z)..J_max(z) multiplied by e^{-|Im z|}. Never overflows.
template <class T>
std::vector<T> bessel_j_scaled_sequence(T z, int max_order_needed) {
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, complex>);
    if (max_order_needed < 0) throw domain_error("bessel_j_scaled_sequence: negative max order");
    detail::check_order(max_order_needed);
    if (std::abs(z) <= series_radius) {
        std::vector<T> out(static_cast<std::size_t>(max_order_needed) + 1);
        const double scale = std::exp(-std::abs(detail::imag_part(z)));
        for (int m = 0; m <= max_order_needed; ++m) out[m] = detail::series_single(m, z) * scale;
        return out;
    }
    return detail::miller_scaled(z, max_order_needed);
}

/// J_0(z)..J_max(z). Throws range_error when |Im z| exceeds overflow_guard.
template <class T>
std::vector<T> bessel_j_sequence(T z, int max_order_needed) {
    const double im = std::abs(detail::imag_part(z));
    if (im > overflow_guard)
        throw range_error("bessel_j: |Im z| = " + std::to_string(im) + " exceeds overflow guard " +
                          std::to_string(overflow_guard));
    auto out = bessel_j_scaled_sequence(z, max_order_needed);
    if (im > 0.0) {
        const double scale = std::exp(im);
        for (auto& v : out) v *= scale;
    }
    return out;
}

inline complex bessel_j(int m, complex z) {
    detail::check_order(m);
    const int order = std::abs(m);
    if (std::abs(z.imag()) > overflow_guard)
        throw range_error("bessel_j: |Im z| exceeds overflow guard");
    complex v;
    if (std::abs(z) <= series_radius) {
        v = detail::series_single(order, z);
    } else {
        v = bessel_j_sequence(z, order)[order];
    }
    detail::check_finite(v, "bessel_j");
    return detail::parity(m, v);
}

inline double bessel_j(int m, double x) {
    detail::check_order(m);
    const int order = std::abs(m);
    const double v = std::abs(x) <= series_radius ? detail::series_single(order, x)
                                                  : bessel_j_sequence(x, order)[order];
    return detail::parity(m, v);
}

/// J'_m(z) = (J_{m-1}(z) - J_{m+1}(z)) / 2.
inline complex bessel_j_derivative(int m, complex z) {
    detail::check_order(m);
    if (m == 0) return -bessel_j(1, z);
    return 0.5 * (bessel_j(m - 1, z) - bessel_j(m + 1, z));
}

/// Y_0(x)..Y_max(x) for x > 0. The returned vector stops early at the
/// first order whose value would overflow.
inline std::vector<double> bessel_y_sequence(double x, int max_order_needed) {
    if (!(x > 0.0)) throw domain_error("bessel_y: argument must be positive, got " + std::to_string(x));
    detail::check_order(max_order_needed);
    std::vector<double> y;
    y.reserve(static_cast<std::size_t>(max_order_needed) + 1);
    const auto [y0, y1] = detail::bessel_y01(x);
    y.push_back(y0);
    if (max_order_needed >= 1) y.push_back(y1);
    for (int k = 1; k < max_order_needed; ++k) {
        const double next = (2.0 * k / x) * y[k] - y[k - 1];
        if (!std::isfinite(next)) break;
        y.push_back(next);
    }
    return y;
}

/// H^(1)_0(x)..H^(1)_max(x) for x > 0; truncated where Y_m overflows.
inline std::vector<complex> hankel1_sequence(double x, int max_order_needed) {
    const auto y = bessel_y_sequence(x, max_order_needed);
    const auto j = bessel_j_sequence(x, static_cast<int>(y.size()) - 1);
    std::vector<complex> h(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) h[k] = complex(j[k], y[k]);
    return h;
}

inline complex hankel1(int m, double x) {
    detail::check_order(m);
    if (!(x > 0.0)) throw domain_error("hankel1: argument must be positive, got " + std::to_string(x));
    const int order = std::abs(m);
    const auto h = hankel1_sequence(x, order);
    if (static_cast<int>(h.size()) <= order)
        throw range_error("hankel1: Y_" + std::to_string(order) + "(" + std::to_string(x) + ") overflows");
    return detail::parity(m, h[order]);
}

/// H^(1)'_m(x) = (H_{m-1}(x) - H_{m+1}(x)) / 2.
inline complex hankel1_derivative(int m, double x) {
    detail::check_order(m);
    if (m == 0) return -hankel1(1, x);
    const complex v = 0.5 * (hankel1(m - 1, x) - hankel1(m + 1, x));
    detail::check_finite(v, "hankel1_derivative");
    return v;
}

/// Logarithmic derivatives J'_m(z)/J_m(z), m = 0..max, by the downward
/// recurrence D_{m-1} = (m-1)/z - 1/(m/z + D_m). Finite wherever J_m has no
/// zero, including orders where J_m itself underflows.
inline std::vector<complex> bessel_j_log_derivative_sequence(complex z, int max_order_needed) {
    if (z == complex(0.0)) throw domain_error("bessel_j_log_derivative_sequence: z = 0");
    detail::check_order(max_order_needed);
    const int start = detail::miller_start(std::abs(z), max_order_needed);
    std::vector<complex> d(static_cast<std::size_t>(max_order_needed) + 1);
    complex cur(0.0);
    for (int m = start; m >= 1; --m) {
        cur = (m - 1.0) / z - 1.0 / (static_cast<double>(m) / z + cur);
        if (m - 1 <= max_order_needed) d[m - 1] = cur;
    }
    return d;
}

/// Derivatives of a J or H sequence by the order recurrence. The last
/// entry of the input only feeds the derivative of its predecessor.
template <class T>
std::vector<T> derivative_from_sequence(const std::vector<T>& f) {
    std::vector<T> d(f.size() > 0 ? f.size() - 1 : 0);
    if (d.empty()) return d;
    d[0] = -f[1];
    for (std::size_t m = 1; m < d.size(); ++m) d[m] = 0.5 * (f[m - 1] - f[m + 1]);
    return d;
}

} // namespace wirepol::special
