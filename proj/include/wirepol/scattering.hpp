#pragma once

// Normal-incidence scattering by a homogeneous circular cylinder and the
// thermal emissivity that follows from Kirchhoff's law.
//
// For size parameter x = k a and refraction index n:
//
//   T_m^TE = (J'_m(nx) J_m(x) - n J'_m(x) J_m(nx)) / (J'_m(nx) H_m(x) - n J_m(nx) H'_m(x))
//   T_m^TM = (J_m(nx) J'_m(x) - n J'_m(nx) J_m(x)) / (J_m(nx) H'_m(x) - n J'_m(nx) H_m(x))
//
//   e^(a) = 4 sum_m [Re T_m^(a) - |T_m^(a)|^2]        (T_{-m} = T_m)
//
// with H = H^(1). TE has E orthogonal to the wire axis, TM parallel to it.
// Every numerator and denominator term holds exactly one J(nx) factor, so
// the exponentially scaled J(nx) values are used as-is.

#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"
#include "wirepol/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace wirepol {

enum class Polarization { te, tm };

inline const char* to_string(Polarization p) { return p == Polarization::te ? "TE" : "TM"; }

struct WireGeometry {
    double radius_um = 0.0;
    std::optional<double> length_mm;
    std::optional<double> observation_distance_m;
};

struct TransitionAmplitude {
    int order = 0;
    Polarization polarization = Polarization::te;
    complex value{0.0, 0.0};
};

struct PolarizedEmissivity {
    double e_te = 0.0;
    double e_tm = 0.0;
    int terms_te = 0;               // orders m = 0..terms-1 were summed
    int terms_tm = 0;
    double truncation_error_te = 0.0;  // relative to the sum
    double truncation_error_tm = 0.0;
};

inline constexpr double default_emissivity_tolerance = 1e-10;

/// Hard ceiling on the partial-wave order: the sum plateaus near |n| k a,
/// the cube-root margin covers the Airy transition region.
inline int order_ceiling(double k, double a_um, complex n) {
    const double x = std::max(std::abs(n), 1.0) * k * a_um;
    return std::max(static_cast<int>(std::ceil(x) + std::ceil(10.0 * std::cbrt(x))) + 20, 5);
}

namespace detail {

inline std::string context(int m, double x, complex nx) {
    std::ostringstream os;
    os.precision(10);
    os << "(m = " << m << ", ka = " << x << ", nka = " << nx.real() << (nx.imag() < 0 ? "" : "+") << nx.imag()
       << "i)";
    return os.str();
}

/// Bessel/Hankel values needed for T_m, m = 0..orders()-1.
class PartialWaveTables {
public:
    PartialWaveTables(double x, complex n, int max_order) : x_(x), n_(n) {
        const complex z = n * x;
        try {
            const auto j = special::bessel_j_sequence(x, max_order + 1);
            const auto h = special::hankel1_sequence(x, max_order + 1);
            dj_ = special::derivative_from_sequence(j);
            dh_ = special::derivative_from_sequence(h);
            j_.assign(j.begin(), j.end() - 1);
            h_.assign(h.begin(), h.end() - (h.empty() ? 0 : 1));
            if (z != complex(0.0)) {
                const auto jn = special::bessel_j_scaled_sequence(z, max_order + 1);
                djn_ = special::derivative_from_sequence(jn);
                jn_.assign(jn.begin(), jn.end() - 1);
                logd_ = special::bessel_j_log_derivative_sequence(z, max_order);
            }
        } catch (const range_error& e) {
            throw range_error(std::string(e.what()) + " " + context(max_order, x, z));
        } catch (const domain_error& e) {
            throw domain_error(std::string(e.what()) + " " + context(max_order, x, z));
        }
        orders_ = std::min({j_.size(), dh_.size(), h_.size()});
        if (!jn_.empty()) orders_ = std::min(orders_, jn_.size());
    }

    /// Orders with a representable H^(1); beyond them T_m underflows to 0.
    int orders() const { return static_cast<int>(orders_); }

    complex amplitude(int m, Polarization p) const {
        m = std::abs(m);
        if (m >= orders()) return {0.0, 0.0};
        const double jx = j_[m], djx = dj_[m];
        const complex hx = h_[m], dhx = dh_[m];
        complex jnx, djnx;
        if (jn_.empty()) {
            // n = 0: J_m(0) vanishes for m >= 1, J'_m(0) only for m != 1.
            jnx = m == 0 ? 1.0 : 0.0;
            djnx = m == 1 ? 0.5 : 0.0;
        } else {
            jnx = jn_[m];
            djnx = djn_[m];
            if (std::abs(jnx) < 1e-250 && std::abs(djnx) < 1e-250) {
                jnx = 1.0;
                djnx = logd_[m];
            }
        }
        complex num, den;
        if (p == Polarization::te) {
            num = djnx * jx - n_ * djx * jnx;
            den = djnx * hx - n_ * jnx * dhx;
        } else {
            num = jnx * djx - n_ * djnx * jx;
            den = jnx * dhx - n_ * djnx * hx;
        }
        if (num == complex(0.0)) return {0.0, 0.0};
        const complex t = num / den;
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
            throw range_error("transition amplitude not finite " + context(m, x_, n_ * x_));
        return t;
    }

private:
    double x_;
    complex n_;
    std::vector<double> j_, dj_;
    std::vector<complex> h_, dh_, jn_, djn_, logd_;
    std::size_t orders_ = 0;
};

inline void check_scattering_args(double k, double a_um, complex n) {
    if (!(k > 0.0) || !std::isfinite(k)) throw domain_error("wavenumber must be positive");
    if (!(a_um > 0.0) || !std::isfinite(a_um)) throw domain_error("wire radius must be positive");
    if (n.imag() < 0.0) throw domain_error("refraction index must have Im(n) >= 0 (passive medium)");
}

} // namespace detail

/// T_m for one order and polarization. k in 1/um, a in um.
inline TransitionAmplitude transition_amplitude(int m, Polarization p, double k, double a_um, complex n) {
    detail::check_scattering_args(k, a_um, n);
    const int order = std::abs(m);
    const detail::PartialWaveTables tables(k * a_um, n, order);
    return {m, p, tables.amplitude(order, p)};
}

/// Per-order emissivity contributions 4 [Re T_m - |T_m|^2], m = 0..max_order
/// (not folded: the m >= 1 entries enter the full sum twice).
inline std::vector<double> partial_wave_terms(Polarization p, double k, double a_um, complex n, int max_order) {
    detail::check_scattering_args(k, a_um, n);
    const detail::PartialWaveTables tables(k * a_um, n, max_order);
    std::vector<double> terms(static_cast<std::size_t>(max_order) + 1);
    for (int m = 0; m <= max_order; ++m) {
        const complex t = tables.amplitude(m, p);
        terms[m] = 4.0 * (t.real() - std::norm(t));
    }
    return terms;
}

/// Both emissivities, each truncated adaptively: the folded sum over m >= 0
/// stops once three consecutive contributions fall below tol times the
/// running sum (and at least m = 0..5 were summed).
inline PolarizedEmissivity emissivity_pair(double k, double a_um, complex n,
                                           double tol = default_emissivity_tolerance) {
    detail::check_scattering_args(k, a_um, n);
    if (!(tol > 0.0)) throw domain_error("emissivity tolerance must be positive");
    const double x = k * a_um;
    const int ceiling = order_ceiling(k, a_um, n);
    const detail::PartialWaveTables tables(x, n, ceiling);

    struct Accumulator {
        double sum = 0.0;
        int small_run = 0;
        bool done = false;
        int terms = 0;
        double trailing = 0.0;
        double last = 0.0;
    };
    Accumulator acc[2];
    const Polarization pols[2] = {Polarization::te, Polarization::tm};
    constexpr int min_terms = 6;

    for (int m = 0; m <= ceiling; ++m) {
        for (int i = 0; i < 2; ++i) {
            Accumulator& a = acc[i];
            if (a.done) continue;
            const complex t = tables.amplitude(m, pols[i]);
            const double term = (m == 0 ? 4.0 : 8.0) * (t.real() - std::norm(t));
            a.sum += term;
            a.last = std::abs(term);
            if (a.last < tol * (std::abs(a.sum) + 1e-300)) {
                ++a.small_run;
                a.trailing = std::max(a.trailing, a.last);
            } else {
                a.small_run = 0;
                a.trailing = 0.0;
            }
            if (a.small_run >= 3 && m + 1 >= min_terms) {
                a.done = true;
                a.terms = m + 1;
            }
        }
        if (acc[0].done && acc[1].done) break;
    }
    for (int i = 0; i < 2; ++i) {
        if (!acc[i].done)
            throw convergence_error(std::string("emissivity (") + to_string(pols[i]) +
                                        ") did not converge below order ceiling " + std::to_string(ceiling) + " " +
                                        detail::context(ceiling, x, n * x) +
                                        "; last term magnitude " + std::to_string(acc[i].last),
                                    acc[i].last);
    }
    PolarizedEmissivity e;
    e.e_te = std::max(acc[0].sum, 0.0);
    e.e_tm = std::max(acc[1].sum, 0.0);
    e.terms_te = acc[0].terms;
    e.terms_tm = acc[1].terms;
    e.truncation_error_te = acc[0].sum != 0.0 ? acc[0].trailing / std::abs(acc[0].sum) : 0.0;
    e.truncation_error_tm = acc[1].sum != 0.0 ? acc[1].trailing / std::abs(acc[1].sum) : 0.0;
    return e;
}

/// One polarization of emissivity_pair; the other side is left at zero.
inline PolarizedEmissivity emissivity(Polarization p, double k, double a_um, complex n,
                                      double tol = default_emissivity_tolerance) {
    PolarizedEmissivity e = emissivity_pair(k, a_um, n, tol);
    if (p == Polarization::te) {
        e.e_tm = 0.0;
        e.terms_tm = 0;
        e.truncation_error_tm = 0.0;
    } else {
        e.e_te = 0.0;
        e.terms_te = 0;
        e.truncation_error_te = 0.0;
    }
    return e;
}

/// (e_te - e_tm)/(e_te + e_tm); positive means polarized orthogonal to the wire.
inline double polarization_ratio(double e_te, double e_tm) {
    if (e_te < 1e-15 && e_tm < 1e-15)
        throw degenerate_error("both emissivities vanish (wire indistinguishable from vacuum)");
    return std::clamp((e_te - e_tm) / (e_te + e_tm), -1.0, 1.0);
}

inline double linear_polarization(double k, double a_um, complex n, double tol = default_emissivity_tolerance) {
    const PolarizedEmissivity e = emissivity_pair(k, a_um, n, tol);
    return polarization_ratio(e.e_te, e.e_tm);
}

struct FarFieldCheck {
    bool valid = false;
    double near_ratio = 0.0;  // lambda r / a^2
    double far_ratio = 0.0;   // l^2 / (lambda r)
};

/// a^2 << lambda r << l^2, with "<<" read as "at least `margin` times smaller".
inline FarFieldCheck validate_far_field(const WireGeometry& g, double wavelength_um, double margin) {
    if (!g.length_mm || !g.observation_distance_m)
        throw domain_error("far-field check needs wire length and observation distance");
    const double a = g.radius_um * constants::micron;
    const double l = *g.length_mm * constants::millimetre;
    const double lr = wavelength_um * constants::micron * *g.observation_distance_m;
    FarFieldCheck c;
    c.near_ratio = lr / (a * a);
    c.far_ratio = l * l / lr;
    c.valid = a * a * margin <= lr && lr * margin <= l * l;
    return c;
}

} // namespace wirepol
