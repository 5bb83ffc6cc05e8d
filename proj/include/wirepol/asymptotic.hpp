#pragma once

// Thick-wire limit a >> lambda: the surface is locally flat, so
//
//   e^(a) = 1/2 int_{-pi/2}^{pi/2} dphi cos(phi) (1 - |R^(a)(phi)|^2)
//
// with the Fresnel coefficients
//
//   R^TE = (eps c - s)/(eps c + s),  R^TM = (c - s)/(c + s),
//   c = cos(phi), s = sqrt(eps - 1 + c^2), Im s >= 0.

#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"
#include "wirepol/materials.hpp"
#include "wirepol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace wirepol {

struct FresnelPair {
    complex r_te{0.0, 0.0};
    complex r_tm{0.0, 0.0};
    double angle = 0.0;
};

inline FresnelPair fresnel_coefficients(const ComplexPermittivity& eps, double phi) {
    if (!(std::abs(phi) < constants::pi / 2)) throw domain_error("fresnel_coefficients: |phi| must be < pi/2");
    const complex e = eps.epsilon;
    const double c = std::cos(phi);
    const complex s = upper_sqrt(e - 1.0 + c * c);
    return {(e * c - s) / (e * c + s), (c - s) / (c + s), phi};
}

struct AngularIntegrals {
    double numerator = 0.0;    // int cos(phi) (|R_TM|^2 - |R_TE|^2)  =  int cos(phi) (e_TE - e_TM)
    double denominator = 0.0;  // int cos(phi) (2 - |R_TE|^2 - |R_TM|^2)
};

/// Gauss-Legendre estimate of both angular integrals over [phi_lo, phi_hi].
inline AngularIntegrals fresnel_angular_integrals(const ComplexPermittivity& eps, double phi_lo, double phi_hi,
                                                  int nodes = 64) {
    const QuadratureRule rule = gauss_legendre(nodes, phi_lo, phi_hi);
    CompensatedSum num, den;
    for (int i = 0; i < nodes; ++i) {
        const FresnelPair r = fresnel_coefficients(eps, rule.nodes[i]);
        const double w = rule.weights[i] * std::cos(rule.nodes[i]);
        const double te = std::norm(r.r_te), tm = std::norm(r.r_tm);
        num += w * (tm - te);
        den += w * (2.0 - te - tm);
    }
    return {num.value(), den.value()};
}

/// Linear polarization of a thick wire. The integrand is even in phi, so
/// only [0, pi/2] is integrated.
inline double thick_wire_polarization(const ComplexPermittivity& eps, int nodes = 64) {
    if (eps.epsilon.imag() < 0.0) throw domain_error("thick_wire_polarization: Im(eps) must be >= 0");
    const AngularIntegrals i = fresnel_angular_integrals(eps, 0.0, constants::pi / 2, nodes);
    if (2.0 * i.denominator < 1e-15) throw degenerate_error("thick_wire_polarization: surface is a perfect mirror");
    return std::clamp(i.numerator / i.denominator, -1.0, 1.0);
}

} // namespace wirepol
