#pragma once

// Planck-weighted band averages of the emissivities:
//
//   ebar^(a) = (1/N) int dl chi(l) E(l, T) e^(a)(2 pi / l),   N = int dl chi E
//   Pbar     = (ebar^TE - ebar^TM) / (ebar^TE + ebar^TM)
//
// chi is a stepwise-constant band, so the integral runs over [lo, hi] only.

#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"
#include "wirepol/materials.hpp"
#include "wirepol/quadrature.hpp"
#include "wirepol/scattering.hpp"

#include <cmath>
#include <string>

namespace wirepol {

/// Spectral exitance 2 pi h c^2 / l^5 / (exp(hc/(l k T)) - 1) in W m^-3.
inline double planck_radiance(double wavelength_um, double temperature_k) {
    if (!(wavelength_um > 0.0)) throw domain_error("planck_radiance: wavelength must be positive");
    if (!(temperature_k > 0.0)) throw domain_error("planck_radiance: temperature must be positive");
    using namespace constants;
    const double l = wavelength_um * micron;
    const double lambda_t = planck * speed_of_light / (boltzmann * temperature_k);
    const double a = lambda_t / l;
    if (a > 50.0 || a < 1e-8) {
        const double shape = a > 50.0 ? std::exp(5.0 * std::log(a) - a) : a * a * a * a * (1.0 - 0.5 * a);
        const double lt2 = lambda_t * lambda_t;
        return 2.0 * pi * planck * speed_of_light * speed_of_light / (lt2 * lt2 * lambda_t) * shape;
    }
    const double l2 = l * l;
    return 2.0 * pi * planck * speed_of_light * speed_of_light / (l2 * l2 * l) / std::expm1(a);
}

/// Stefan-Boltzmann constant from the same constants as planck_radiance.
inline double stefan_boltzmann() {
    using namespace constants;
    const double k4 = boltzmann * boltzmann * boltzmann * boltzmann;
    return 2.0 * std::pow(pi, 5) * k4 / (15.0 * planck * planck * planck * speed_of_light * speed_of_light);
}

struct BandFilter {
    double lambda_lo_um = 0.0;
    double lambda_hi_um = 0.0;
    double transmission = 1.0;

    void validate() const {
        if (!(lambda_lo_um > 0.0 && lambda_lo_um < lambda_hi_um))
            throw domain_error("band filter needs 0 < lambda_lo < lambda_hi");
        if (!(transmission > 0.0 && transmission <= 1.0))
            throw domain_error("band filter transmission must lie in (0, 1]");
    }

    /// Band used for the published theoretical values.
    static BandFilter comparison_band() { return {0.5, 0.75, 1.0}; }
    /// Nominal pass band of the instrument's bandpass filter.
    static BandFilter instrument_band() { return {0.45, 0.75, 1.0}; }
};

struct QuadratureConfig {
    int nodes = 64;
    int check_nodes = 128;
    double error_target = 1e-6;
    double emissivity_tolerance = default_emissivity_tolerance;
};

struct BandAveragedResult {
    double p_avg = 0.0;
    double e_te_bar = 0.0;
    double e_tm_bar = 0.0;
    int quadrature_nodes = 0;
    double est_quadrature_error = 0.0;
};

namespace detail {

template <class EmissivityFn>
BandAveragedResult band_average_fixed(const BandFilter& filter, double temperature_k, int nodes,
                                      EmissivityFn&& emissivity_at) {
    const QuadratureRule rule = gauss_legendre(nodes, filter.lambda_lo_um, filter.lambda_hi_um);
    CompensatedSum norm, te, tm;
    for (int i = 0; i < nodes; ++i) {
        const double lambda = rule.nodes[i];
        const double w = rule.weights[i] * filter.transmission * planck_radiance(lambda, temperature_k);
        const PolarizedEmissivity e = emissivity_at(lambda);
        norm += w;
        te += w * e.e_te;
        tm += w * e.e_tm;
    }
    BandAveragedResult r;
    r.e_te_bar = te.value() / norm.value();
    r.e_tm_bar = tm.value() / norm.value();
    r.p_avg = polarization_ratio(r.e_te_bar, r.e_tm_bar);
    r.quadrature_nodes = nodes;
    return r;
}

} // namespace detail

/// Band average for an arbitrary emissivity provider lambda_um -> PolarizedEmissivity.
template <class EmissivityFn>
BandAveragedResult band_average(const BandFilter& filter, double temperature_k, const QuadratureConfig& config,
                                EmissivityFn&& emissivity_at) {
    filter.validate();
    if (!(temperature_k > 0.0)) throw domain_error("temperature must be positive");
    if (config.nodes < 1 || config.check_nodes < 1) throw domain_error("quadrature needs at least one node");
    BandAveragedResult r = detail::band_average_fixed(filter, temperature_k, config.nodes, emissivity_at);
    const BandAveragedResult check =
        detail::band_average_fixed(filter, temperature_k, config.check_nodes, emissivity_at);
    r.est_quadrature_error = std::abs(check.p_avg - r.p_avg);
    if (r.est_quadrature_error > config.error_target)
        throw convergence_error("band average missed its quadrature error target with " +
                                    std::to_string(config.nodes) + " nodes (estimated error " +
                                    std::to_string(r.est_quadrature_error) + ")",
                                r.est_quadrature_error);
    return r;
}

/// Band-averaged linear polarization of a wire of radius a_um.
inline BandAveragedResult band_averaged_polarization(double a_um, double temperature_k, const BandFilter& filter,
                                                     const DrudePermittivityModel& model,
                                                     const QuadratureConfig& config = {}) {
    if (!(a_um > 0.0)) throw domain_error("wire radius must be positive");
    return band_average(filter, temperature_k, config, [&](double lambda_um) {
        const complex n = refraction_index(permittivity(model, lambda_um));
        return emissivity_pair(2.0 * constants::pi / lambda_um, a_um, n, config.emissivity_tolerance);
    });
}

} // namespace wirepol
