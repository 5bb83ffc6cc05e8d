#pragma once

// Parameter sweeps over radius, diameter, wavelength or temperature, and
// their CSV form. Output is independent of the thread count.

#include "wirepol/errors.hpp"
#include "wirepol/format.hpp"
#include "wirepol/materials.hpp"
#include "wirepol/parallel.hpp"
#include "wirepol/scattering.hpp"
#include "wirepol/spectral.hpp"
#include "wirepol/version.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace wirepol {

enum class SweepVariable { radius, diameter, wavelength, temperature };
enum class Spacing { linear, log };

inline const char* to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::radius: return "radius";
    case SweepVariable::diameter: return "diameter";
    case SweepVariable::wavelength: return "wavelength";
    case SweepVariable::temperature: return "temperature";
    }
    return "?";
}

inline const char* to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }

inline const char* to_string(BoundedTermPolicy p) { return p == BoundedTermPolicy::omit ? "omit" : "use-bound"; }

struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
    int points = 2;
    Spacing spacing = Spacing::linear;
};

/// Everything a sweep or single-point evaluation needs. Exactly one of
/// wavelength_um / band is used: the band when present.
struct SweepSpec {
    SweepVariable variable = SweepVariable::radius;
    SweepRange range;
    double radius_um = 1.0;
    double wavelength_um = 0.5;
    std::optional<BandFilter> band;
    std::vector<double> temperatures_k{2400.0};
    std::string material = "tungsten";
    BoundedTermPolicy policy = BoundedTermPolicy::omit;
    QuadratureConfig quadrature;

    void validate() const {
        if (!(range.lo < range.hi)) throw domain_error("sweep needs lo < hi");
        if (range.points < 2) throw domain_error("sweep needs at least 2 points");
        if (range.spacing == Spacing::log && !(range.lo > 0.0)) throw domain_error("log spacing needs lo > 0");
        if (variable == SweepVariable::wavelength && band)
            throw domain_error("a wavelength sweep cannot be combined with a band average");
        if (variable != SweepVariable::temperature && temperatures_k.empty())
            throw domain_error("sweep needs at least one temperature");
        if (band) band->validate();
        if ((variable == SweepVariable::radius || variable == SweepVariable::diameter ||
             variable == SweepVariable::wavelength) && !(range.lo > 0.0))
            throw domain_error("sweep range must be positive for lengths");
    }

    std::vector<double> grid() const {
        std::vector<double> g(range.points);
        const int last = range.points - 1;
        for (int i = 0; i <= last; ++i) {
            const double f = static_cast<double>(i) / last;
            if (range.spacing == Spacing::linear)
                g[i] = range.lo + f * (range.hi - range.lo);
            else
                g[i] = std::exp(std::log(range.lo) + f * (std::log(range.hi) - std::log(range.lo)));
        }
        g.front() = range.lo;
        g.back() = range.hi;
        return g;
    }

    /// Wire polarization vs. log10(2 pi a / lambda) in [-2, 3] at 0.5 um, 2400 K.
    static SweepSpec figure1() {
        SweepSpec s;
        s.variable = SweepVariable::radius;
        s.wavelength_um = 0.5;
        const double scale = s.wavelength_um / (2.0 * constants::pi);
        s.range = {1e-2 * scale, 1e3 * scale, 200, Spacing::log};
        s.temperatures_k = {2400.0};
        return s;
    }

    /// Band-averaged polarization vs. diameter for 298, 1600 and 2400 K.
    static SweepSpec figure4() {
        SweepSpec s;
        s.variable = SweepVariable::diameter;
        s.range = {0.5, 120.0, 120, Spacing::log};
        s.band = BandFilter::comparison_band();
        s.temperatures_k = {298.0, 1600.0, 2400.0};
        return s;
    }
};

struct SweepRow {
    double radius_um = 0.0;
    double wavelength_um = 0.0;  // single-wavelength rows
    double temperature_k = 0.0;
    double model_temperature_k = 0.0;
    double p = 0.0;
    double e_te = 0.0;
    double e_tm = 0.0;
    // single wavelength
    int terms_te = 0;
    int terms_tm = 0;
    double truncation_error_te = 0.0;
    double truncation_error_tm = 0.0;
    // band average
    int quadrature_nodes = 0;
    double quadrature_error = 0.0;
};

/// One evaluation at (radius, wavelength or band, temperature).
inline SweepRow evaluate_point(const SweepSpec& spec, const MaterialDatabase& db, double radius_um,
                               double wavelength_um, double temperature_k) {
    const DrudePermittivityModel model = spec.material == "vacuum"
                                             ? DrudePermittivityModel::vacuum()
                                             : db.model_for_temperature(spec.material, temperature_k, spec.policy);
    SweepRow row;
    row.radius_um = radius_um;
    row.temperature_k = temperature_k;
    row.model_temperature_k = model.temperature_k;
    if (spec.band) {
        const BandAveragedResult r = band_averaged_polarization(radius_um, temperature_k, *spec.band, model,
                                                                spec.quadrature);
        row.p = r.p_avg;
        row.e_te = r.e_te_bar;
        row.e_tm = r.e_tm_bar;
        row.quadrature_nodes = r.quadrature_nodes;
        row.quadrature_error = r.est_quadrature_error;
    } else {
        const complex n = refraction_index(permittivity(model, wavelength_um));
        const PolarizedEmissivity e = emissivity_pair(2.0 * constants::pi / wavelength_um, radius_um, n,
                                                      spec.quadrature.emissivity_tolerance);
        row.wavelength_um = wavelength_um;
        row.p = polarization_ratio(e.e_te, e.e_tm);
        row.e_te = e.e_te;
        row.e_tm = e.e_tm;
        row.terms_te = e.terms_te;
        row.terms_tm = e.terms_tm;
        row.truncation_error_te = e.truncation_error_te;
        row.truncation_error_tm = e.truncation_error_tm;
    }
    return row;
}

/// Rows ordered temperature-major, then along the grid.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const MaterialDatabase& db, int threads = 1) {
    spec.validate();
    const std::vector<double> grid = spec.grid();
    struct Task {
        double radius, wavelength, temperature;
    };
    std::vector<Task> tasks;
    const std::vector<double> temps =
        spec.variable == SweepVariable::temperature ? std::vector<double>{0.0} : spec.temperatures_k;
    for (double t : temps) {
        for (double v : grid) {
            Task task{spec.radius_um, spec.wavelength_um, t};
            switch (spec.variable) {
            case SweepVariable::radius: task.radius = v; break;
            case SweepVariable::diameter: task.radius = 0.5 * v; break;
            case SweepVariable::wavelength: task.wavelength = v; break;
            case SweepVariable::temperature: task.temperature = v; break;
            }
            tasks.push_back(task);
        }
    }
    return parallel_map<SweepRow>(tasks.size(), threads, [&](std::size_t i) {
        return evaluate_point(spec, db, tasks[i].radius, tasks[i].wavelength, tasks[i].temperature);
    });
}

/// Canonical parameter summary, identical for identical sweeps whatever the
/// thread count or output path.
inline std::string describe(const SweepSpec& spec) {
    std::ostringstream os;
    os << "variable=" << to_string(spec.variable) << " lo=" << format_double(spec.range.lo)
       << " hi=" << format_double(spec.range.hi) << " points=" << spec.range.points
       << " spacing=" << to_string(spec.range.spacing);
    if (spec.variable != SweepVariable::radius && spec.variable != SweepVariable::diameter)
        os << " radius_um=" << format_double(spec.radius_um);
    if (spec.band)
        os << " band=" << format_double(spec.band->lambda_lo_um) << ":" << format_double(spec.band->lambda_hi_um);
    else if (spec.variable != SweepVariable::wavelength)
        os << " wavelength_um=" << format_double(spec.wavelength_um);
    if (spec.variable != SweepVariable::temperature) {
        os << " temperatures_K=";
        for (std::size_t i = 0; i < spec.temperatures_k.size(); ++i)
            os << (i ? "," : "") << format_double(spec.temperatures_k[i]);
    }
    os << " material=" << spec.material << " bounded_terms=" << to_string(spec.policy);
    if (spec.band)
        os << " nodes=" << spec.quadrature.nodes << " check_nodes=" << spec.quadrature.check_nodes;
    os << " tol=" << format_double(spec.quadrature.emissivity_tolerance);
    return os.str();
}

/// Header row plus one line per row; band columns when `band` is set.
inline void write_rows_csv(std::ostream& out, const std::optional<BandFilter>& band, const std::vector<SweepRow>& rows) {
    if (band)
        out << "radius_um,diameter_um,band_lo_um,band_hi_um,temperature_K,model_temperature_K,"
               "P_avg,e_te_bar,e_tm_bar,quadrature_nodes,quadrature_err\n";
    else
        out << "radius_um,diameter_um,wavelength_um,log10_size_parameter,temperature_K,model_temperature_K,"
               "P,e_te,e_tm,terms_te,terms_tm,truncation_err_te,truncation_err_tm\n";
    for (const auto& r : rows) {
        out << format_double(r.radius_um) << ',' << format_double(2.0 * r.radius_um) << ',';
        if (band) {
            out << format_double(band->lambda_lo_um) << ',' << format_double(band->lambda_hi_um) << ','
                << format_double(r.temperature_k) << ',' << format_double(r.model_temperature_k) << ','
                << format_double(r.p) << ',' << format_double(r.e_te) << ',' << format_double(r.e_tm) << ','
                << r.quadrature_nodes << ',' << format_double(r.quadrature_error) << '\n';
        } else {
            const double size = std::log10(2.0 * constants::pi * r.radius_um / r.wavelength_um);
            out << format_double(r.wavelength_um) << ',' << format_double(size) << ','
                << format_double(r.temperature_k) << ',' << format_double(r.model_temperature_k) << ','
                << format_double(r.p) << ',' << format_double(r.e_te) << ',' << format_double(r.e_tm) << ','
                << r.terms_te << ',' << r.terms_tm << ',' << format_double(r.truncation_error_te) << ','
                << format_double(r.truncation_error_tm) << '\n';
        }
    }
}

inline void write_metadata(std::ostream& out, const std::string& command, const std::string& parameters,
                           const std::vector<std::string>& provenance) {
    out << "# wirepol " << version << '\n';
    out << "# command: " << command << '\n';
    out << "# parameters: " << parameters << '\n';
    for (const auto& p : provenance) out << "# material: " << p << '\n';
}

inline void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows,
                            const std::string& command, const std::vector<std::string>& provenance) {
    write_metadata(out, command, describe(spec), provenance);
    write_rows_csv(out, spec.band, rows);
}

} // namespace wirepol
