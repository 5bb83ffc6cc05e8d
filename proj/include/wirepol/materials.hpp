#pragma once

// Drude-type permittivity of metals:
//
//   eps = 1 + sum_p K_p l^2 / (l^2 - ls_p^2 + i d_p ls_p l)
//           - l^2/(2 pi c eps0) sum_q sigma_q / (lr_q - i l)
//
// The tabulated fits are written in the e^{+jwt} convention (Im eps < 0).
// The library works with e^{-iwt} and outgoing H^(1) waves, so the value
// returned by permittivity() is the complex conjugate of the expression.

#include "wirepol/builtin_materials.hpp"
#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace wirepol {

using complex = std::complex<double>;

/// Wavelength range of the measured optical data behind the fits (um).
inline constexpr double fitted_range_lo_um = 0.365;
inline constexpr double fitted_range_hi_um = 2.65;

inline bool in_fitted_range(double wavelength_um) {
    return wavelength_um >= fitted_range_lo_um && wavelength_um <= fitted_range_hi_um;
}

struct BoundTerm {
    double strength = 0.0;       // K0, dimensionless
    double resonance_um = 0.0;   // lambda_s
    double damping = 0.0;        // delta
    bool tentative = false;
    bool inherited = false;      // copied from another temperature record
};

struct FreeTerm {
    double conductivity = 0.0;   // sigma, ohm^-1 m^-1
    double relaxation_um = 0.0;  // lambda_r
    bool tentative = false;
    bool upper_bound = false;    // relaxation_um is only known as an upper bound
};

/// How free terms whose relaxation wavelength is only an upper bound enter
/// the evaluation model.
enum class BoundedTermPolicy {
    omit,       // drop the term (reproduces the published band averages)
    use_bound,  // evaluate with lambda_r set to the bound
};

struct ComplexPermittivity {
    complex epsilon{1.0, 0.0};
};

struct DrudePermittivityModel {
    std::string element;
    double temperature_k = 0.0;
    std::vector<BoundTerm> bound_terms;
    std::vector<FreeTerm> free_terms;
    double tabulated_sigma0 = 0.0;
    std::string provenance;

    double dc_conductivity() const {
        double s = 0.0;
        for (const auto& f : free_terms) s += f.conductivity;
        return s;
    }

    static DrudePermittivityModel vacuum() {
        DrudePermittivityModel m;
        m.element = "vacuum";
        m.provenance = "eps = 1";
        return m;
    }
};

inline ComplexPermittivity permittivity(const DrudePermittivityModel& model, double wavelength_um) {
    if (!(wavelength_um > 0.0) || !std::isfinite(wavelength_um))
        throw domain_error("permittivity: wavelength must be positive, got " + std::to_string(wavelength_um));
    const double l = wavelength_um;
    complex eps(1.0, 0.0);
    for (const auto& b : model.bound_terms) {
        eps += b.strength * l * l /
               complex(l * l - b.resonance_um * b.resonance_um, b.damping * b.resonance_um * l);
    }
    // l^2/(lr - i l) with l in metres = (l_m) * l/(lr - i l) in um ratio.
    const double prefactor =
        l * constants::micron / (2.0 * constants::pi * constants::speed_of_light * constants::vacuum_permittivity);
    for (const auto& f : model.free_terms) {
        eps -= prefactor * f.conductivity * l / complex(f.relaxation_um, -l);
    }
    return {std::conj(eps)};
}

/// sqrt taken on the branch Im >= 0.
inline complex upper_sqrt(complex z) {
    complex s = std::sqrt(z);
    if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
    return s;
}

inline complex refraction_index(const ComplexPermittivity& eps) { return upper_sqrt(eps.epsilon); }

struct MaterialRecord {
    std::string element;
    double temperature_k = 0.0;
    std::vector<BoundTerm> bound_terms;
    std::vector<FreeTerm> free_terms;
    double sigma0 = 0.0;
    std::string provenance;
    std::optional<double> bound_terms_from;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline double parse_number(std::string_view token, int line, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
        throw parse_error(std::string("invalid number '") + std::string(token) + "' for " + what, line);
    return v;
}

inline void require_positive(double v, int line, const char* what) {
    if (!(v > 0.0)) throw parse_error(std::string(what) + " must be positive", line);
}

} // namespace detail

class MaterialDatabase {
public:
    /// Environment variable naming a database file that replaces the
    /// built-in tungsten data.
    static constexpr const char* path_env = "WIREPOL_MATERIAL_DB";
    static constexpr double min_temperature_k = 250.0;
    static constexpr double max_temperature_k = 3400.0;

    static MaterialDatabase parse(std::istream& in) {
        MaterialDatabase db;
        std::string raw;
        int line = 0;
        MaterialRecord* current = nullptr;
        std::vector<int> record_lines;
        while (std::getline(in, raw)) {
            ++line;
            const std::string_view text = detail::trim(raw);
            if (text.empty() || text.front() == '#') continue;
            if (text == "[record]") {
                db.records_.emplace_back();
                current = &db.records_.back();
                record_lines.push_back(line);
                continue;
            }
            const auto eq = text.find('=');
            if (eq == std::string_view::npos) throw parse_error("expected 'key = value'", line);
            const std::string key(detail::trim(text.substr(0, eq)));
            const std::string_view value = detail::trim(text.substr(eq + 1));
            if (key == "format") {
                if (value != "wirepol-materials 1")
                    throw parse_error("unsupported format '" + std::string(value) + "'", line);
                continue;
            }
            if (current == nullptr) throw parse_error("field '" + key + "' outside a [record]", line);
            parse_field(*current, key, value, line);
        }
        for (std::size_t i = 0; i < db.records_.size(); ++i) validate(db.records_[i], record_lines[i]);
        db.resolve_inheritance();
        return db;
    }

    static MaterialDatabase parse(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    static MaterialDatabase load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open material database '" + path + "'");
        return parse(in);
    }

    static MaterialDatabase builtin() { return parse(std::string(builtin_material_database)); }

    /// The file named by WIREPOL_MATERIAL_DB if set, else the built-in data.
    static MaterialDatabase load_default() {
        const char* path = std::getenv(path_env);
        if (path != nullptr && *path != '\0') return load_file(path);
        return builtin();
    }

    const std::vector<MaterialRecord>& records() const { return records_; }

    std::vector<double> temperatures(const std::string& element) const {
        std::vector<double> t;
        for (const auto& r : records_)
            if (r.element == element) t.push_back(r.temperature_k);
        std::sort(t.begin(), t.end());
        return t;
    }

    /// Nearest tabulated temperature; ties go to the lower temperature.
    const MaterialRecord& nearest_record(const std::string& element, double temperature_k) const {
        if (!(temperature_k >= min_temperature_k && temperature_k <= max_temperature_k))
            throw range_error("temperature " + std::to_string(temperature_k) + " K outside the supported window [" +
                              std::to_string(min_temperature_k) + ", " + std::to_string(max_temperature_k) + "] K");
        const MaterialRecord* best = nullptr;
        for (const auto& r : records_) {
            if (r.element != element) continue;
            if (best == nullptr) {
                best = &r;
                continue;
            }
            const double d = std::abs(r.temperature_k - temperature_k);
            const double db = std::abs(best->temperature_k - temperature_k);
            if (d < db || (d == db && r.temperature_k < best->temperature_k)) best = &r;
        }
        if (best == nullptr) throw domain_error("no material data for element '" + element + "'");
        return *best;
    }

    DrudePermittivityModel model_for_temperature(const std::string& element, double temperature_k,
                                                 BoundedTermPolicy policy = BoundedTermPolicy::omit) const {
        return make_model(nearest_record(element, temperature_k), policy);
    }

    static DrudePermittivityModel make_model(const MaterialRecord& r, BoundedTermPolicy policy) {
        DrudePermittivityModel m;
        m.element = r.element;
        m.temperature_k = r.temperature_k;
        m.bound_terms = r.bound_terms;
        for (const auto& f : r.free_terms) {
            if (f.upper_bound && policy == BoundedTermPolicy::omit) continue;
            m.free_terms.push_back(f);
        }
        m.tabulated_sigma0 = r.sigma0;
        m.provenance = r.provenance;
        return m;
    }

private:
    static void parse_field(MaterialRecord& r, const std::string& key, std::string_view value, int line) {
        using detail::parse_number;
        if (key == "element") {
            if (value.empty()) throw parse_error("empty element", line);
            r.element = std::string(value);
        } else if (key == "temperature_K") {
            r.temperature_k = parse_number(value, line, "temperature_K");
            detail::require_positive(r.temperature_k, line, "temperature_K");
        } else if (key == "sigma0") {
            r.sigma0 = parse_number(value, line, "sigma0");
            detail::require_positive(r.sigma0, line, "sigma0");
        } else if (key == "provenance") {
            r.provenance = std::string(value);
        } else if (key == "bound_terms_from") {
            r.bound_terms_from = parse_number(value, line, "bound_terms_from");
        } else if (key == "bound_term") {
            const auto tok = detail::split_ws(value);
            if (tok.size() < 3) throw parse_error("bound_term needs K0 lambda_s delta", line);
            BoundTerm b;
            b.strength = parse_number(tok[0], line, "K0");
            b.resonance_um = parse_number(tok[1], line, "lambda_s");
            b.damping = parse_number(tok[2], line, "delta");
            detail::require_positive(b.resonance_um, line, "lambda_s");
            detail::require_positive(b.damping, line, "delta");
            for (std::size_t i = 3; i < tok.size(); ++i) {
                if (tok[i] != "tentative") throw parse_error("unknown flag '" + std::string(tok[i]) + "'", line);
                b.tentative = true;
            }
            r.bound_terms.push_back(b);
        } else if (key == "free_term") {
            const auto tok = detail::split_ws(value);
            if (tok.size() < 2) throw parse_error("free_term needs sigma lambda_r", line);
            FreeTerm f;
            f.conductivity = parse_number(tok[0], line, "sigma");
            std::string_view lr = tok[1];
            if (!lr.empty() && lr.front() == '<') {
                f.upper_bound = true;
                lr.remove_prefix(1);
            }
            f.relaxation_um = parse_number(lr, line, "lambda_r");
            detail::require_positive(f.conductivity, line, "sigma");
            detail::require_positive(f.relaxation_um, line, "lambda_r");
            for (std::size_t i = 2; i < tok.size(); ++i) {
                if (tok[i] != "tentative") throw parse_error("unknown flag '" + std::string(tok[i]) + "'", line);
                f.tentative = true;
            }
            r.free_terms.push_back(f);
        } else {
            throw parse_error("unknown field '" + key + "'", line);
        }
    }

    static void validate(const MaterialRecord& r, int line) {
        if (r.element.empty()) throw parse_error("record without element", line);
        if (!(r.temperature_k > 0.0)) throw parse_error("record without temperature_K", line);
        if (r.free_terms.empty() && r.bound_terms.empty() && !r.bound_terms_from)
            throw parse_error("record without any permittivity terms", line);
    }

    void resolve_inheritance() {
        for (auto& r : records_) {
            if (!r.bound_terms_from) continue;
            if (!r.bound_terms.empty())
                throw parse_error("record " + r.element + " " + std::to_string(r.temperature_k) +
                                      " K has both bound_term and bound_terms_from", 0);
            const MaterialRecord* source = nullptr;
            for (const auto& s : records_)
                if (s.element == r.element && s.temperature_k == *r.bound_terms_from && !s.bound_terms_from)
                    source = &s;
            if (source == nullptr)
                throw parse_error("bound_terms_from references missing record " + std::to_string(*r.bound_terms_from) +
                                      " K",
                                  0);
            for (auto b : source->bound_terms) {
                b.inherited = true;
                r.bound_terms.push_back(b);
            }
        }
    }

    std::vector<MaterialRecord> records_;
};

} // namespace wirepol
