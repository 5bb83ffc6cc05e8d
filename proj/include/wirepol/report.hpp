#pragma once

// Measured vs. computed band-averaged polarization.

#include "wirepol/errors.hpp"
#include "wirepol/format.hpp"
#include "wirepol/materials.hpp"
#include "wirepol/parallel.hpp"
#include "wirepol/spectral.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace wirepol {

struct Measurement {
    double diameter_um = 0.0;
    double p = 0.0;
    double error = 0.0;  // one standard deviation
};

/// Averages over three heating voltages per wire (mean +- standard deviation).
inline std::vector<Measurement> builtin_measurements() {
    return {{5.0, 0.241, 0.005}, {17.0, 0.221, 0.003}, {35.0, 0.208, 0.003}, {100.0, 0.199, 0.004}};
}

/// Comma- or whitespace-separated `diameter_um, p, error` rows. '#' lines
/// are comments; an optional first row starting with "diameter" is a header.
inline std::vector<Measurement> read_measurements(std::istream& in) {
    std::vector<Measurement> rows;
    std::string raw;
    int line = 0;
    bool seen_data = false;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view text = detail::trim(raw);
        if (text.empty() || text.front() == '#') continue;
        if (!seen_data && text.rfind("diameter", 0) == 0) {
            seen_data = true;
            continue;
        }
        seen_data = true;
        std::vector<std::string_view> fields;
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
            std::size_t j = i;
            while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
            if (j > i) fields.push_back(text.substr(i, j - i));
            i = j;
        }
        if (fields.size() != 3) throw parse_error("expected 3 columns (diameter_um, p, error)", line);
        Measurement m{detail::parse_number(fields[0], line, "diameter_um"), detail::parse_number(fields[1], line, "p"),
                      detail::parse_number(fields[2], line, "error")};
        if (!(m.diameter_um > 0.0)) throw parse_error("diameter must be positive", line);
        if (!(m.error > 0.0)) throw parse_error("error must be positive", line);
        rows.push_back(m);
    }
    return rows;
}

struct ComparisonRow {
    double diameter_um = 0.0;
    double p_measured = 0.0;
    double p_error = 0.0;
    double p_computed = 0.0;
    double deviation_sigma = 0.0;  // |p_measured - p_computed| / p_error
};

struct ComparisonReport {
    double temperature_k = 0.0;
    double model_temperature_k = 0.0;
    std::vector<ComparisonRow> rows;

    double max_deviation_sigma() const {
        double m = 0.0;
        for (const auto& r : rows) m = std::max(m, r.deviation_sigma);
        return m;
    }
};

inline ComparisonReport compare_measurements(const std::vector<Measurement>& data, const DrudePermittivityModel& model,
                                             double temperature_k, const BandFilter& band,
                                             const QuadratureConfig& quadrature = {}, int threads = 1) {
    ComparisonReport report;
    report.temperature_k = temperature_k;
    report.model_temperature_k = model.temperature_k;
    report.rows = parallel_map<ComparisonRow>(data.size(), threads, [&](std::size_t i) {
        const Measurement& m = data[i];
        const double p = band_averaged_polarization(0.5 * m.diameter_um, temperature_k, band, model, quadrature).p_avg;
        return ComparisonRow{m.diameter_um, m.p, m.error, p, std::abs(m.p - p) / m.error};
    });
    return report;
}

inline void write_report_csv(std::ostream& out, const ComparisonReport& report) {
    out << "diameter_um,p_measured,p_error,p_computed,deviation_sigma\n";
    for (const auto& r : report.rows)
        out << format_double(r.diameter_um) << ',' << format_double(r.p_measured) << ',' << format_double(r.p_error)
            << ',' << format_double(r.p_computed) << ',' << format_double(r.deviation_sigma) << '\n';
}

} // namespace wirepol
