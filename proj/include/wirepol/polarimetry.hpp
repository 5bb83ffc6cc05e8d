#pragma once

// Two-step polarimeter protocol.
//
// Step 1 (analyzer only):    I_1(theta) = A_1 cos^2(theta - theta*) + F_1
// Step 2 (polarizer at theta*, then theta* + 90 deg):
//                            I_2(theta) = A cos^2(theta - theta_{a,b}) + F_2
//                            Pbar = (A_a - A_b)/(A_a + A_b)
//
// A_a ~ I_P + I_U/2 and A_b ~ I_U/2; the infrared residual only shifts the
// offsets F, which the fit absorbs.
//
// Angles are degrees at every interface and radians internally.

#include "wirepol/constants.hpp"
#include "wirepol/errors.hpp"
#include "wirepol/format.hpp"
#include "wirepol/materials.hpp"  // detail::trim / parse_number

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace wirepol {

inline constexpr double deg_to_rad = constants::pi / 180.0;

struct ScanSample {
    double theta_deg = 0.0;
    double intensity = 0.0;
};

struct PolarimeterScan {
    std::vector<ScanSample> samples;
    double step_deg = 0.0;

    /// Strictly increasing angles. Throws domain_error otherwise.
    void validate() const {
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (!(samples[i].theta_deg > samples[i - 1].theta_deg))
                throw domain_error("scan angles must be strictly increasing (sample " + std::to_string(i) + ")");
    }

    double span_deg() const {
        return samples.size() < 2 ? 0.0 : samples.back().theta_deg - samples.front().theta_deg;
    }
};

struct CosineSquaredFit {
    double amplitude = 0.0;  // A >= 0
    double theta0_deg = 0.0; // [0, 180)
    double offset = 0.0;     // F
    double residual_rms = 0.0;
    bool phase_degenerate = false;  // A = 0: theta0 reported as 0

    double operator()(double theta_deg) const {
        const double c = std::cos((theta_deg - theta0_deg) * deg_to_rad);
        return amplitude * c * c + offset;
    }
};

struct SourceModel {
    double i_polarized = 0.0;    // I_P
    double i_unpolarized = 0.0;  // I_U
    double polarization_axis_deg = 0.0;
    double ir_background = 0.0;

    double polarization() const {
        const double total = i_polarized + i_unpolarized;
        if (!(total > 0.0)) throw degenerate_error("source has no intensity");
        return i_polarized / total;
    }

    /// Source with the given band-averaged polarization and I_P + I_U = total.
    static SourceModel with_polarization(double p, double total, double axis_deg = 0.0, double background = 0.0) {
        if (!(p >= 0.0 && p <= 1.0)) throw domain_error("polarization must lie in [0, 1]");
        return {p * total, (1.0 - p) * total, axis_deg, background};
    }
};

/// Optical train in front of the rotating analyzer.
struct Optics {
    enum class Kind { analyzer_only, polarizer };
    Kind kind = Kind::analyzer_only;
    double polarizer_deg = 0.0;
    double throughput = 1.0;  // common factor g of the ideal polarizing elements

    static Optics analyzer_only(double throughput = 1.0) { return {Kind::analyzer_only, 0.0, throughput}; }
    static Optics polarizer_at(double angle_deg, double throughput = 1.0) {
        return {Kind::polarizer, angle_deg, throughput};
    }
};

struct ScanSettings {
    double step_deg = 0.5;
    double start_deg = 0.0;
    double span_deg = 360.0;  // angles start + k*step < start + span
    double noise_rms = 0.0;
    std::uint64_t seed = 0;
};

/// Noise-free detector signal at analyzer angle theta.
inline double ideal_intensity(const SourceModel& s, const Optics& o, double theta_deg) {
    auto cos2 = [](double deg) {
        const double c = std::cos(deg * deg_to_rad);
        return c * c;
    };
    if (o.kind == Optics::Kind::analyzer_only) {
        return o.throughput * (s.i_polarized * cos2(theta_deg - s.polarization_axis_deg) + 0.5 * s.i_unpolarized) +
               s.ir_background;
    }
    const double transmitted =
        s.i_polarized * cos2(o.polarizer_deg - s.polarization_axis_deg) + 0.5 * s.i_unpolarized;
    return o.throughput * transmitted * cos2(theta_deg - o.polarizer_deg) + s.ir_background;
}

/// Samples one analyzer rotation. Additive Gaussian noise from a seeded
/// mt19937_64; readings are clipped at zero like a photodiode signal.
inline PolarimeterScan simulate_scan(const SourceModel& source, const Optics& optics, const ScanSettings& settings) {
    if (!(settings.step_deg > 0.0)) throw domain_error("scan step must be positive");
    if (!(settings.noise_rms >= 0.0)) throw domain_error("noise rms must be non-negative");
    if (!(settings.span_deg > 0.0)) throw domain_error("scan span must be positive");
    PolarimeterScan scan;
    scan.step_deg = settings.step_deg;
    std::mt19937_64 rng(settings.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const auto count = static_cast<std::size_t>(std::ceil(settings.span_deg / settings.step_deg - 1e-9));
    scan.samples.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double theta = settings.start_deg + static_cast<double>(k) * settings.step_deg;
        double v = ideal_intensity(source, optics, theta);
        if (settings.noise_rms > 0.0) v = std::max(0.0, v + settings.noise_rms * noise(rng));
        scan.samples.push_back({theta, v});
    }
    return scan;
}

/// Linear least squares in c0 + c1 cos(2 theta) + c2 sin(2 theta); exact and
/// globally optimal for the cos^2 model.
inline CosineSquaredFit fit_cos_squared(const PolarimeterScan& scan) {
    scan.validate();
    const std::size_t n = scan.samples.size();
    if (n < 6) throw identifiability_error("cos^2 fit needs at least 6 samples, got " + std::to_string(n));
    if (scan.span_deg() < 90.0)
        throw identifiability_error("scan spans " + std::to_string(scan.span_deg()) +
                                    " deg; at least 90 deg are needed to identify the phase");

    // Normal equations, accumulated about the mean intensity.
    double mean = 0.0;
    for (const auto& s : scan.samples) mean += s.intensity;
    mean /= static_cast<double>(n);
    std::array<std::array<double, 3>, 3> g{};
    std::array<double, 3> rhs{};
    for (const auto& s : scan.samples) {
        const double t = 2.0 * s.theta_deg * deg_to_rad;
        const std::array<double, 3> row{1.0, std::cos(t), std::sin(t)};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += row[i] * (s.intensity - mean);
            for (int j = 0; j < 3; ++j) g[i][j] += row[i] * row[j];
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 system.
    double max_pivot = 0.0, min_pivot = std::numeric_limits<double>::infinity();
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(g[r][col]) > std::abs(g[best][col])) best = r;
        std::swap(g[col], g[best]);
        std::swap(rhs[col], rhs[best]);
        const double pivot = g[col][col];
        max_pivot = std::max(max_pivot, std::abs(pivot));
        min_pivot = std::min(min_pivot, std::abs(pivot));
        if (pivot == 0.0) break;
        for (int r = col + 1; r < 3; ++r) {
            const double f = g[r][col] / pivot;
            for (int c = col; c < 3; ++c) g[r][c] -= f * g[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    if (!(min_pivot > 1e-10 * max_pivot)) throw identifiability_error("cos^2 design matrix is rank deficient");
    std::array<double, 3> c{};
    for (int i = 2; i >= 0; --i) {
        double v = rhs[i];
        for (int j = i + 1; j < 3; ++j) v -= g[i][j] * c[j];
        c[i] = v / g[i][i];
    }
    c[0] += mean;

    CosineSquaredFit fit;
    const double harmonic = std::hypot(c[1], c[2]);
    fit.amplitude = 2.0 * harmonic;
    if (harmonic <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(c[0]), 1e-300)) {
        fit.amplitude = 0.0;
        fit.theta0_deg = 0.0;
        fit.phase_degenerate = true;
    } else {
        double theta0 = 0.5 * std::atan2(c[2], c[1]) / deg_to_rad;
        if (theta0 < 0.0) theta0 += 180.0;
        if (theta0 >= 180.0) theta0 -= 180.0;
        fit.theta0_deg = theta0;
    }
    fit.offset = c[0] - 0.5 * fit.amplitude;

    double ss = 0.0;
    for (const auto& s : scan.samples) {
        const double r = s.intensity - fit(s.theta_deg);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

inline double polarization_from_amplitudes(double a_a, double a_b) {
    if (!(a_a + a_b > 0.0)) throw degenerate_error("A_a + A_b must be positive");
    return (a_a - a_b) / (a_a + a_b);
}

/// Distance between two axis angles modulo 180 degrees.
inline double axis_difference_deg(double a, double b) {
    double d = std::fmod(std::abs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

struct PolarizationExtraction {
    double polarization = 0.0;
    CosineSquaredFit fit_a;
    CosineSquaredFit fit_b;
    double phase_error_a_deg = 0.0;  // |theta_a - theta*|
    double phase_error_b_deg = 0.0;  // |theta_b - (theta* + 90)|
    bool phase_warning = false;      // either error above the tolerance
};

inline constexpr double phase_tolerance_deg = 0.5;

/// Pbar from the two Step-2 scans; theta_star_deg is the Step-1 axis.
inline PolarizationExtraction extract_polarization(const PolarimeterScan& scan_a, const PolarimeterScan& scan_b,
                                                   double theta_star_deg) {
    PolarizationExtraction r;
    r.fit_a = fit_cos_squared(scan_a);
    r.fit_b = fit_cos_squared(scan_b);
    r.polarization = polarization_from_amplitudes(r.fit_a.amplitude, r.fit_b.amplitude);
    r.phase_error_a_deg = axis_difference_deg(r.fit_a.theta0_deg, theta_star_deg);
    r.phase_error_b_deg = axis_difference_deg(r.fit_b.theta0_deg, theta_star_deg + 90.0);
    r.phase_warning = r.phase_error_a_deg > phase_tolerance_deg || r.phase_error_b_deg > phase_tolerance_deg;
    return r;
}

struct ProtocolResult {
    PolarimeterScan step1, step2a, step2b;
    CosineSquaredFit fit1;
    PolarizationExtraction extraction;
};

/// Full protocol: Step 1 finds theta*, Step 2 sets the polarizer at theta*
/// and theta* + 90. Each scan draws from its own seed (seed, seed+1, seed+2).
inline ProtocolResult run_protocol(const SourceModel& source, const ScanSettings& settings,
                                   double throughput = 1.0) {
    ProtocolResult r;
    ScanSettings s = settings;
    r.step1 = simulate_scan(source, Optics::analyzer_only(throughput), s);
    r.fit1 = fit_cos_squared(r.step1);
    const double theta_star = r.fit1.theta0_deg;
    s.seed = settings.seed + 1;
    r.step2a = simulate_scan(source, Optics::polarizer_at(theta_star, throughput), s);
    s.seed = settings.seed + 2;
    r.step2b = simulate_scan(source, Optics::polarizer_at(theta_star + 90.0, throughput), s);
    r.extraction = extract_polarization(r.step2a, r.step2b, theta_star);
    return r;
}

/// Two-column text: theta_degrees intensity; '#' starts a comment line.
inline void write_scan(std::ostream& out, const PolarimeterScan& scan, const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# theta_degrees intensity\n";
    for (const auto& s : scan.samples) out << format_double(s.theta_deg) << ' ' << format_double(s.intensity) << '\n';
}

inline PolarimeterScan read_scan(std::istream& in) {
    PolarimeterScan scan;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view text = detail::trim(raw);
        if (text.empty() || text.front() == '#') continue;
        std::string_view fields[2];
        int count = 0;
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
            std::size_t j = i;
            while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
            if (j > i) {
                if (count == 2) throw parse_error("expected two columns (theta_degrees, intensity)", line);
                fields[count++] = text.substr(i, j - i);
            }
            i = j;
        }
        if (count != 2) throw parse_error("expected two columns (theta_degrees, intensity)", line);
        const double theta = detail::parse_number(fields[0], line, "theta");
        const double intensity = detail::parse_number(fields[1], line, "intensity");
        if (!scan.samples.empty() && !(theta > scan.samples.back().theta_deg))
            throw parse_error("angles must be strictly increasing", line);
        scan.samples.push_back({theta, intensity});
    }
    if (scan.samples.size() >= 2) scan.step_deg = scan.samples[1].theta_deg - scan.samples[0].theta_deg;
    return scan;
}

} // namespace wirepol
