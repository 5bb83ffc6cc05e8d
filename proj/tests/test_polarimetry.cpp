#include "wirepol/polarimetry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace wirepol;

namespace {

PolarimeterScan noiseless(const SourceModel& s, const Optics& o, double step = 0.5) {
    ScanSettings settings;
    settings.step_deg = step;
    return simulate_scan(s, o, settings);
}

double cos2(double deg) {
    const double c = std::cos(deg * constants::pi / 180.0);
    return c * c;
}

} // namespace

TEST(SimulateScan, PurelyPolarizedSource) {
    const SourceModel s{2.0, 0.0, 30.0, 0.0};
    const auto scan = noiseless(s, Optics::analyzer_only());
    ASSERT_EQ(scan.samples.size(), 720u);
    for (const auto& p : scan.samples) EXPECT_NEAR(p.intensity, 2.0 * cos2(p.theta_deg - 30.0), 1e-14);
}

TEST(SimulateScan, UnpolarizedSourceIsFlat) {
    for (double bg : {0.0, 3.0}) {
        const SourceModel s{0.0, 4.0, 0.0, bg};
        for (const auto& p : noiseless(s, Optics::analyzer_only()).samples) EXPECT_EQ(p.intensity, 2.0 + bg);
    }
}

TEST(SimulateScan, PolarizerStepAmplitudes) {
    const double g = 0.8;
    const SourceModel s{1.0, 1.0, 25.0, 0.0};
    const auto fa = fit_cos_squared(noiseless(s, Optics::polarizer_at(25.0, g)));
    const auto fb = fit_cos_squared(noiseless(s, Optics::polarizer_at(115.0, g)));
    EXPECT_NEAR(fa.amplitude, 1.5 * g, 1e-12);
    EXPECT_NEAR(fb.amplitude, 0.5 * g, 1e-12);
    EXPECT_NEAR(polarization_from_amplitudes(fa.amplitude, fb.amplitude), 0.5, 1e-12);
}

TEST(SimulateScan, SeedDeterminesNoise) {
    const SourceModel s{1.0, 1.0, 10.0, 0.1};
    ScanSettings st;
    st.noise_rms = 0.02;
    st.seed = 42;
    const auto a = simulate_scan(s, Optics::analyzer_only(), st);
    const auto b = simulate_scan(s, Optics::analyzer_only(), st);
    st.seed = 43;
    const auto c = simulate_scan(s, Optics::analyzer_only(), st);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    bool differs = false;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].intensity, b.samples[i].intensity);
        differs = differs || a.samples[i].intensity != c.samples[i].intensity;
    }
    EXPECT_TRUE(differs);
}

TEST(SimulateScan, RejectsInvalidSettings) {
    ScanSettings st;
    st.step_deg = 0.0;
    EXPECT_THROW(simulate_scan({1, 1, 0, 0}, Optics::analyzer_only(), st), domain_error);
    st.step_deg = 1.0;
    st.noise_rms = -1.0;
    EXPECT_THROW(simulate_scan({1, 1, 0, 0}, Optics::analyzer_only(), st), domain_error);
}

TEST(FitCosSquared, RecoversExactModel) {
    const SourceModel s{2.0, 0.0, 30.0, 1.0};
    const auto fit = fit_cos_squared(noiseless(s, Optics::analyzer_only()));
    EXPECT_NEAR(fit.amplitude, 2.0, 1e-12);
    EXPECT_NEAR(fit.theta0_deg, 30.0, 1e-12);
    EXPECT_NEAR(fit.offset, 1.0, 1e-12);
    EXPECT_FALSE(fit.phase_degenerate);
}

TEST(FitCosSquared, PhaseWrapsIntoHalfTurn) {
    for (double axis : {-10.0, 0.0, 179.5, 200.0}) {
        const auto fit = fit_cos_squared(noiseless({1.0, 0.0, axis, 0.0}, Optics::analyzer_only()));
        double want = std::fmod(axis, 180.0);
        if (want < 0) want += 180.0;
        EXPECT_LT(axis_difference_deg(fit.theta0_deg, want), 1e-9) << axis;
        EXPECT_GE(fit.theta0_deg, 0.0);
        EXPECT_LT(fit.theta0_deg, 180.0);
    }
}

TEST(FitCosSquared, ConstantScanIsDegenerate) {
    const auto scan = noiseless({0.0, 4.0, 0.0, 0.5}, Optics::analyzer_only());
    const auto fit = fit_cos_squared(scan);
    EXPECT_EQ(fit.amplitude, 0.0);
    EXPECT_TRUE(fit.phase_degenerate);
    EXPECT_EQ(fit.theta0_deg, 0.0);
    EXPECT_NEAR(fit.offset, 2.5, 1e-14);
}

TEST(FitCosSquared, NeedsEnoughSamplesAndSpan) {
    PolarimeterScan few;
    for (int i = 0; i < 5; ++i) few.samples.push_back({i * 40.0, 1.0 + cos2(i * 40.0)});
    EXPECT_THROW(fit_cos_squared(few), identifiability_error);
    PolarimeterScan narrow;
    for (int i = 0; i < 50; ++i) narrow.samples.push_back({i * 1.0, 1.0 + cos2(i * 1.0)});
    EXPECT_THROW(fit_cos_squared(narrow), identifiability_error);
    PolarimeterScan unordered = noiseless({1, 0, 0, 0}, Optics::analyzer_only(), 10.0);
    std::swap(unordered.samples[2], unordered.samples[3]);
    EXPECT_THROW(fit_cos_squared(unordered), domain_error);
}

TEST(FitCosSquared, NoiseMatchesLinearModelStandardError) {
    const SourceModel s{2.0, 0.0, 30.0, 1.0};
    const double sigma = 0.01;
    ScanSettings st;
    st.noise_rms = sigma;
    const int trials = 1000;
    const double n = 720.0;
    const double se_theory = 2.0 * sigma * std::sqrt(2.0 / n);
    double sum = 0.0, sum2 = 0.0;
    int outside = 0;
    for (int seed = 0; seed < trials; ++seed) {
        st.seed = static_cast<std::uint64_t>(seed);
        const double a = fit_cos_squared(simulate_scan(s, Optics::analyzer_only(), st)).amplitude;
        sum += a;
        sum2 += a * a;
        if (std::abs(a - 2.0) > 3.0 * se_theory) ++outside;
    }
    const double mean = sum / trials;
    const double se_empirical = std::sqrt(sum2 / trials - mean * mean);
    EXPECT_NEAR(se_empirical / se_theory, 1.0, 0.1);
    EXPECT_LT(std::abs(mean - 2.0), 3.0 * se_theory / std::sqrt(trials));
    EXPECT_LE(outside, 10);
}

TEST(FitCosSquared, BeatsRandomCandidates) {
    const SourceModel s{1.3, 0.7, 47.0, 0.2};
    ScanSettings st;
    st.noise_rms = 0.05;
    st.seed = 9;
    const auto scan = simulate_scan(s, Optics::analyzer_only(), st);
    const auto fit = fit_cos_squared(scan);
    auto rss = [&](double a, double t0, double f) {
        double ss = 0.0;
        for (const auto& p : scan.samples) {
            const double r = p.intensity - (a * cos2(p.theta_deg - t0) + f);
            ss += r * r;
        }
        return ss;
    };
    const double best = rss(fit.amplitude, fit.theta0_deg, fit.offset);
    EXPECT_NEAR(std::sqrt(best / scan.samples.size()), fit.residual_rms, 1e-12);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> da(0.0, 3.0), dt(0.0, 180.0), df(-1.0, 2.0);
    for (int i = 0; i < 10000; ++i) ASSERT_LE(best, rss(da(rng), dt(rng), df(rng)));
    // Local perturbations around the optimum as well.
    for (double d : {1e-4, -1e-4}) {
        EXPECT_LE(best, rss(fit.amplitude + d, fit.theta0_deg, fit.offset));
        EXPECT_LE(best, rss(fit.amplitude, fit.theta0_deg + d, fit.offset));
        EXPECT_LE(best, rss(fit.amplitude, fit.theta0_deg, fit.offset + d));
    }
}

TEST(ExtractPolarization, AmplitudeArithmetic) {
    EXPECT_EQ(polarization_from_amplitudes(3.0, 1.0), 0.5);
    EXPECT_THROW(polarization_from_amplitudes(0.0, 0.0), degenerate_error);
}

TEST(ExtractPolarization, NoiselessRoundTrip) {
    const auto r = run_protocol(SourceModel::with_polarization(0.241, 1.0, 12.0), ScanSettings{});
    EXPECT_NEAR(r.extraction.polarization, 0.241, 1e-10);
    EXPECT_FALSE(r.extraction.phase_warning);
    EXPECT_NEAR(r.fit1.theta0_deg, 12.0, 1e-9);
}

TEST(ExtractPolarization, EndToEndIdentityOverRandomSources) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ip(0.0, 5.0), iu(0.0, 5.0), ax(0.0, 180.0), bg(0.0, 20.0), g(0.1, 1.0);
    for (int i = 0; i < 100; ++i) {
        const SourceModel s{ip(rng) + 1e-3, iu(rng), ax(rng), bg(rng)};
        const auto r = run_protocol(s, ScanSettings{}, g(rng));
        EXPECT_NEAR(r.extraction.polarization, s.polarization(), 1e-9);
    }
}

TEST(ExtractPolarization, InfraredBackgroundCancels) {
    const SourceModel clean = SourceModel::with_polarization(0.221, 2.0, 40.0, 0.0);
    SourceModel dirty = clean;
    dirty.ir_background = 10.0;
    const double a = run_protocol(clean, ScanSettings{}).extraction.polarization;
    const double b = run_protocol(dirty, ScanSettings{}).extraction.polarization;
    EXPECT_LT(std::abs(a - b), 1e-10);
    for (double bgv : {0.5, 3.0, 50.0}) {
        dirty.ir_background = bgv;
        EXPECT_NEAR(run_protocol(dirty, ScanSettings{}).extraction.polarization, 0.221, 1e-9);
    }
}

TEST(ExtractPolarization, MonotoneInPolarizedIntensity) {
    double previous = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const SourceModel s{0.1 * i, 1.0, 5.0, 0.3};
        const double p = run_protocol(s, ScanSettings{}).extraction.polarization;
        if (i == 0)
            EXPECT_NEAR(p, 0.0, 1e-12);
        else
            EXPECT_GT(p, previous);
        previous = p;
    }
}

TEST(ExtractPolarization, PhaseWarning) {
    const SourceModel s = SourceModel::with_polarization(0.3, 1.0, 20.0);
    const auto a = noiseless(s, Optics::polarizer_at(20.0));
    const auto b = noiseless(s, Optics::polarizer_at(110.0));
    EXPECT_FALSE(extract_polarization(a, b, 20.0).phase_warning);
    EXPECT_TRUE(extract_polarization(a, b, 25.0).phase_warning);
}

TEST(ExtractPolarization, NoisyExtractionScatter) {
    // 0.5 % of the peak reading as detector noise.
    const double p_true = 0.221;
    const SourceModel s = SourceModel::with_polarization(p_true, 1.0, 0.0);
    ScanSettings st;
    st.noise_rms = 0.005 * (s.i_polarized + 0.5 * s.i_unpolarized);
    double ss = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
        st.seed = static_cast<std::uint64_t>(3 * seed);
        const double d = run_protocol(s, st).extraction.polarization - p_true;
        ss += d * d;
    }
    EXPECT_LE(std::sqrt(ss / 100.0), 0.003);
}

TEST(ScanFile, RoundTripIsExact) {
    ScanSettings st;
    st.noise_rms = 0.01;
    st.seed = 5;
    const auto scan = simulate_scan({1.0, 0.5, 33.0, 0.1}, Optics::analyzer_only(), st);
    std::stringstream io;
    write_scan(io, scan, {"test scan"});
    const auto back = read_scan(io);
    ASSERT_EQ(back.samples.size(), scan.samples.size());
    for (std::size_t i = 0; i < scan.samples.size(); ++i) {
        EXPECT_EQ(back.samples[i].theta_deg, scan.samples[i].theta_deg);
        EXPECT_EQ(back.samples[i].intensity, scan.samples[i].intensity);
    }
    EXPECT_EQ(back.step_deg, 0.5);
}

TEST(ScanFile, ParseErrorsCarryLineNumbers) {
    auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_scan(in);
        } catch (const parse_error& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("# header\n0 1\n0.5 x\n"), 3);
    EXPECT_EQ(line_of("0 1\n0.5\n"), 2);
    EXPECT_EQ(line_of("0 1 2\n"), 1);
    EXPECT_EQ(line_of("1 1\n0.5 1\n"), 2);
    EXPECT_EQ(line_of("0,1\n0.5,2\n"), -1);
}

TEST(SourceModel, PolarizationDefinition) {
    EXPECT_NEAR(SourceModel::with_polarization(0.25, 4.0).polarization(), 0.25, 1e-15);
    EXPECT_THROW(SourceModel::with_polarization(1.5, 1.0), domain_error);
    EXPECT_THROW((SourceModel{0.0, 0.0, 0.0, 0.0}).polarization(), degenerate_error);
}
