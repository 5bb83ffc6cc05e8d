// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
//
//   acceptance [path/to/wirepol]
//
// The CLI path (for the determinism criterion) defaults to the one baked in
// at build time.

#include "wirepol/wirepol.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

using namespace wirepol;
using cd = std::complex<double>;

namespace {

// Tolerances pinned by the acceptance criteria.
constexpr double table2_tolerance = 0.003;
constexpr double consistent_sigma = 1.5;
constexpr double inconsistent_sigma = 3.0;
constexpr double runtime_budget_s = 10.0;
constexpr double thick_wire_tolerance = 0.01;
constexpr double wronskian_tolerance = 1e-10;
constexpr double passivity_floor = -1e-12;
constexpr double stefan_boltzmann_tolerance = 1e-6;
constexpr double fresnel_tolerance = 1e-12;
constexpr double roundtrip_tolerance = 1e-9;

struct Outcome {
    bool pass = false;
    std::string detail;
};

const MaterialDatabase& database() {
    static const MaterialDatabase db = MaterialDatabase::builtin();
    return db;
}

DrudePermittivityModel tungsten(double t) { return database().model_for_temperature("tungsten", t); }

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- 1

Outcome table2_reproduction() {
    const double diameters[] = {5.0, 17.0, 35.0, 100.0};
    const double expected[] = {0.2435, 0.222, 0.209, 0.20};
    const auto model = tungsten(2400.0);
    const auto start = std::chrono::steady_clock::now();
    double computed[4];
    for (int i = 0; i < 4; ++i)
        computed[i] =
            band_averaged_polarization(0.5 * diameters[i], 2400.0, BandFilter::comparison_band(), model).p_avg;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Outcome o{true, ""};
    for (int i = 0; i < 4; ++i) {
        const bool ok = std::abs(computed[i] - expected[i]) <= table2_tolerance;
        o.pass = o.pass && ok;
        o.detail += "d=" + fmt(diameters[i]) + ": " + fmt(computed[i]) + " vs " + fmt(expected[i]) +
                    (ok ? "" : " (off by " + fmt(std::abs(computed[i] - expected[i]), 2) + ")") + "; ";
    }
    const bool fast = seconds < runtime_budget_s;
    o.pass = o.pass && fast;
    o.detail += "runtime " + fmt(seconds, 3) + " s";
    return o;
}

// ---------------------------------------------------------------- 2

Outcome experimental_consistency() {
    const auto hot = compare_measurements(builtin_measurements(), tungsten(2400.0), 2400.0,
                                          BandFilter::comparison_band());
    const auto cold = compare_measurements(builtin_measurements(), tungsten(298.0), 298.0,
                                           BandFilter::comparison_band());
    Outcome o{true, "2400 K sigmas:"};
    for (const auto& r : hot.rows) {
        o.pass = o.pass && r.deviation_sigma <= consistent_sigma;
        o.detail += " " + fmt(r.deviation_sigma, 3);
    }
    const bool cold_off = cold.max_deviation_sigma() > inconsistent_sigma;
    o.pass = o.pass && cold_off;
    o.detail += "; 298 K max " + fmt(cold.max_deviation_sigma(), 3) + " sigma";
    return o;
}

// ---------------------------------------------------------------- 3

Outcome figure1_crossover() {
    const SweepSpec spec = SweepSpec::figure1();
    const auto rows = run_sweep(spec, database());
    int crossings = 0;
    double zero = std::numeric_limits<double>::quiet_NaN();
    auto size = [&](const SweepRow& r) { return std::log10(2.0 * constants::pi * r.radius_um / r.wavelength_um); };
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if ((rows[i - 1].p < 0.0) != (rows[i].p < 0.0)) {
            ++crossings;
            const double x0 = size(rows[i - 1]), x1 = size(rows[i]);
            zero = x0 + (x1 - x0) * rows[i - 1].p / (rows[i - 1].p - rows[i].p);
        }
    }
    Outcome o;
    o.pass = crossings == 1 && zero > -1.0 && zero < 1.0;
    o.detail = std::to_string(crossings) + " sign change(s) over " + std::to_string(rows.size()) +
               " points; zero at log10(2 pi a/lambda) = " + fmt(zero, 3);
    return o;
}

// ---------------------------------------------------------------- 4

Outcome figure4_maximum() {
    SweepSpec spec = SweepSpec::figure4();
    spec.temperatures_k = {2400.0};
    const auto rows = run_sweep(spec, database());
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].p > rows[best].p) best = i;
    const double d = 2.0 * rows[best].radius_um;
    const bool interior = best > 0 && best + 1 < rows.size();
    const bool local = interior && rows[best - 1].p < rows[best].p && rows[best + 1].p < rows[best].p;
    Outcome o;
    o.pass = local && d >= 2.0 && d <= 6.0;
    o.detail = "max P_avg = " + fmt(rows[best].p) + " at d = " + fmt(d, 3) + " um (grid index " +
               std::to_string(best) + " of " + std::to_string(rows.size()) + ")";
    return o;
}

// ---------------------------------------------------------------- 5

Outcome thick_wire_consistency() {
    const auto model = tungsten(2400.0);
    const ComplexPermittivity eps = permittivity(model, 0.5);
    const double partial = linear_polarization(2.0 * constants::pi / 0.5, 50.0, refraction_index(eps));
    const double fresnel = thick_wire_polarization(eps);
    Outcome o;
    o.pass = std::abs(partial - fresnel) <= thick_wire_tolerance;
    o.detail = "partial-wave " + fmt(partial, 6) + ", Fresnel limit " + fmt(fresnel, 6) + ", |diff| " +
               fmt(std::abs(partial - fresnel), 3);
    return o;
}

// ---------------------------------------------------------------- 6

struct Property {
    std::string name;
    std::function<bool()> check;
};

bool wronskian_property() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> xs(0.1, 500.0);
    std::uniform_int_distribution<int> ms(0, 60);
    for (int i = 0; i < 500; ++i) {
        const double x = xs(rng);
        const int m = ms(rng);
        const cd w = cd(special::bessel_j(m, x)) * special::hankel1_derivative(m, x) -
                     special::bessel_j_derivative(m, cd(x)) * special::hankel1(m, x);
        const cd want(0.0, 2.0 / (constants::pi * x));
        if (!(std::abs(w - want) <= wronskian_tolerance * std::abs(want))) return false;
    }
    return true;
}

bool passivity_property() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> logx(std::log(0.01), std::log(1e3));
    std::uniform_real_distribution<double> re(0.1, 6.0), im(1e-6, 6.0);
    for (int i = 0; i < 40; ++i) {
        const double x = std::exp(logx(rng));
        const cd n(re(rng), im(rng));
        const int top = order_ceiling(1.0, x, n);
        for (auto p : {Polarization::te, Polarization::tm})
            for (double t : partial_wave_terms(p, 1.0, x, n, top))
                if (!(t >= passivity_floor)) return false;
    }
    return true;
}

bool fold_symmetry_property() {
    const cd n(3.2, 2.9);
    for (double x : {0.4, 3.0, 25.0}) {
        for (auto p : {Polarization::te, Polarization::tm}) {
            double folded = 0.0, bilateral = 0.0;
            for (int m = 0; m <= order_ceiling(1.0, x, n); ++m) {
                const cd t = transition_amplitude(m, p, 1.0, x, n).value;
                const double term = 4.0 * (t.real() - std::norm(t));
                folded += m == 0 ? term : 2.0 * term;
                if (m == 0) {
                    bilateral += term;
                } else {
                    const cd tn = transition_amplitude(-m, p, 1.0, x, n).value;
                    bilateral += term + 4.0 * (tn.real() - std::norm(tn));
                }
            }
            if (folded != bilateral) return false;
        }
    }
    return true;
}

bool stefan_boltzmann_property() {
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double t : {298.0, 1600.0, 2400.0}) {
        const double integral =
            integrator.integrate([&](double l) { return planck_radiance(l, t); }, 0.0,
                                 std::numeric_limits<double>::infinity(), 1e-12) *
            constants::micron;
        const double want = 5.670374419e-8 * std::pow(t, 4);
        if (!(std::abs(integral / want - 1.0) <= stefan_boltzmann_tolerance)) return false;
    }
    return true;
}

bool fresnel_property() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-100.0, 100.0), im(0.0, 100.0);
    std::uniform_real_distribution<double> ang(-constants::pi / 2 + 1e-9, constants::pi / 2 - 1e-9);
    for (int i = 0; i < 2000; ++i) {
        const ComplexPermittivity eps{cd(re(rng), im(rng))};
        const auto r = fresnel_coefficients(eps, ang(rng));
        for (cd v : {r.r_te, r.r_tm}) {
            const double absorbed = 1.0 - std::norm(v);
            if (absorbed < -fresnel_tolerance || absorbed > 1.0 + fresnel_tolerance) return false;
        }
        const auto normal = fresnel_coefficients(eps, 0.0);
        if (std::abs(std::abs(normal.r_te) - std::abs(normal.r_tm)) > fresnel_tolerance) return false;
    }
    return true;
}

bool polarimetry_roundtrip_property() {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ip(0.0, 5.0), iu(0.0, 5.0), ax(0.0, 180.0);
    for (int i = 0; i < 50; ++i) {
        const SourceModel s{ip(rng) + 1e-3, iu(rng), ax(rng), 0.0};
        const double got = run_protocol(s, ScanSettings{}).extraction.polarization;
        if (!(std::abs(got - s.polarization()) <= roundtrip_tolerance)) return false;
    }
    return true;
}

bool background_invariance_property() {
    for (double p : {0.05, 0.208, 0.5, 0.9}) {
        const SourceModel clean = SourceModel::with_polarization(p, 1.0, 33.0, 0.0);
        const double ref = run_protocol(clean, ScanSettings{}).extraction.polarization;
        for (double bg : {0.1, 10.0, 100.0}) {
            SourceModel dirty = clean;
            dirty.ir_background = bg;
            if (!(std::abs(run_protocol(dirty, ScanSettings{}).extraction.polarization - ref) <= roundtrip_tolerance))
                return false;
        }
    }
    return true;
}

Outcome property_suites() {
    const std::vector<Property> props = {
        {"Wronskian", wronskian_property},
        {"passivity", passivity_property},
        {"fold symmetry", fold_symmetry_property},
        {"Stefan-Boltzmann", stefan_boltzmann_property},
        {"Fresnel bounds", fresnel_property},
        {"polarimetry round trip", polarimetry_roundtrip_property},
        {"IR background invariance", background_invariance_property},
    };
    Outcome o{true, ""};
    for (const auto& p : props) {
        bool ok = false;
        try {
            ok = p.check();
        } catch (const std::exception& e) {
            o.detail += "[" + p.name + " threw: " + e.what() + "] ";
        }
        o.pass = o.pass && ok;
        o.detail += p.name + (ok ? " ok" : " FAILED") + "; ";
    }
    return o;
}

// ---------------------------------------------------------------- 7

struct Captured {
    int status = -1;
    std::string out;
};

Captured capture(const std::string& command) {
    Captured c;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return c;
    char buf[8192];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) c.out.append(buf, n);
    const int status = pclose(pipe);
    c.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return c;
}

Outcome sweep_determinism(const std::string& cli) {
    const std::vector<std::string> sweeps = {
        "sweep --preset figure1",
        "sweep --variable diameter --lo 0.5 --hi 120 --points 24 --band 0.5:0.75 --temp-k 298,1600,2400",
    };
    Outcome o{true, ""};
    for (const auto& args : sweeps) {
        const Captured ref = capture(cli + " " + args + " --threads 1");
        if (ref.status != 0 || ref.out.empty()) {
            o.pass = false;
            o.detail += "'" + args + "' failed with status " + std::to_string(ref.status) + "; ";
            continue;
        }
        for (int threads : {1, 2, 3, 8}) {
            const Captured again = capture(cli + " " + args + " --threads " + std::to_string(threads));
            if (again.status != 0 || again.out != ref.out) {
                o.pass = false;
                o.detail += "'" + args + "' differs at --threads " + std::to_string(threads) + "; ";
            }
        }
    }
    if (o.pass) o.detail = "2 sweeps x 5 runs (threads 1,1,2,3,8) byte-identical";
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : WIREPOL_CLI_PATH;
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "Table 2 reproduction (2400 K, band 0.5-0.75 um, +-0.003, < 10 s)", table2_reproduction},
        {2, "Experimental consistency (<= 1.5 sigma at 2400 K, > 3 sigma somewhere at 298 K)",
         experimental_consistency},
        {3, "Figure 1 sign crossover (single zero in (-1, 1))", figure1_crossover},
        {4, "Figure 4 interior maximum at d in [2, 6] um (2400 K)", figure4_maximum},
        {5, "Thick-wire consistency (a = 50 um, |P - P_Fresnel| <= 0.01)", thick_wire_consistency},
        {6, "Property suites", property_suites},
        {7, "Sweep determinism across runs and --threads", [&] { return sweep_determinism(cli); }},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " -- " << o.detail << '\n';
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << '\n';
    return failures == 0 ? 0 : 1;
}
