// wirepol: command-line front end.
//
//   wirepol point    --diameter-um 5 --band 0.5:0.75 --temp-k 2400
//   wirepol sweep    --preset figure4 --threads 4 --output fig4.csv
//   wirepol compare  --preset table2
//   wirepol polsim   --p-true 0.221 --noise-rms 0.005 --seed 7 --scan-dir scans
//   wirepol material show --temp-k 2400 --wavelength-um 0.6
//
// Exit status: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.

#include "wirepol/wirepol.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace wirepol;

enum Exit { exit_ok = 0, exit_usage = 1, exit_numeric = 2, exit_io = 3 };

// Config file: `key = value` lines, keys are long flag names without "--".
// Keys not given on the command line are appended as flags, so the command
// line always wins.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (!path) return args;
    std::ifstream in(*path);
    if (!in) throw io_error("cannot open config file '" + *path + "'");
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view text = wirepol::detail::trim(raw);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw parse_error("config: expected 'key = value'", line);
        const std::string key(wirepol::detail::trim(text.substr(0, eq)));
        std::string value(wirepol::detail::trim(text.substr(eq + 1)));
        if (key.empty()) throw parse_error("config: empty key", line);
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        if (given) continue;
        args.push_back(flag + "=" + value);
    }
    return args;
}

std::string join_command(const std::vector<std::string>& args) {
    std::string s = "wirepol";
    for (const auto& a : args) {
        s += ' ';
        s += a;
    }
    return s;
}

// Command echo without --output/--threads so metadata is independent of both.
std::string canonical_command(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        bool drop = false;
        for (const char* f : {"--output", "--threads", "-o", "-j"}) {
            if (a == f) {
                drop = true;
                ++i;
            } else if (a.rfind(std::string(f) + "=", 0) == 0) {
                drop = true;
            }
        }
        if (!drop) kept.push_back(a);
    }
    return join_command(kept);
}

BandFilter parse_band(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw domain_error("band must be written lo:hi in microns, got '" + text + "'");
    BandFilter b;
    b.lambda_lo_um = wirepol::detail::parse_number(text.substr(0, colon), 0, "band lower edge");
    b.lambda_hi_um = wirepol::detail::parse_number(text.substr(colon + 1), 0, "band upper edge");
    b.validate();
    return b;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto t = wirepol::detail::trim(item);
        if (!t.empty()) v.push_back(wirepol::detail::parse_number(t, 0, what));
    }
    if (v.empty()) throw domain_error(std::string("empty list for ") + what);
    return v;
}

void warn_fitted_range(double lo_um, double hi_um) {
    if (!in_fitted_range(lo_um) || !in_fitted_range(hi_um))
        std::cerr << "wirepol: warning: wavelengths outside the fitted range [" << fitted_range_lo_um << ", "
                  << fitted_range_hi_um << "] um; the optical model is extrapolated\n";
}

// Output goes to a file when given, else stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw io_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish(const std::string& path) {
        stream().flush();
        if (!stream()) throw io_error("write failed for '" + (path.empty() ? std::string("stdout") : path) + "'");
    }

private:
    std::ofstream file_;
};

struct CommonOptions {
    std::string material = "tungsten";
    std::string bounded_terms = "omit";
    std::string output;
    int threads = 1;
    double tolerance = default_emissivity_tolerance;
    int nodes = 64;
    int check_nodes = 128;
    double quadrature_target = 1e-6;

    BoundedTermPolicy policy() const {
        return bounded_terms == "use-bound" ? BoundedTermPolicy::use_bound : BoundedTermPolicy::omit;
    }
    QuadratureConfig quadrature() const { return {nodes, check_nodes, quadrature_target, tolerance}; }
};

void add_common(CLI::App* cmd, CommonOptions& c, bool with_threads) {
    cmd->add_option("--material", c.material, "tungsten (database) or vacuum")->capture_default_str();
    cmd->add_option("--bounded-terms", c.bounded_terms, "free terms given only as an upper bound: omit | use-bound")
        ->check(CLI::IsMember({"omit", "use-bound"}))
        ->capture_default_str();
    cmd->add_option("-o,--output", c.output, "output file (default: stdout)");
    cmd->add_option("--tol", c.tolerance, "relative truncation tolerance of the partial-wave sum")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--nodes", c.nodes, "Gauss-Legendre nodes for band averages")
        ->check(CLI::Range(1, 4096))
        ->capture_default_str();
    cmd->add_option("--check-nodes", c.check_nodes, "nodes of the error-estimate pass")
        ->check(CLI::Range(1, 4096))
        ->capture_default_str();
    cmd->add_option("--quadrature-target", c.quadrature_target, "largest accepted quadrature error estimate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (with_threads)
        cmd->add_option("-j,--threads", c.threads, "worker threads (output does not depend on it)")
            ->check(CLI::Range(1, 1024))
            ->capture_default_str();
}

std::vector<std::string> provenance_lines(const SweepSpec& spec, const MaterialDatabase& db,
                                          const std::vector<double>& temperatures) {
    std::vector<std::string> lines;
    if (spec.material == "vacuum") {
        lines.push_back("vacuum (eps = 1)");
        return lines;
    }
    std::vector<double> seen;
    for (double t : temperatures) {
        const MaterialRecord& r = db.nearest_record(spec.material, t);
        bool dup = false;
        for (double s : seen) dup = dup || s == r.temperature_k;
        if (dup) continue;
        seen.push_back(r.temperature_k);
        lines.push_back(r.element + " " + format_double(r.temperature_k) + " K: " + r.provenance +
                        " (bounded terms: " + to_string(spec.policy) + ")");
    }
    return lines;
}

void check_material(const std::string& material, const MaterialDatabase& db) {
    if (material == "vacuum") return;
    if (db.temperatures(material).empty()) throw domain_error("unknown material '" + material + "'");
}

// ---------------------------------------------------------------- point

struct PointOptions {
    CommonOptions common;
    std::optional<double> diameter_um, radius_um, wavelength_um;
    std::string band;
    double temp_k = 2400.0;
};

int run_point(const PointOptions& o, const std::string& command) {
    const MaterialDatabase db = MaterialDatabase::load_default();
    check_material(o.common.material, db);
    SweepSpec spec;
    spec.material = o.common.material;
    spec.policy = o.common.policy();
    spec.quadrature = o.common.quadrature();
    spec.temperatures_k = {o.temp_k};
    const double radius = o.radius_um ? *o.radius_um : 0.5 * *o.diameter_um;
    if (!o.band.empty()) {
        spec.band = parse_band(o.band);
        warn_fitted_range(spec.band->lambda_lo_um, spec.band->lambda_hi_um);
    } else {
        spec.wavelength_um = o.wavelength_um.value_or(0.5);
        warn_fitted_range(spec.wavelength_um, spec.wavelength_um);
    }
    const SweepRow row = evaluate_point(spec, db, radius, spec.wavelength_um, o.temp_k);

    std::ostringstream params;
    params << "radius_um=" << format_double(radius);
    if (spec.band)
        params << " band=" << format_double(spec.band->lambda_lo_um) << ":" << format_double(spec.band->lambda_hi_um)
               << " nodes=" << spec.quadrature.nodes << " check_nodes=" << spec.quadrature.check_nodes;
    else
        params << " wavelength_um=" << format_double(spec.wavelength_um);
    params << " temperature_K=" << format_double(o.temp_k) << " material=" << spec.material
           << " bounded_terms=" << to_string(spec.policy) << " tol=" << format_double(spec.quadrature.emissivity_tolerance);

    Sink sink(o.common.output);
    write_metadata(sink.stream(), command, params.str(), provenance_lines(spec, db, {o.temp_k}));
    write_rows_csv(sink.stream(), spec.band, {row});
    sink.finish(o.common.output);
    return exit_ok;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    CommonOptions common;
    std::string preset;
    std::string variable = "radius";
    std::optional<double> lo, hi;
    int points = 50;
    std::string spacing = "log";
    std::optional<double> diameter_um, radius_um, wavelength_um;
    std::string band;
    std::string temps;
};

int run_sweep_cmd(const SweepOptions& o, const std::string& command) {
    const MaterialDatabase db = MaterialDatabase::load_default();
    check_material(o.common.material, db);
    SweepSpec spec;
    if (o.preset == "figure1")
        spec = SweepSpec::figure1();
    else if (o.preset == "figure4")
        spec = SweepSpec::figure4();
    else if (!o.preset.empty())
        throw domain_error("sweep presets are figure1 and figure4, got '" + o.preset + "'");
    else {
        if (!o.lo || !o.hi) throw domain_error("sweep needs --lo and --hi (or --preset)");
        if (o.variable == "radius") spec.variable = SweepVariable::radius;
        else if (o.variable == "diameter") spec.variable = SweepVariable::diameter;
        else if (o.variable == "wavelength") spec.variable = SweepVariable::wavelength;
        else spec.variable = SweepVariable::temperature;
        spec.range = {*o.lo, *o.hi, o.points, o.spacing == "linear" ? Spacing::linear : Spacing::log};
        spec.band.reset();
    }
    // Explicit flags refine a preset.
    if (o.lo) spec.range.lo = *o.lo;
    if (o.hi) spec.range.hi = *o.hi;
    if (o.radius_um) spec.radius_um = *o.radius_um;
    if (o.diameter_um) spec.radius_um = 0.5 * *o.diameter_um;
    if (o.wavelength_um) {
        spec.wavelength_um = *o.wavelength_um;
        spec.band.reset();
    }
    if (!o.band.empty()) spec.band = parse_band(o.band);
    if (!o.temps.empty()) spec.temperatures_k = parse_list(o.temps, "temperatures");
    spec.material = o.common.material;
    spec.policy = o.common.policy();
    spec.quadrature = o.common.quadrature();
    spec.validate();

    if (spec.band)
        warn_fitted_range(spec.band->lambda_lo_um, spec.band->lambda_hi_um);
    else if (spec.variable == SweepVariable::wavelength)
        warn_fitted_range(spec.range.lo, spec.range.hi);
    else
        warn_fitted_range(spec.wavelength_um, spec.wavelength_um);

    const std::vector<SweepRow> rows = run_sweep(spec, db, o.common.threads);
    const std::vector<double> temps =
        spec.variable == SweepVariable::temperature ? spec.grid() : spec.temperatures_k;
    Sink sink(o.common.output);
    write_sweep_csv(sink.stream(), spec, rows, command, provenance_lines(spec, db, temps));
    sink.finish(o.common.output);
    return exit_ok;
}

// ---------------------------------------------------------------- compare

struct CompareOptions {
    CommonOptions common;
    std::string preset;
    std::string measurements;
    double temp_k = 2400.0;
    std::string band = "0.5:0.75";
};

int run_compare(const CompareOptions& o, const std::string& command) {
    if (!o.preset.empty() && o.preset != "table2")
        throw domain_error("compare preset is table2, got '" + o.preset + "'");
    const MaterialDatabase db = MaterialDatabase::load_default();
    check_material(o.common.material, db);
    std::vector<Measurement> data;
    if (o.measurements.empty()) {
        data = builtin_measurements();
    } else {
        std::ifstream in(o.measurements);
        if (!in) throw io_error("cannot open measurement file '" + o.measurements + "'");
        try {
            data = read_measurements(in);
        } catch (const parse_error& e) {
            throw parse_error(o.measurements + ": " + e.what(), 0);
        }
    }
    const BandFilter band = parse_band(o.band);
    warn_fitted_range(band.lambda_lo_um, band.lambda_hi_um);
    const DrudePermittivityModel model =
        o.common.material == "vacuum" ? DrudePermittivityModel::vacuum()
                                      : db.model_for_temperature(o.common.material, o.temp_k, o.common.policy());
    const ComparisonReport report =
        compare_measurements(data, model, o.temp_k, band, o.common.quadrature(), o.common.threads);

    std::ostringstream params;
    params << "measurements=" << (o.measurements.empty() ? std::string("builtin") : o.measurements)
           << " temperature_K=" << format_double(o.temp_k) << " band=" << format_double(band.lambda_lo_um) << ":"
           << format_double(band.lambda_hi_um) << " material=" << o.common.material
           << " bounded_terms=" << to_string(o.common.policy()) << " nodes=" << o.common.nodes
           << " check_nodes=" << o.common.check_nodes << " tol=" << format_double(o.common.tolerance);
    SweepSpec tag;
    tag.material = o.common.material;
    tag.policy = o.common.policy();
    Sink sink(o.common.output);
    write_metadata(sink.stream(), command, params.str(), provenance_lines(tag, db, {o.temp_k}));
    sink.stream() << "# model_temperature_K: " << format_double(report.model_temperature_k) << '\n';
    sink.stream() << "# max_deviation_sigma: " << format_double(report.max_deviation_sigma()) << '\n';
    write_report_csv(sink.stream(), report);
    sink.finish(o.common.output);
    return exit_ok;
}

// ---------------------------------------------------------------- polsim

struct PolsimOptions {
    std::string output;
    std::string scan_dir;
    double p_true = 0.221;
    double total = 1.0;
    double axis_deg = 0.0;
    double background = 0.0;
    double throughput = 1.0;
    double noise_rms = 0.0;
    std::uint64_t seed = 0;
    double step_deg = 0.5;
    double span_deg = 360.0;
};

int run_polsim(const PolsimOptions& o, const std::string& command) {
    const SourceModel source = SourceModel::with_polarization(o.p_true, o.total, o.axis_deg, o.background);
    ScanSettings settings;
    settings.step_deg = o.step_deg;
    settings.span_deg = o.span_deg;
    settings.noise_rms = o.noise_rms;
    settings.seed = o.seed;
    const ProtocolResult r = run_protocol(source, settings, o.throughput);

    std::ostringstream params;
    params << "p_true=" << format_double(o.p_true) << " total=" << format_double(o.total)
           << " axis_deg=" << format_double(o.axis_deg) << " background=" << format_double(o.background)
           << " throughput=" << format_double(o.throughput) << " noise_rms=" << format_double(o.noise_rms)
           << " seed=" << o.seed << " step_deg=" << format_double(o.step_deg)
           << " span_deg=" << format_double(o.span_deg);

    if (!o.scan_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(o.scan_dir, ec);
        if (ec) throw io_error("cannot create scan directory '" + o.scan_dir + "': " + ec.message());
        const std::pair<const char*, const PolarimeterScan*> scans[] = {
            {"step1.txt", &r.step1}, {"step2a.txt", &r.step2a}, {"step2b.txt", &r.step2b}};
        for (const auto& [name, scan] : scans) {
            const std::string path = (std::filesystem::path(o.scan_dir) / name).string();
            Sink sink(path);
            write_scan(sink.stream(), *scan, {"wirepol " + std::string(version), "parameters: " + params.str(), name});
            sink.finish(path);
        }
    }

    const PolarizationExtraction& x = r.extraction;
    if (x.phase_warning)
        std::cerr << "wirepol: warning: fitted phases deviate from the Step-1 axis by more than "
                  << phase_tolerance_deg << " degrees\n";
    Sink sink(o.output);
    write_metadata(sink.stream(), command, params.str(), {});
    sink.stream() << "p_true,p_extracted,theta_star_deg,amplitude_a,amplitude_b,theta_a_deg,theta_b_deg,"
                     "phase_error_a_deg,phase_error_b_deg,residual_rms_a,residual_rms_b,phase_warning\n";
    sink.stream() << format_double(o.p_true) << ',' << format_double(x.polarization) << ','
                  << format_double(r.fit1.theta0_deg) << ',' << format_double(x.fit_a.amplitude) << ','
                  << format_double(x.fit_b.amplitude) << ',' << format_double(x.fit_a.theta0_deg) << ','
                  << format_double(x.fit_b.theta0_deg) << ',' << format_double(x.phase_error_a_deg) << ','
                  << format_double(x.phase_error_b_deg) << ',' << format_double(x.fit_a.residual_rms) << ','
                  << format_double(x.fit_b.residual_rms) << ',' << (x.phase_warning ? 1 : 0) << '\n';
    sink.finish(o.output);
    return exit_ok;
}

// ---------------------------------------------------------------- material show

struct MaterialOptions {
    std::string element = "tungsten";
    std::optional<double> temp_k;
    std::optional<double> wavelength_um;
    std::string bounded_terms = "omit";
    std::string output;
};

int run_material_show(const MaterialOptions& o, const std::string& command) {
    const MaterialDatabase db = MaterialDatabase::load_default();
    check_material(o.element, db);
    const BoundedTermPolicy policy =
        o.bounded_terms == "use-bound" ? BoundedTermPolicy::use_bound : BoundedTermPolicy::omit;
    std::vector<const MaterialRecord*> shown;
    if (o.temp_k) {
        shown.push_back(&db.nearest_record(o.element, *o.temp_k));
    } else {
        for (const auto& r : db.records())
            if (r.element == o.element) shown.push_back(&r);
    }
    if (o.wavelength_um) warn_fitted_range(*o.wavelength_um, *o.wavelength_um);

    Sink sink(o.output);
    std::ostream& out = sink.stream();
    out << "# wirepol " << version << '\n' << "# command: " << command << '\n';
    const char* env = std::getenv(MaterialDatabase::path_env);
    out << "# database: " << (env != nullptr && *env != '\0' ? env : "builtin") << '\n';
    out << "kind,temperature_K,index,K0_or_sigma,lambda_um,delta,flags\n";
    for (const MaterialRecord* r : shown) {
        const std::string t = format_double(r->temperature_k);
        for (std::size_t i = 0; i < r->bound_terms.size(); ++i) {
            const BoundTerm& b = r->bound_terms[i];
            std::string flags = b.tentative ? "tentative" : "";
            if (b.inherited) flags += flags.empty() ? "inherited" : ";inherited";
            out << "bound," << t << ',' << i << ',' << format_double(b.strength) << ','
                << format_double(b.resonance_um) << ',' << format_double(b.damping) << ',' << flags << '\n';
        }
        for (std::size_t i = 0; i < r->free_terms.size(); ++i) {
            const FreeTerm& f = r->free_terms[i];
            std::string flags = f.tentative ? "tentative" : "";
            if (f.upper_bound) flags += flags.empty() ? "upper_bound" : ";upper_bound";
            out << "free," << t << ',' << i << ',' << format_double(f.conductivity) << ','
                << format_double(f.relaxation_um) << ",," << flags << '\n';
        }
        const DrudePermittivityModel model = MaterialDatabase::make_model(*r, policy);
        out << "sigma0," << t << ",," << format_double(r->sigma0) << ",,,tabulated\n";
        out << "sigma_dc," << t << ",," << format_double(model.dc_conductivity()) << ",,," << to_string(policy)
            << '\n';
        if (o.wavelength_um) {
            const complex eps = permittivity(model, *o.wavelength_um).epsilon;
            const complex n = refraction_index({eps});
            out << "eps_re," << t << ",," << format_double(eps.real()) << ',' << format_double(*o.wavelength_um)
                << ",," << to_string(policy) << '\n';
            out << "eps_im," << t << ",," << format_double(eps.imag()) << ',' << format_double(*o.wavelength_um)
                << ",," << to_string(policy) << '\n';
            out << "n_re," << t << ",," << format_double(n.real()) << ',' << format_double(*o.wavelength_um) << ",,"
                << to_string(policy) << '\n';
            out << "n_im," << t << ",," << format_double(n.imag()) << ',' << format_double(*o.wavelength_um) << ",,"
                << to_string(policy) << '\n';
        }
    }
    sink.finish(o.output);
    return exit_ok;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config(args);
    } catch (const io_error& e) {
        std::cerr << "wirepol: " << e.what() << '\n';
        return exit_io;
    } catch (const parse_error& e) {
        std::cerr << "wirepol: " << e.what() << '\n';
        return exit_usage;
    }

    CLI::App app{"Thermal emission polarization of thin metal wires", "wirepol"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));
    app.add_option("--config", "key = value file mirroring the long flags (flags win)");

    PointOptions point;
    CLI::App* point_cmd = app.add_subcommand("point", "P at one wavelength, or the band average over --band");
    add_common(point_cmd, point.common, false);
    auto* d = point_cmd->add_option("--diameter-um", point.diameter_um, "wire diameter [um]")->check(CLI::PositiveNumber);
    auto* r = point_cmd->add_option("--radius-um", point.radius_um, "wire radius [um]")->check(CLI::PositiveNumber);
    d->excludes(r);
    auto* w = point_cmd->add_option("--wavelength-um", point.wavelength_um, "wavelength [um] (default 0.5)")
                  ->check(CLI::PositiveNumber);
    auto* b = point_cmd->add_option("--band", point.band, "band average over lo:hi [um]");
    w->excludes(b);
    point_cmd->add_option("--temp-k", point.temp_k, "wire temperature [K]")->capture_default_str();

    SweepOptions sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "CSV curve over radius, diameter, wavelength or temperature");
    add_common(sweep_cmd, sweep.common, true);
    sweep_cmd->add_option("--preset", sweep.preset, "figure1 | figure4");
    sweep_cmd->add_option("--variable", sweep.variable, "radius | diameter | wavelength | temperature")
        ->check(CLI::IsMember({"radius", "diameter", "wavelength", "temperature"}))
        ->capture_default_str();
    sweep_cmd->add_option("--lo", sweep.lo, "first grid value");
    sweep_cmd->add_option("--hi", sweep.hi, "last grid value");
    sweep_cmd->add_option("--points", sweep.points, "grid points (>= 2)")->capture_default_str();
    sweep_cmd->add_option("--spacing", sweep.spacing, "linear | log")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    auto* sd = sweep_cmd->add_option("--diameter-um", sweep.diameter_um, "fixed diameter [um]");
    auto* sr = sweep_cmd->add_option("--radius-um", sweep.radius_um, "fixed radius [um]");
    sd->excludes(sr);
    auto* sw = sweep_cmd->add_option("--wavelength-um", sweep.wavelength_um, "fixed wavelength [um]");
    auto* sb = sweep_cmd->add_option("--band", sweep.band, "band average over lo:hi [um]");
    sw->excludes(sb);
    sweep_cmd->add_option("--temp-k", sweep.temps, "temperature(s) [K], comma separated");

    CompareOptions compare;
    CLI::App* compare_cmd = app.add_subcommand("compare", "measured vs. computed band-averaged polarization");
    add_common(compare_cmd, compare.common, true);
    compare_cmd->add_option("--preset", compare.preset, "table2: built-in measurements, 2400 K, 0.5:0.75 um");
    compare_cmd->add_option("--measurements", compare.measurements, "CSV of diameter_um,p,error (default: built-in)");
    compare_cmd->add_option("--temp-k", compare.temp_k, "model temperature [K]")->capture_default_str();
    compare_cmd->add_option("--band", compare.band, "band lo:hi [um]")->capture_default_str();

    PolsimOptions polsim;
    CLI::App* polsim_cmd = app.add_subcommand("polsim", "simulate the two-step polarimeter protocol");
    polsim_cmd->add_option("-o,--output", polsim.output, "summary file (default: stdout)");
    polsim_cmd->add_option("--scan-dir", polsim.scan_dir, "directory for step1/step2a/step2b scan files");
    polsim_cmd->add_option("--p-true", polsim.p_true, "source polarization")->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    polsim_cmd->add_option("--total", polsim.total, "I_P + I_U")->check(CLI::PositiveNumber)->capture_default_str();
    polsim_cmd->add_option("--axis-deg", polsim.axis_deg, "polarization axis [deg]")->capture_default_str();
    polsim_cmd->add_option("--background", polsim.background, "additive IR background")->capture_default_str();
    polsim_cmd->add_option("--throughput", polsim.throughput, "common polarizer throughput")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    polsim_cmd->add_option("--noise-rms", polsim.noise_rms, "detector noise, same units as --total")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    polsim_cmd->add_option("--seed", polsim.seed, "noise seed")->capture_default_str();
    polsim_cmd->add_option("--step-deg", polsim.step_deg, "analyzer step [deg]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    polsim_cmd->add_option("--span-deg", polsim.span_deg, "analyzer rotation span [deg]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    MaterialOptions material;
    CLI::App* material_cmd = app.add_subcommand("material", "inspect the material database");
    material_cmd->require_subcommand(1);
    CLI::App* show_cmd = material_cmd->add_subcommand("show", "list Drude terms, dc conductivity and eps");
    show_cmd->add_option("--element,--material", material.element, "element name")->capture_default_str();
    show_cmd->add_option("--temp-k", material.temp_k, "snap to the nearest tabulated temperature");
    show_cmd->add_option("--wavelength-um", material.wavelength_um, "also print eps and n here")
        ->check(CLI::PositiveNumber);
    show_cmd->add_option("--bounded-terms", material.bounded_terms, "omit | use-bound")
        ->check(CLI::IsMember({"omit", "use-bound"}))
        ->capture_default_str();
    show_cmd->add_option("-o,--output", material.output, "output file (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    const std::string command = canonical_command(args);
    try {
        if (*point_cmd) {
            if (!point.diameter_um && !point.radius_um) throw domain_error("point needs --diameter-um or --radius-um");
            return run_point(point, command);
        }
        if (*sweep_cmd) return run_sweep_cmd(sweep, command);
        if (*compare_cmd) return run_compare(compare, command);
        if (*polsim_cmd) return run_polsim(polsim, command);
        if (*show_cmd) return run_material_show(material, command);
    } catch (const domain_error& e) {
        std::cerr << "wirepol: error: " << e.what() << '\n';
        return exit_usage;
    } catch (const identifiability_error& e) {
        std::cerr << "wirepol: error: " << e.what() << '\n';
        return exit_usage;
    } catch (const range_error& e) {
        std::cerr << "wirepol: numerical failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const convergence_error& e) {
        std::cerr << "wirepol: numerical failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const degenerate_error& e) {
        std::cerr << "wirepol: numerical failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const parse_error& e) {
        std::cerr << "wirepol: parse error: " << e.what() << '\n';
        return exit_io;
    } catch (const io_error& e) {
        std::cerr << "wirepol: I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "wirepol: error: " << e.what() << '\n';
        return exit_numeric;
    }
    return exit_usage;
}

} // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
