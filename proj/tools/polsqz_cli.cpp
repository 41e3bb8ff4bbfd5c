// polsqz command-line front end: Stokes statistics, squeezing spectra,
// Poincare ellipsoids, measurement scenarios, channel capacities and the
// linearized-versus-Fock validation suite.  All outputs are deterministic
// for fixed flags; rerunning a scenario rewrites its files byte-identically.

#include "polsqz/apparatus.hpp"
#include "polsqz/capacity.hpp"
#include "polsqz/fock.hpp"
#include "polsqz/io.hpp"
#include "polsqz/opa.hpp"
#include "polsqz/polstate.hpp"
#include "polsqz/scenarios.hpp"
#include "polsqz/stokes.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

using polsqz::io::Json;

struct GlobalOptions {
    std::string out_dir;
    std::string format = "json";
    std::uint64_t seed = 20020803;
};

std::string output_path(const GlobalOptions& g, const std::string& filename) {
    if (g.out_dir.empty()) return {};
    std::filesystem::create_directories(g.out_dir);
    return (std::filesystem::path(g.out_dir) / filename).string();
}

void emit(const GlobalOptions& g, const std::string& filename, const std::string& contents) {
    const std::string path = output_path(g, filename);
    if (path.empty()) {
        std::cout << contents;
        if (!contents.empty() && contents.back() != '\n') std::cout << '\n';
    } else {
        polsqz::io::write_file(path, contents);
        std::cout << "wrote " << path << "\n";
    }
}

polsqz::PolarizationState load_state(const std::string& path) {
    return polsqz::io::state_from_json(Json::parse(polsqz::io::read_file(path)));
}

std::vector<double> parse_grid(const std::string& text, bool log_allowed) {
    std::vector<std::string> parts;
    std::string token;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(token);
            token.clear();
        } else {
            token += c;
        }
    }
    parts.push_back(token);
    if (parts.size() < 2 || parts.size() > 4)
        throw CLI::ValidationError("--grid", "expected lo:hi[:steps[:log]]");
    double lo = 0.0, hi = 0.0;
    long steps = 50;
    bool log_scale = false;
    try {
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
        if (parts.size() >= 3) steps = std::stol(parts[2]);
        if (parts.size() == 4) {
            if (parts[3] == "log" && log_allowed) log_scale = true;
            else throw CLI::ValidationError("--grid", "unknown grid modifier");
        }
    } catch (const CLI::Error&) {
        throw;
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "could not parse grid numbers");
    }
    if (!(hi > lo) || steps < 2)
        throw CLI::ValidationError("--grid", "need lo < hi and at least 2 points");
    if (log_scale && !(lo > 0.0))
        throw CLI::ValidationError("--grid", "log grids need lo > 0");
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        grid[static_cast<std::size_t>(i)] =
            log_scale ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    return grid;
}

Json stokes_summary(const polsqz::PolarizationState& s) {
    const auto st = polsqz::stokes_statistics(s);
    Json j;
    j["label"] = s.label;
    j["mean"] = {st.mean(0), st.mean(1), st.mean(2), st.mean(3)};
    j["variance"] = {st.variance(0), st.variance(1), st.variance(2), st.variance(3)};
    j["photon_flux"] = st.mean(0);
    j["linearization_suspect"] = s.linearization_suspect();
    return j;
}

std::string four_vector_csv(const char* quantity, const Eigen::Vector4d& v) {
    std::ostringstream out;
    out << quantity << ",s0,s1,s2,s3\nvalue";
    for (int k = 0; k < 4; ++k) out << ',' << polsqz::io::format_sig(v(k), 9);
    out << '\n';
    return out.str();
}

int run_means(const GlobalOptions& g, const std::string& state_path) {
    const auto s = load_state(state_path);
    if (g.format == "csv")
        emit(g, "means.csv", four_vector_csv("means", polsqz::stokes_means(s)));
    else
        emit(g, "means.json", stokes_summary(s).dump(2) + "\n");
    return 0;
}

int run_variances(const GlobalOptions& g, const std::string& state_path) {
    const auto s = load_state(state_path);
    if (g.format == "csv")
        emit(g, "variances.csv",
             four_vector_csv("variances", polsqz::stokes_variances_general(s)));
    else
        emit(g, "variances.json", stokes_summary(s).dump(2) + "\n");
    return 0;
}

int run_spectrum(const GlobalOptions& g, const std::string& preset_name,
                 const std::string& preset_file, double from, double to, double step) {
    polsqz::opa::OpaPreset preset =
        preset_file.empty()
            ? polsqz::opa::preset_by_name(preset_name)
            : polsqz::io::preset_from_json(Json::parse(polsqz::io::read_file(preset_file)),
                                           preset_file);
    std::vector<double> grid;
    for (double f = from; f <= to + 1e-9; f += step) grid.push_back(f);
    const auto rows = polsqz::opa::spectrum_sweep(preset.params, preset.laser, grid);
    emit(g, "spectrum_" + preset.name + ".csv", polsqz::io::opa_spectrum_csv(rows));
    return 0;
}

int run_ellipsoid(const GlobalOptions& g, const std::string& state_path, bool raw) {
    const auto s = load_state(state_path);
    const auto e = polsqz::poincare_ellipsoid(s, !raw);
    emit(g, "ellipsoid.json", polsqz::io::ellipsoid_to_json(e).dump(2) + "\n");
    return 0;
}

int run_scenario_cmd(const GlobalOptions& g, const std::string& name, double spot) {
    polsqz::scenarios::Scenario sc = polsqz::scenarios::scenario_by_name(name);
    if (spot > 0.0) sc.spot_mhz = spot;
    const auto result = polsqz::scenarios::run_scenario(sc);

    GlobalOptions target = g;
    if (target.out_dir.empty()) target.out_dir = ".";
    emit(target, sc.name + "_spectra.csv", polsqz::io::spectra_csv(result.spectra));
    Json ej = polsqz::io::ellipsoid_to_json(result.ellipsoid);
    emit(target, sc.name + "_ellipsoid.json", ej.dump(2) + "\n");

    std::cout << sc.name << ": " << sc.description << "\n";
    std::cout << "variances at " << sc.spot_mhz << " MHz (dB rel. shot):";
    for (int k = 0; k < 4; ++k)
        std::cout << " S" << k << "=" << polsqz::io::format_fixed(result.spot_variances_db(k), 2);
    std::cout << "\n";
    return 0;
}

int run_capacity(const GlobalOptions& g, const std::string& grid_text, bool crossover,
                 double experimental, const std::string& schemes_text) {
    namespace cap = polsqz::capacity;
    int status = 0;
    if (crossover) {
        const double n_star = cap::coherent_crossover();
        std::cout << "coherent crossover n_bar = " << polsqz::io::format_fixed(n_star, 4)
                  << "\n";
    }
    if (experimental >= 0.0) {
        const auto cmp = cap::experimental_capacity(experimental);
        std::cout << "experimental point: n_sq_per_dim = "
                  << polsqz::io::format_sig(cmp.n_sq_per_dim, 6)
                  << ", n_bar = " << polsqz::io::format_sig(cmp.n_bar, 6)
                  << ", C_sqz2 = " << polsqz::io::format_fixed(cmp.c_squeezed, 4)
                  << " bits, best coherent (" << cap::scheme_name(cmp.best_coherent)
                  << ") = " << polsqz::io::format_fixed(cmp.c_coherent, 4) << " bits, gain = "
                  << polsqz::io::format_fixed(100.0 * (cmp.gain_ratio - 1.0), 1) << "%\n";
    }
    if (!grid_text.empty()) {
        std::vector<cap::Scheme> schemes;
        if (schemes_text == "all") {
            schemes = cap::all_schemes();
        } else {
            std::string token;
            for (char c : schemes_text + ",") {
                if (c == ',') {
                    if (!token.empty()) schemes.push_back(cap::scheme_from_name(token));
                    token.clear();
                } else {
                    token += c;
                }
            }
        }
        const auto grid = parse_grid(grid_text, true);
        const auto rows = cap::capacity_curve(grid, schemes);
        emit(g, "capacity.csv", polsqz::io::capacity_csv(rows, schemes));
    }
    return status;
}

int run_validate(const GlobalOptions& g, double threshold, long mc_samples) {
    namespace fock = polsqz::fock;
    using fock::SqueezeQuadrature;

    const double pi_2 = std::numbers::pi / 2.0;
    const std::vector<std::pair<std::string, fock::OracleStateSpec>> suite = {
        {"single_amp_sqz_r0.5",
         {100.0, 0.0, 0.0, {0.5, SqueezeQuadrature::Amplitude}, {}}},
        {"two_amp_sqz_r0.3",
         {100.0 / std::numbers::sqrt2, 100.0 / std::numbers::sqrt2, pi_2,
          {0.3, SqueezeQuadrature::Amplitude}, {0.3, SqueezeQuadrature::Amplitude}}},
        {"two_phase_sqz_r0.3",
         {100.0 / std::numbers::sqrt2, 100.0 / std::numbers::sqrt2, pi_2,
          {0.3, SqueezeQuadrature::Phase}, {0.3, SqueezeQuadrature::Phase}}},
        {"coherent_mixed", {3.0, 2.0, 0.7, {}, {}}},
    };

    Json report;
    report["threshold"] = threshold;
    Json cases = Json::array();
    double worst = 0.0;
    for (const auto& [name, spec] : suite) {
        const auto rep = fock::oracle_compare(spec);
        Json entry = polsqz::io::oracle_report_to_json(rep);
        entry["name"] = name;
        cases.push_back(entry);
        worst = std::max(worst, rep.max_rel_dev);
    }
    report["cases"] = cases;
    report["max_rel_dev"] = worst;

    {  // commutator residuals at N = 10
        const auto s = fock::stokes_matrices(10);
        const auto comm = [&](int a, int b, int c) {
            fock::OperatorMatrix r{s[a].dim, s[a].entries * s[b].entries -
                                                 s[b].entries * s[a].entries -
                                                 std::complex<double>(0.0, 2.0) * s[c].entries};
            return fock::interior_restricted_max(r, 10, 8);
        };
        report["commutator_residual"] = std::max({comm(1, 2, 3), comm(2, 3, 1), comm(3, 1, 2)});
    }

    if (mc_samples > 0) {  // Monte-Carlo spot check of one linearized variance
        std::mt19937_64 rng(g.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const auto spec = suite[1].second;
        const auto state = fock::linearized_state(spec);
        const Eigen::Matrix4d chol = state.noise.matrix().llt().matrixL();
        const Eigen::Vector4d v1_coeffs(state.alpha_h, 0.0, -state.alpha_v, 0.0);
        double acc = 0.0;
        for (long i = 0; i < mc_samples; ++i) {
            Eigen::Vector4d z;
            for (int k = 0; k < 4; ++k) z(k) = normal(rng);
            const double sample = v1_coeffs.dot(chol * z);
            acc += sample * sample;
        }
        const double mc_var = acc / static_cast<double>(mc_samples);
        const double expected = polsqz::stokes_variances_general(state)(1);
        report["mc"] = {{"samples", mc_samples},
                        {"seed", g.seed},
                        {"statistic", "S1_var"},
                        {"mc_value", mc_var},
                        {"linearized", expected},
                        {"rel_dev", std::abs(mc_var - expected) / expected}};
    }

    const bool pass = worst <= threshold;
    report["pass"] = pass;
    emit(g, "validate.json", report.dump(2) + "\n");
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-variable polarization squeezing toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--out", global.out_dir, "directory for output files (default: stdout)");
    app.add_option("--format", global.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", global.seed, "seed for Monte-Carlo checks");

    std::string state_path;
    auto* means = app.add_subcommand("means", "Stokes operator means of a state file");
    means->fallthrough();
    means->add_option("--state", state_path, "state JSON file")->required();

    auto* variances =
        app.add_subcommand("variances", "Stokes operator variances of a state file");
    variances->fallthrough();
    variances->add_option("--state", state_path, "state JSON file")->required();

    std::string preset_name = "paper-amplitude", preset_file;
    double from = 3.0, to = 10.0, step = 0.1;
    auto* spectrum = app.add_subcommand("spectrum", "OPA quadrature variance spectrum");
    spectrum->fallthrough();
    spectrum->add_option("--preset", preset_name, "named preset");
    spectrum->add_option("--preset-file", preset_file, "preset JSON file");
    spectrum->add_option("--from", from, "start frequency, MHz");
    spectrum->add_option("--to", to, "stop frequency, MHz");
    spectrum->add_option("--step", step, "grid step, MHz")->check(CLI::PositiveNumber);

    bool raw = false;
    auto* ellipsoid = app.add_subcommand("ellipsoid", "Poincare noise ellipsoid of a state");
    ellipsoid->fallthrough();
    ellipsoid->add_option("--state", state_path, "state JSON file")->required();
    ellipsoid->add_flag("--raw", raw, "skip shot-noise normalization");

    std::string scenario_name;
    double spot = 0.0;
    auto* scenario = app.add_subcommand("scenario", "run a packaged measurement scenario");
    scenario->fallthrough();
    scenario->add_option("name", scenario_name, "scenario name")->required();
    scenario->add_option("--spot", spot, "ellipsoid spot frequency, MHz");

    std::string grid_text, schemes_text = "all";
    bool crossover = false;
    double experimental = -1.0;
    auto* capacity = app.add_subcommand("capacity", "channel capacity tables and summaries");
    capacity->fallthrough();
    capacity->add_option("--grid", grid_text, "budget grid lo:hi[:steps[:log]]");
    capacity->add_option("--schemes", schemes_text, "comma list of schemes, or 'all'");
    capacity->add_flag("--crossover", crossover, "print the coherent crossover budget");
    capacity->add_option("--experimental", experimental,
                         "compare squeezed/coherent capacity for measured photons per dimension");

    double threshold = 0.01;
    long mc_samples = 0;
    auto* validate = app.add_subcommand("validate", "linearized-versus-Fock oracle report");
    validate->fallthrough();
    validate->add_option("--threshold", threshold, "max tolerated relative deviation");
    validate->add_option("--mc-samples", mc_samples, "Gaussian Monte-Carlo cross-check samples");

    try {
        app.parse(argc, argv);
        if (means->parsed()) return run_means(global, state_path);
        if (variances->parsed()) return run_variances(global, state_path);
        if (spectrum->parsed())
            return run_spectrum(global, preset_name, preset_file, from, to, step);
        if (ellipsoid->parsed()) return run_ellipsoid(global, state_path, raw);
        if (scenario->parsed()) return run_scenario_cmd(global, scenario_name, spot);
        if (capacity->parsed()) {
            if (grid_text.empty() && !crossover && experimental < 0.0)
                throw CLI::CallForHelp();
            return run_capacity(global, grid_text, crossover, experimental, schemes_text);
        }
        if (validate->parsed()) return run_validate(global, threshold, mc_samples);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
