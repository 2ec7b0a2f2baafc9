#include "phaseml/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"

#include "phaseml/circular.hpp"
#include "phaseml/sampling.hpp"

namespace phaseml::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw io_error("write failed: " + path);
}

std::size_t grid_or(const RunConfig& config, std::size_t fallback) {
    return config.grid_count > 0 ? static_cast<std::size_t>(config.grid_count) : fallback;
}

int cmd_simulate(const RunConfig& config) {
    const StateModel model(config.amp, config.sig_phase, config.squeeze);
    const SampleSet samples = draw_samples(model, config.theta_prime,
                                           static_cast<std::size_t>(config.n), config.seed);
    save_samples_csv(samples, model, config.output_path);
    std::string std_text;
    if (samples.n() >= 2) std_text = fmt(sample_moments(samples).std);
    KahanSum acc;
    for (double x : samples.values) acc.add(x);
    const double mean = acc.value() / static_cast<double>(samples.n());
    std::cout << "n=" << samples.n() << " mean=" << fmt(mean) << " std=" << std_text << "\n";
    return 0;
}

int cmd_estimate(const RunConfig& config) {
    const LoadedSamples loaded = load_samples_csv(config.input_path);
    // The measurement model is assumed known; flags override the values
    // recorded alongside the samples.
    const StateModel model(config.amp_given ? config.amp : loaded.model.amp, 0.0,
                           config.squeeze_given ? config.squeeze : loaded.model.squeeze);
    const std::size_t count = grid_or(config, default_grid_count(config.interval));
    const PhaseDistribution posterior =
        empirical_posterior(model, loaded.samples.values, config.interval, count);
    const double mass =
        integrate_values(posterior.density, posterior.grid);
    if (std::abs(mass - 1.0) > 1e-8)
        throw contract_error("posterior normalization check failed");
    const EstimateReport report = ml_estimate(posterior);
    save_distribution_csv(posterior, config.output_path);
    const std::string report_path = config.report_path.empty()
                                        ? config.output_path + ".report.json"
                                        : config.report_path;
    save_report_json(report, report_path);
    std::cout << report_to_json(report);
    return 0;
}

int cmd_entropy_scan(const RunConfig& config) {
    const StateModel model(config.amp, config.sig_phase, config.squeeze);
    const Grid1D grid = Grid1D::periodic(0.0, two_pi, grid_or(config, 360));
    std::ofstream out = open_output(config.output_path);
    out << "theta_prime,phi,entropy\n";
    for (double t : grid.nodes) {
        const double phi = config.has_phi ? config.phi : t;
        out << fmt(t) << ',' << fmt(phi) << ',' << fmt(relative_entropy(model, t, phi))
            << '\n';
    }
    finish_output(out, config.output_path);
    return 0;
}

int cmd_fisher_scan(const RunConfig& config) {
    const StateModel model(config.amp, config.sig_phase, config.squeeze);
    const Grid1D grid = Grid1D::periodic(0.0, two_pi, grid_or(config, 360));
    std::ofstream out = open_output(config.output_path);
    out << "theta_prime,fisher\n";
    for (double t : grid.nodes)
        out << fmt(t) << ',' << fmt(fisher_information(model, t)) << '\n';
    finish_output(out, config.output_path);
    return 0;
}

int cmd_figure1(const RunConfig& config) {
    // Inferred-phase distribution per true phase row; signal phase fixed to 0.
    const StateModel model(config.amp, 0.0, config.squeeze);
    const std::size_t phi_count = grid_or(config, kDefaultHalfGridCount);
    if (config.theta_count < 3) throw std::domain_error("figure1: theta grid too small");
    const Grid1D theta_grid =
        Grid1D::closed(0.0, kPi, static_cast<std::size_t>(config.theta_count));
    std::ofstream out = open_output(config.output_path);
    out << "theta,phi,density\n";
    for (double theta : theta_grid.nodes) {
        const PhaseDistribution row =
            asymptotic_posterior(model, theta, static_cast<std::size_t>(config.n),
                                 PhaseInterval::half, phi_count);
        const std::string theta_text = fmt(theta);
        for (std::size_t j = 0; j < row.grid.count; ++j)
            out << theta_text << ',' << fmt(row.grid.nodes[j]) << ','
                << fmt(row.density[j]) << '\n';
    }
    finish_output(out, config.output_path);
    return 0;
}

int cmd_resolution(const RunConfig& config) {
    const StateModel model(config.amp, config.sig_phase, config.squeeze);
    const Grid1D thetas = Grid1D::periodic(0.0, kPi, grid_or(config, 181));
    const ResolutionCurve curve = resolution_scan(
        model, static_cast<std::size_t>(config.n), thetas.nodes, config.method);
    save_resolution_csv(curve, config.output_path);
    return 0;
}

int cmd_decompose(const RunConfig& config) {
    const double n_alpha_sq =
        static_cast<double>(config.n) * config.amp * config.amp;
    const PosteriorFactors factors = decompose_posterior(n_alpha_sq, config.theta_prime);
    const Grid1D grid = Grid1D::periodic(0.0, two_pi, grid_or(config, 4096));
    const double err = verify_decomposition(n_alpha_sq, config.theta_prime, grid);
    std::cout << "kappa1=" << fmt(factors.f1.kappa) << " beta1=" << fmt(factors.f1.beta)
              << " kappa2=" << fmt(factors.f2.kappa) << " beta2=" << fmt(factors.f2.beta)
              << " max_abs_error=" << fmt(err) << "\n";
    if (config.output_path.empty()) return 0;

    // Tabulate the normalized posterior next to the normalized factor product.
    std::vector<double> log_direct(grid.count), log_product(grid.count);
    const double c0 = std::cos(config.theta_prime);
    for (std::size_t j = 0; j < grid.count; ++j) {
        const double phi = grid.nodes[j];
        const double d = std::cos(phi) - c0;
        log_direct[j] = -2.0 * n_alpha_sq * d * d;
        log_product[j] = factors.f1.kappa * std::cos(phi - factors.f1.beta) +
                         factors.f2.kappa * std::cos(2.0 * phi - factors.f2.beta);
    }
    const std::vector<double> w = quadrature_weights(grid);
    const double zd = log_sum_exp_weighted(log_direct, w);
    const double zp = log_sum_exp_weighted(log_product, w);
    std::ofstream out = open_output(config.output_path);
    out << "phi,posterior_density,factor_product_density\n";
    for (std::size_t j = 0; j < grid.count; ++j)
        out << fmt(grid.nodes[j]) << ',' << fmt(std::exp(log_direct[j] - zd)) << ','
            << fmt(std::exp(log_product[j] - zp)) << '\n';
    finish_output(out, config.output_path);
    return 0;
}

int cmd_compare_vs(const RunConfig& config) {
    const double n_alpha_sq =
        static_cast<double>(config.n) * config.amp * config.amp;
    const VsComparison cmp = vs_comparison(n_alpha_sq, grid_or(config, 4096));
    std::cout << "max_abs_error=" << fmt(cmp.max_abs_error) << "\n";
    if (config.output_path.empty()) return 0;
    std::ofstream out = open_output(config.output_path);
    out << "theta,vs_density,homodyne_density\n";
    for (std::size_t j = 0; j < cmp.grid.count; ++j)
        out << fmt(cmp.grid.nodes[j]) << ',' << fmt(cmp.vs_density[j]) << ','
            << fmt(cmp.homodyne_density[j]) << '\n';
    finish_output(out, config.output_path);
    return 0;
}

}  // namespace

int run_command(const RunConfig& config) {
    RunConfig c = config;
    if (c.degrees) {
        const double scale = kPi / 180.0;
        c.sig_phase *= scale;
        c.theta_prime *= scale;
        c.phi *= scale;
    }
    switch (c.command) {
        case Command::simulate: return cmd_simulate(c);
        case Command::estimate: return cmd_estimate(c);
        case Command::entropy_scan: return cmd_entropy_scan(c);
        case Command::fisher_scan: return cmd_fisher_scan(c);
        case Command::figure1: return cmd_figure1(c);
        case Command::resolution: return cmd_resolution(c);
        case Command::decompose: return cmd_decompose(c);
        case Command::compare_vs: return cmd_compare_vs(c);
    }
    return 2;
}

int run(int argc, const char* const* argv) {
    RunConfig config;

    CLI::App app{"Maximum-likelihood phase estimation from homodyne quadrature records"};
    app.require_subcommand(1);

    const std::map<std::string, PhaseInterval> interval_map{
        {"full", PhaseInterval::full}, {"half", PhaseInterval::half}};
    const std::map<std::string, ResolutionMethod> method_map{
        {"ml", ResolutionMethod::ml_dispersion},
        {"fisher", ResolutionMethod::gaussian_fisher},
        {"semiclassical", ResolutionMethod::semiclassical}};

    auto add_state = [&](CLI::App* cmd, bool with_sig_phase = true) {
        cmd->add_option("--amp", config.amp, "coherent amplitude |alpha|")
            ->check(CLI::NonNegativeNumber);
        if (with_sig_phase)
            cmd->add_option("--sig-phase", config.sig_phase, "signal phase (radians)");
        cmd->add_option("--squeeze", config.squeeze, "squeezing parameter r");
    };
    auto add_degrees = [&](CLI::App* cmd) {
        cmd->add_flag("--degrees", config.degrees, "interpret angle flags in degrees");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "draw a quadrature record");
    add_state(simulate);
    simulate->add_option("--theta-prime", config.theta_prime, "true phase difference")
        ->required();
    simulate->add_option("--n", config.n, "number of measurements")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", config.seed, "RNG seed");
    simulate->add_option("--out", config.output_path, "output CSV path")->required();
    add_degrees(simulate);

    CLI::App* estimate = app.add_subcommand("estimate", "posterior from a recorded sample set");
    estimate->add_option("--in", config.input_path, "input sample CSV")->required();
    estimate->add_option("--out", config.output_path, "posterior CSV path")->required();
    estimate->add_option("--report", config.report_path,
                         "report JSON path (default: <out>.report.json)");
    estimate->add_option("--amp", config.amp, "override recorded amplitude")
        ->check(CLI::NonNegativeNumber);
    estimate->add_option("--squeeze", config.squeeze, "override recorded squeezing");
    estimate->add_option("--grid", config.grid_count, "phase grid nodes")
        ->check(CLI::PositiveNumber);
    estimate->add_option("--interval", config.interval, "estimation interval")
        ->transform(CLI::CheckedTransformer(interval_map, CLI::ignore_case));

    CLI::App* entropy = app.add_subcommand("entropy-scan", "relative entropy over theta'");
    add_state(entropy);
    entropy->add_option("--phi", config.phi, "fixed inferred phase (default: diagonal)");
    entropy->add_option("--grid", config.grid_count, "theta' grid nodes")
        ->check(CLI::PositiveNumber);
    entropy->add_option("--out", config.output_path, "output CSV path")->required();
    add_degrees(entropy);

    CLI::App* fisher = app.add_subcommand("fisher-scan", "Fisher information over theta'");
    add_state(fisher);
    fisher->add_option("--grid", config.grid_count, "theta' grid nodes")
        ->check(CLI::PositiveNumber);
    fisher->add_option("--out", config.output_path, "output CSV path")->required();

    CLI::App* figure1 = app.add_subcommand(
        "figure1", "half-interval posterior surface over the true phase");
    add_state(figure1, /*with_sig_phase=*/false);
    figure1->add_option("--n", config.n, "number of measurements")
        ->check(CLI::PositiveNumber);
    figure1->add_option("--grid", config.grid_count, "inferred-phase grid nodes")
        ->check(CLI::PositiveNumber);
    figure1->add_option("--theta-grid", config.theta_count, "true-phase grid nodes")
        ->check(CLI::PositiveNumber);
    figure1->add_option("--out", config.output_path, "output CSV path")->required();

    CLI::App* resolution = app.add_subcommand("resolution", "width vs theta' curve");
    add_state(resolution);
    resolution->add_option("--n", config.n, "number of measurements")
        ->check(CLI::PositiveNumber);
    resolution->add_option("--method", config.method, "width estimator")
        ->transform(CLI::CheckedTransformer(method_map, CLI::ignore_case));
    resolution->add_option("--grid", config.grid_count, "theta' grid nodes")
        ->check(CLI::PositiveNumber);
    resolution->add_option("--out", config.output_path, "output CSV path")->required();

    CLI::App* decompose = app.add_subcommand(
        "decompose", "two-factor circular decomposition of the posterior");
    add_state(decompose, /*with_sig_phase=*/false);
    decompose->add_option("--theta-prime", config.theta_prime, "true phase difference")
        ->required();
    decompose->add_option("--n", config.n, "number of measurements")
        ->check(CLI::PositiveNumber);
    decompose->add_option("--grid", config.grid_count, "verification grid nodes")
        ->check(CLI::PositiveNumber);
    decompose->add_option("--out", config.output_path, "optional CSV path");
    add_degrees(decompose);

    CLI::App* compare = app.add_subcommand(
        "compare-vs", "zero-field profile vs shifted homodyne posterior");
    add_state(compare, /*with_sig_phase=*/false);
    compare->add_option("--n", config.n, "number of measurements")
        ->check(CLI::PositiveNumber);
    compare->add_option("--grid", config.grid_count, "comparison grid nodes")
        ->check(CLI::PositiveNumber);
    compare->add_option("--out", config.output_path, "optional CSV path");

    simulate->callback([&] { config.command = Command::simulate; });
    estimate->callback([&] {
        config.command = Command::estimate;
        config.amp_given = estimate->count("--amp") > 0;
        config.squeeze_given = estimate->count("--squeeze") > 0;
    });
    entropy->callback([&] {
        config.command = Command::entropy_scan;
        config.has_phi = entropy->count("--phi") > 0;
    });
    fisher->callback([&] { config.command = Command::fisher_scan; });
    figure1->callback([&] { config.command = Command::figure1; });
    resolution->callback([&] { config.command = Command::resolution; });
    decompose->callback([&] { config.command = Command::decompose; });
    compare->callback([&] { config.command = Command::compare_vs; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        return run_command(config);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const integration_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace phaseml::cli
