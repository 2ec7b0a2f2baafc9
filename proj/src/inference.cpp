#include "phaseml/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace phaseml {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kLogSqrtPi = 0.5 * std::log(kPi);

}  // namespace

double interval_length(PhaseInterval interval) {
    return interval == PhaseInterval::full ? two_pi : kPi;
}

Grid1D make_phase_grid(PhaseInterval interval, std::size_t count) {
    return interval == PhaseInterval::full ? Grid1D::periodic(0.0, two_pi, count)
                                           : Grid1D::closed(0.0, kPi, count);
}

std::size_t default_grid_count(PhaseInterval interval) {
    return interval == PhaseInterval::full ? kDefaultFullGridCount : kDefaultHalfGridCount;
}

PhaseDistribution make_phase_distribution(PhaseInterval interval, Grid1D grid,
                                          std::vector<double> raw_log_density) {
    if (raw_log_density.size() != grid.count)
        throw std::invalid_argument("make_phase_distribution: size mismatch");
    const std::vector<double> w = quadrature_weights(grid);
    const double log_z = log_sum_exp_weighted(raw_log_density, w);
    if (!std::isfinite(log_z))
        throw contract_error("make_phase_distribution: degenerate normalizer");
    PhaseDistribution dist;
    dist.interval = interval;
    dist.grid = std::move(grid);
    dist.log_density = std::move(raw_log_density);
    dist.density.resize(dist.log_density.size());
    for (std::size_t i = 0; i < dist.log_density.size(); ++i) {
        dist.log_density[i] -= log_z;
        dist.density[i] = std::exp(dist.log_density[i]);
    }
    return dist;
}

double log_likelihood(const StateModel& model, std::span<const double> values, double phi) {
    if (values.empty()) throw std::domain_error("log_likelihood: empty sample record");
    const double mean = kSqrt2 * model.amp * std::cos(phi);
    const double e2r = std::exp(2.0 * model.squeeze);
    KahanSum sq;
    for (double x : values) {
        const double d = x - mean;
        sq.add(d * d);
    }
    return static_cast<double>(values.size()) * (model.squeeze - kLogSqrtPi) - e2r * sq.value();
}

// ---- grid kernels ----------------------------------------------------------
//
// Per-node work is independent; each node owns one output slot and its inner
// sample sum runs in fixed order, so the parallel kernels reproduce the
// serial reference bit for bit.

namespace {

inline double log_likelihood_node(double node, double sqrt2_amp, double e2r,
                                  double per_sample_const,
                                  std::span<const double> values) {
    const double mean = sqrt2_amp * std::cos(node);
    KahanSum sq;
    for (double x : values) {
        const double d = x - mean;
        sq.add(d * d);
    }
    return static_cast<double>(values.size()) * per_sample_const - e2r * sq.value();
}

void log_likelihood_grid_serial(const StateModel& model, std::span<const double> values,
                                std::span<const double> nodes, std::vector<double>& out) {
    const double sqrt2_amp = kSqrt2 * model.amp;
    const double e2r = std::exp(2.0 * model.squeeze);
    const double c = model.squeeze - kLogSqrtPi;
    for (std::size_t j = 0; j < nodes.size(); ++j)
        out[j] = log_likelihood_node(nodes[j], sqrt2_amp, e2r, c, values);
}

void log_likelihood_grid_parallel(const StateModel& model, std::span<const double> values,
                                  std::span<const double> nodes, std::vector<double>& out) {
    const double sqrt2_amp = kSqrt2 * model.amp;
    const double e2r = std::exp(2.0 * model.squeeze);
    const double c = model.squeeze - kLogSqrtPi;
    const std::int64_t count = static_cast<std::int64_t>(nodes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < count; ++j)
        out[j] = log_likelihood_node(nodes[j], sqrt2_amp, e2r, c, values);
}

void neg_n_entropy_grid_serial(const StateModel& model, double theta_prime, double n,
                               std::span<const double> nodes, std::vector<double>& out) {
    for (std::size_t j = 0; j < nodes.size(); ++j)
        out[j] = -n * relative_entropy(model, theta_prime, nodes[j]);
}

void neg_n_entropy_grid_parallel(const StateModel& model, double theta_prime, double n,
                                 std::span<const double> nodes, std::vector<double>& out) {
    const std::int64_t count = static_cast<std::int64_t>(nodes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < count; ++j)
        out[j] = -n * relative_entropy(model, theta_prime, nodes[j]);
}

void check_grid_count(std::size_t grid_count) {
    if (grid_count < 64) throw std::domain_error("posterior grid_count must be >= 64");
}

}  // namespace

PhaseDistribution empirical_posterior(const StateModel& model,
                                      std::span<const double> values,
                                      PhaseInterval interval, std::size_t grid_count,
                                      Exec exec) {
    if (values.empty()) throw std::domain_error("empirical_posterior: empty sample record");
    check_grid_count(grid_count);
    Grid1D grid = make_phase_grid(interval, grid_count);
    std::vector<double> raw(grid.count);
    if (exec == Exec::serial)
        log_likelihood_grid_serial(model, values, grid.nodes, raw);
    else
        log_likelihood_grid_parallel(model, values, grid.nodes, raw);
    return make_phase_distribution(interval, std::move(grid), std::move(raw));
}

double relative_entropy(const StateModel& model, double theta_prime, double phi) {
    const double d = std::cos(phi) - std::cos(theta_prime);
    return kLogSqrtPi - model.squeeze + 0.5 +
           std::exp(2.0 * model.squeeze) * 2.0 * model.amp * model.amp * d * d;
}

double relative_entropy_quadrature(const StateModel& model, double theta_prime, double phi) {
    const QuadratureMoments at_theta = quadrature_mean_and_std(model, theta_prime);
    const QuadratureMoments at_phi = quadrature_mean_and_std(model, phi);
    const double sigma = at_theta.std;
    const double lo = std::min(at_theta.mean, at_phi.mean) - 12.0 * sigma;
    const double hi = std::max(at_theta.mean, at_phi.mean) + 12.0 * sigma;
    std::size_t count = static_cast<std::size_t>(std::ceil((hi - lo) / (sigma / 8.0))) + 1;
    count = std::max<std::size_t>(count, 801);
    if (count % 2 == 0) ++count;  // even interval count for pure Simpson
    const Grid1D grid = Grid1D::closed(lo, hi, count);
    const QuadratureDensity sampling = quadrature_density(model, theta_prime);
    const QuadratureDensity hypothesis = quadrature_density(model, phi);
    return -integrate(
        [&](double x) { return sampling.pdf(x) * hypothesis.log_pdf(x); }, grid);
}

PhaseDistribution asymptotic_posterior(const StateModel& model, double theta_prime,
                                       std::size_t n, PhaseInterval interval,
                                       std::size_t grid_count, Exec exec) {
    if (n < 1) throw std::domain_error("asymptotic_posterior: n must be >= 1");
    check_grid_count(grid_count);
    Grid1D grid = make_phase_grid(interval, grid_count);
    std::vector<double> raw(grid.count);
    const double n_real = static_cast<double>(n);
    if (exec == Exec::serial)
        neg_n_entropy_grid_serial(model, theta_prime, n_real, grid.nodes, raw);
    else
        neg_n_entropy_grid_parallel(model, theta_prime, n_real, grid.nodes, raw);
    return make_phase_distribution(interval, std::move(grid), std::move(raw));
}

double shannon_entropy(const StateModel& model, double theta_prime) {
    (void)theta_prime;
    return kLogSqrtPi + 0.5 - model.squeeze;
}

double fisher_information(const StateModel& model, double theta_prime) {
    const double s = std::sin(theta_prime);
    return 4.0 * model.amp * model.amp * std::exp(2.0 * model.squeeze) * s * s;
}

double fisher_information_quadrature(const StateModel& model, double theta_prime) {
    const double delta = 1e-5;
    const QuadratureDensity center = quadrature_density(model, theta_prime);
    const QuadratureDensity plus = quadrature_density(model, theta_prime + delta);
    const QuadratureDensity minus = quadrature_density(model, theta_prime - delta);
    const double sigma = std::exp(-model.squeeze) / kSqrt2;
    const double lo = std::min({center.mean, plus.mean, minus.mean}) - 12.0 * sigma;
    const double hi = std::max({center.mean, plus.mean, minus.mean}) + 12.0 * sigma;
    std::size_t count = static_cast<std::size_t>(std::ceil((hi - lo) / (sigma / 8.0))) + 1;
    count = std::max<std::size_t>(count, 801);
    if (count % 2 == 0) ++count;
    const Grid1D grid = Grid1D::closed(lo, hi, count);
    return integrate(
        [&](double x) {
            const double dp = (plus.pdf(x) - minus.pdf(x)) / (2.0 * delta);
            return dp * dp / center.pdf(x);
        },
        grid);
}

std::optional<double> gaussian_width(const StateModel& model, double theta_prime,
                                     std::size_t n) {
    if (n < 1) throw std::domain_error("gaussian_width: n must be >= 1");
    const double info = fisher_information(model, theta_prime);
    const double scale = 4.0 * model.amp * model.amp * std::exp(2.0 * model.squeeze);
    if (info < 1e-12 || info < 1e-9 * scale) return std::nullopt;
    return 1.0 / std::sqrt(static_cast<double>(n) * info);
}

double circular_dispersion(const PhaseDistribution& dist) {
    const std::vector<double> w = quadrature_weights(dist.grid);
    KahanSum mass, re, im;
    for (std::size_t i = 0; i < dist.grid.count; ++i) {
        const double wd = w[i] * dist.density[i];
        mass.add(wd);
        re.add(wd * std::cos(dist.grid.nodes[i]));
        im.add(wd * std::sin(dist.grid.nodes[i]));
    }
    if (std::abs(mass.value() - 1.0) > 1e-6)
        throw contract_error("circular_dispersion: distribution is not normalized");
    const double r2 = re.value() * re.value() + im.value() * im.value();
    return std::sqrt(std::max(0.0, 1.0 - r2));
}

namespace {

// Strict local maxima of the density; cyclic neighbors on the full interval.
std::vector<std::size_t> local_maxima(const PhaseDistribution& dist) {
    const std::vector<double>& d = dist.density;
    const std::size_t n = d.size();
    const bool cyclic = dist.grid.is_periodic;
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
        double left, right;
        if (cyclic) {
            left = d[(j + n - 1) % n];
            right = d[(j + 1) % n];
        } else {
            if (j == 0) { left = -1.0; right = d[1]; }
            else if (j == n - 1) { left = d[n - 2]; right = -1.0; }
            else { left = d[j - 1]; right = d[j + 1]; }
        }
        if (d[j] > left && d[j] > right) out.push_back(j);
    }
    return out;
}

std::size_t cyclic_distance(std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t d = a > b ? a - b : b - a;
    return std::min(d, n - d);
}

}  // namespace

EstimateReport ml_estimate(const PhaseDistribution& dist) {
    const std::vector<double>& d = dist.density;
    const std::size_t n = d.size();
    const double h = dist.grid.step();

    const std::vector<std::size_t> maxima = local_maxima(dist);
    double vmax = d[0];
    for (double v : d) vmax = std::max(vmax, v);

    // Candidate peak: the lowest-index local maximum within rounding of the
    // global value, so that exactly tied mirror twins resolve to [0, pi].
    std::size_t peak = 0;
    bool found = false;
    for (std::size_t j : maxima)
        if (d[j] >= vmax * (1.0 - 1e-12)) { peak = j; found = true; break; }
    if (!found) {
        // No strict maximum (e.g. a flat posterior): fall back to argmax.
        peak = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
    }

    EstimateReport report;
    report.interval = dist.interval;

    // Parabolic refinement on the log-density (skipped at closed-grid edges).
    double phi_hat = dist.grid.nodes[peak];
    double curvature = 0.0;
    const bool cyclic = dist.grid.is_periodic;
    if (cyclic || (peak > 0 && peak + 1 < n)) {
        const double lm = dist.log_density[(peak + n - 1) % n];
        const double l0 = dist.log_density[peak];
        const double lp = dist.log_density[(peak + 1) % n];
        const double denom = lm - 2.0 * l0 + lp;
        if (denom < 0.0) {
            phi_hat += 0.5 * h * (lm - lp) / denom;
            curvature = -denom / (h * h);
        }
    }
    if (cyclic) phi_hat = wrap_2pi(phi_hat);
    report.phi_hat = phi_hat;

    if (curvature > 0.0) {
        const double width = 1.0 / std::sqrt(curvature);
        if (width < 0.5 * interval_length(dist.interval)) report.gaussian_width = width;
    }

    // Mirror-twin detection only applies on the full interval.
    if (dist.interval == PhaseInterval::full) {
        const double threshold = std::exp(-0.5) * d[peak];
        for (std::size_t j : maxima) {
            if (cyclic_distance(j, peak, n) <= 2) continue;
            if (d[j] >= threshold) { report.twin_peak = true; break; }
        }
    }

    report.dispersion = circular_dispersion(dist);
    return report;
}

WidthScalingProbe width_scaling_probe(const StateModel& model, std::size_t n) {
    if (static_cast<double>(n) * model.amp * model.amp < 10.0)
        throw std::domain_error("width_scaling_probe: requires n * amp^2 >= 10");
    const std::size_t count = kDefaultHalfGridCount;
    const PhaseDistribution mid =
        asymptotic_posterior(model, kPi / 2.0, n, PhaseInterval::half, count);
    const PhaseDistribution edge =
        asymptotic_posterior(model, 0.0, n, PhaseInterval::half, count);
    return {circular_dispersion(mid), circular_dispersion(edge)};
}

double total_variation_distance(const PhaseDistribution& a, const PhaseDistribution& b) {
    if (a.grid.count != b.grid.count || a.grid.lo != b.grid.lo || a.grid.hi != b.grid.hi ||
        a.grid.is_periodic != b.grid.is_periodic)
        throw std::invalid_argument("total_variation_distance: grids differ");
    const std::vector<double> w = quadrature_weights(a.grid);
    KahanSum acc;
    for (std::size_t i = 0; i < a.grid.count; ++i)
        acc.add(w[i] * std::abs(a.density[i] - b.density[i]));
    return 0.5 * acc.value();
}

void save_distribution_csv(const PhaseDistribution& dist, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << "phi,density,log_density\n";
    char buf[128];
    for (std::size_t i = 0; i < dist.grid.count; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", dist.grid.nodes[i],
                      dist.density[i], dist.log_density[i]);
        out << buf;
    }
    if (!out) throw io_error("write failed: " + path.string());
}

std::string report_to_json(const EstimateReport& report) {
    nlohmann::ordered_json j;
    j["phi_hat"] = report.phi_hat;
    j["dispersion"] = report.dispersion;
    if (report.gaussian_width)
        j["gaussian_width"] = *report.gaussian_width;
    else
        j["gaussian_width"] = nullptr;
    j["twin_peak"] = report.twin_peak;
    j["interval"] = report.interval == PhaseInterval::full ? "full" : "half";
    return j.dump(2) + "\n";
}

void save_report_json(const EstimateReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << report_to_json(report);
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace phaseml
