#include "phaseml/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace phaseml {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* resolution_method_name(ResolutionMethod method) {
    switch (method) {
        case ResolutionMethod::ml_dispersion: return "ml";
        case ResolutionMethod::gaussian_fisher: return "fisher";
        case ResolutionMethod::semiclassical: return "semiclassical";
    }
    return "?";
}

PhaseDistribution vogel_schleich_density(const StateModel& model,
                                         const Grid1D& lo_phase_grid) {
    if (lo_phase_grid.lo != 0.0 || lo_phase_grid.hi > kPi + 1e-12)
        throw std::domain_error("vogel_schleich_density: grid must cover [0, pi)");
    Grid1D grid = lo_phase_grid;
    std::vector<double> raw(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j)
        raw[j] = log_quadrature_pdf(model, theta_prime(model, grid.nodes[j]), 0.0);
    return make_phase_distribution(PhaseInterval::half, std::move(grid), std::move(raw));
}

PhaseDistribution homodyne_posterior(double n_alpha_sq, double theta_prime,
                                     PhaseInterval interval, std::size_t grid_count) {
    if (!std::isfinite(n_alpha_sq) || n_alpha_sq <= 0.0)
        throw std::domain_error("homodyne_posterior: n_alpha_sq must be > 0");
    if (grid_count < 64) throw std::domain_error("homodyne_posterior: grid_count must be >= 64");
    Grid1D grid = make_phase_grid(interval, grid_count);
    const double s0 = std::sin(theta_prime);
    std::vector<double> raw(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) {
        const double d = std::sin(grid.nodes[j]) - s0;
        raw[j] = -2.0 * n_alpha_sq * d * d;
    }
    return make_phase_distribution(interval, std::move(grid), std::move(raw));
}

VsComparison vs_comparison(double n_alpha_sq, std::size_t grid_count) {
    if (!std::isfinite(n_alpha_sq) || n_alpha_sq <= 0.0)
        throw std::domain_error("vs_comparison: n_alpha_sq must be > 0");
    if (grid_count < 64) throw std::domain_error("vs_comparison: grid_count must be >= 64");
    // Both profiles are pi-periodic, so a periodic grid on [0, pi) keeps the
    // shared normalization spectrally accurate.
    VsComparison out;
    out.grid = Grid1D::periodic(0.0, kPi, grid_count);
    const StateModel effective(std::sqrt(n_alpha_sq), 0.0, 0.0);

    std::vector<double> log_vs(grid_count), log_hom(grid_count);
    for (std::size_t j = 0; j < grid_count; ++j) {
        const double theta = out.grid.nodes[j];
        log_vs[j] = log_quadrature_pdf(effective, theta + kPi / 2.0, 0.0);
        const double s = std::sin(theta);
        log_hom[j] = -2.0 * n_alpha_sq * s * s;
    }
    const std::vector<double> w = quadrature_weights(out.grid);
    const double zv = log_sum_exp_weighted(log_vs, w);
    const double zh = log_sum_exp_weighted(log_hom, w);
    out.vs_density.resize(grid_count);
    out.homodyne_density.resize(grid_count);
    for (std::size_t j = 0; j < grid_count; ++j) {
        out.vs_density[j] = std::exp(log_vs[j] - zv);
        out.homodyne_density[j] = std::exp(log_hom[j] - zh);
        out.max_abs_error = std::max(
            out.max_abs_error, std::abs(out.vs_density[j] - out.homodyne_density[j]));
    }
    return out;
}

double vs_agreement_check(double n_alpha_sq, std::size_t grid_count) {
    return vs_comparison(n_alpha_sq, grid_count).max_abs_error;
}

std::optional<double> semiclassical_width(const StateModel& model, double theta_prime,
                                          std::size_t n) {
    if (n < 1) throw std::domain_error("semiclassical_width: n must be >= 1");
    const double s = std::abs(std::sin(theta_prime));
    if (s < 1e-6) return std::nullopt;
    const double width = std::exp(-model.squeeze) /
                         (2.0 * model.amp * s * std::sqrt(static_cast<double>(n)));
    if (!std::isfinite(width)) return std::nullopt;  // amp == 0
    return width;
}

ResolutionCurve resolution_scan(const StateModel& model, std::size_t n,
                                std::span<const double> thetas, ResolutionMethod method) {
    ResolutionCurve curve;
    curve.method = method;
    curve.thetas.assign(thetas.begin(), thetas.end());
    for (std::size_t i = 0; i < curve.thetas.size(); ++i) {
        const double t = curve.thetas[i];
        if (!std::isfinite(t) || t < 0.0 || t >= kPi)
            throw std::domain_error("resolution_scan: thetas must lie in [0, pi)");
        if (i > 0 && t <= curve.thetas[i - 1])
            throw std::domain_error("resolution_scan: thetas must be strictly increasing");
    }
    curve.widths.resize(curve.thetas.size());
    for (std::size_t i = 0; i < curve.thetas.size(); ++i) {
        const double t = curve.thetas[i];
        switch (method) {
            case ResolutionMethod::ml_dispersion:
                curve.widths[i] = circular_dispersion(asymptotic_posterior(
                    model, t, n, PhaseInterval::half, kDefaultHalfGridCount));
                break;
            case ResolutionMethod::gaussian_fisher:
                curve.widths[i] = gaussian_width(model, t, n);
                break;
            case ResolutionMethod::semiclassical:
                curve.widths[i] = semiclassical_width(model, t, n);
                break;
        }
    }
    return curve;
}

void save_resolution_csv(const ResolutionCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << "theta_prime,width,method\n";
    char buf[96];
    const char* name = resolution_method_name(curve.method);
    for (std::size_t i = 0; i < curve.thetas.size(); ++i) {
        if (curve.widths[i])
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s\n", curve.thetas[i],
                          *curve.widths[i], name);
        else
            std::snprintf(buf, sizeof(buf), "%.17g,,%s\n", curve.thetas[i], name);
        out << buf;
    }
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace phaseml
