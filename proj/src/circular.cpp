#include "phaseml/circular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phaseml {

VonMisesFactor::VonMisesFactor(double kappa_, double beta_, int harmonic_)
    : kappa(kappa_), beta(wrap_2pi(beta_)), harmonic(harmonic_) {
    if (!std::isfinite(kappa) || kappa < 0.0)
        throw std::domain_error("VonMisesFactor: kappa must be finite and >= 0");
    if (harmonic != 1 && harmonic != 2)
        throw std::domain_error("VonMisesFactor: harmonic must be 1 or 2");
}

double von_mises_pdf(const VonMisesFactor& factor, double x) {
    const double phase = static_cast<double>(factor.harmonic) * x - factor.beta;
    return std::exp(factor.kappa * std::cos(phase) - std::log(two_pi) -
                    log_bessel_i0(factor.kappa));
}

double von_mises_dispersion(double kappa) {
    const double ratio = bessel_i1_over_i0(kappa);
    return std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

PosteriorFactors decompose_posterior(double n_alpha_sq, double theta_prime) {
    if (!std::isfinite(n_alpha_sq) || n_alpha_sq <= 0.0)
        throw std::domain_error("decompose_posterior: n_alpha_sq must be > 0");
    const double c = std::cos(theta_prime);
    PosteriorFactors out;
    // kappa cos(x) == -kappa cos(x - pi): keep kappa >= 0, move the sign to beta.
    out.f1 = VonMisesFactor(std::abs(4.0 * n_alpha_sq * c),
                            c >= 0.0 ? 0.0 : std::numbers::pi, 1);
    out.f2 = VonMisesFactor(n_alpha_sq, -std::numbers::pi, 2);
    return out;
}

double verify_decomposition(double n_alpha_sq, double theta_prime, const Grid1D& grid) {
    if (!grid.is_periodic || grid.lo != 0.0 || std::abs(grid.hi - two_pi) > 1e-12)
        throw std::domain_error("verify_decomposition: grid must span [0, 2*pi)");
    const PosteriorFactors f = decompose_posterior(n_alpha_sq, theta_prime);
    const double c0 = std::cos(theta_prime);

    std::vector<double> log_direct(grid.count), log_product(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) {
        const double phi = grid.nodes[j];
        const double d = std::cos(phi) - c0;
        log_direct[j] = -2.0 * n_alpha_sq * d * d;
        log_product[j] = f.f1.kappa * std::cos(phi - f.f1.beta) +
                         f.f2.kappa * std::cos(2.0 * phi - f.f2.beta);
    }
    const std::vector<double> w = quadrature_weights(grid);
    const double za = log_sum_exp_weighted(log_direct, w);
    const double zb = log_sum_exp_weighted(log_product, w);
    double max_err = 0.0;
    for (std::size_t j = 0; j < grid.count; ++j) {
        const double da = std::exp(log_direct[j] - za);
        const double db = std::exp(log_product[j] - zb);
        max_err = std::max(max_err, std::abs(da - db));
    }
    return max_err;
}

}  // namespace phaseml
