#pragma once

// von Mises circular statistics and the two-factor product form of the
// coherent-state phase posterior.

#include "phaseml/numerics.hpp"

namespace phaseml {

struct VonMisesFactor {
    double kappa = 0.0;  // concentration, >= 0
    double beta = 0.0;   // location, in [0, 2*pi)
    int harmonic = 1;    // 1 for f(phi), 2 for f(2 phi)

    VonMisesFactor() = default;
    VonMisesFactor(double kappa, double beta, int harmonic);
};

// exp(kappa cos(harmonic x - beta)) / (2 pi I0(kappa)); evaluated through
// log_bessel_i0 so large concentrations do not overflow.
double von_mises_pdf(const VonMisesFactor& factor, double x);

// sqrt(1 - (I1/I0)^2)
double von_mises_dispersion(double kappa);

// Factors of the posterior exp(-2 A (cos phi - cos theta')^2):
// kappa_1 = |4 A cos theta'| at beta_1 in {0, pi} (sign folded into the
// location), kappa_2 = A at beta_2 = pi, harmonic 2.
struct PosteriorFactors {
    VonMisesFactor f1;
    VonMisesFactor f2;
};
PosteriorFactors decompose_posterior(double n_alpha_sq, double theta_prime);

// Normalizes both the direct posterior and the factor product on the grid
// (log domain) and returns the maximum pointwise difference of the
// normalized densities. Grid must span [0, 2*pi).
double verify_decomposition(double n_alpha_sq, double theta_prime, const Grid1D& grid);

}  // namespace phaseml
