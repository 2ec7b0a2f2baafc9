#pragma once

// Reference phase distributions and resolution predictors the
// maximum-likelihood posterior is compared against: the zero-field-strength
// profile, the quarter-wave-shifted homodyne posterior and the semiclassical
// error-propagation width.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "phaseml/inference.hpp"
#include "phaseml/states.hpp"

namespace phaseml {

enum class ResolutionMethod { ml_dispersion, gaussian_fisher, semiclassical };

const char* resolution_method_name(ResolutionMethod method);

struct ResolutionCurve {
    std::vector<double> thetas;
    std::vector<std::optional<double>> widths;
    ResolutionMethod method = ResolutionMethod::ml_dispersion;
};

// p(x = 0, theta'(theta)) over the local-oscillator phase grid, normalized
// on [0, pi).
PhaseDistribution vogel_schleich_density(const StateModel& model,
                                         const Grid1D& lo_phase_grid);

// Posterior proportional to exp(-2 A (sin phi - sin theta')^2): the
// maximum-likelihood posterior with both true and inferred phases shifted
// by pi/2.
PhaseDistribution homodyne_posterior(double n_alpha_sq, double theta_prime,
                                     PhaseInterval interval, std::size_t grid_count);

// Normalizes (i) the zero-field profile of an effective single-shot state
// with amp^2 = n_alpha_sq evaluated at the shifted phase and (ii) the
// homodyne posterior at theta' = 0 on the same pi-periodic grid.
struct VsComparison {
    Grid1D grid;
    std::vector<double> vs_density;
    std::vector<double> homodyne_density;
    double max_abs_error = 0.0;
};
VsComparison vs_comparison(double n_alpha_sq, std::size_t grid_count);

// Maximum pointwise difference of the two normalized densities above.
double vs_agreement_check(double n_alpha_sq, std::size_t grid_count);

// exp(-r) / (2 amp |sin theta'| sqrt(n)); unavailable where sin theta'
// (or the width itself) degenerates.
std::optional<double> semiclassical_width(const StateModel& model, double theta_prime,
                                          std::size_t n);

// thetas must lie in [0, pi).
ResolutionCurve resolution_scan(const StateModel& model, std::size_t n,
                                std::span<const double> thetas, ResolutionMethod method);

// CSV columns theta_prime,width,method; width is empty when unavailable.
void save_resolution_csv(const ResolutionCurve& curve, const std::filesystem::path& path);

}  // namespace phaseml
