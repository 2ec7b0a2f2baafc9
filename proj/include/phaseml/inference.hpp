#pragma once

// Estimation core: likelihoods, relative entropy, grid posteriors, Fisher
// information, circular dispersion and point estimates.
//
// All probability work happens in the log domain; densities are only
// exponentiated after normalization. Grid kernels evaluate nodes in
// parallel but normalize with a fixed-order compensated reduction, so
// serial and parallel execution give bit-identical distributions.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phaseml/common.hpp"
#include "phaseml/numerics.hpp"
#include "phaseml/states.hpp"

namespace phaseml {

// full: phases on [0, 2*pi) (periodic grid). half: the mirror-ambiguity-free
// interval [0, pi), discretized as a closed grid including the right
// endpoint as a quadrature node.
enum class PhaseInterval { full, half };

double interval_length(PhaseInterval interval);
Grid1D make_phase_grid(PhaseInterval interval, std::size_t count);

inline constexpr std::size_t kDefaultFullGridCount = 4096;
inline constexpr std::size_t kDefaultHalfGridCount = 2048;
std::size_t default_grid_count(PhaseInterval interval);

struct PhaseDistribution {
    PhaseInterval interval = PhaseInterval::full;
    Grid1D grid;
    std::vector<double> log_density;  // normalized: integrates to 1
    std::vector<double> density;      // exp(log_density)
};

// Normalizes raw log-densities over the grid (log-sum-exp with the grid's
// quadrature weights).
PhaseDistribution make_phase_distribution(PhaseInterval interval, Grid1D grid,
                                          std::vector<double> raw_log_density);

// sum_i ln p(x_i, phi). Strictly positive Gaussian densities keep this finite.
double log_likelihood(const StateModel& model, std::span<const double> values, double phi);

// Posterior proportional to exp(log_likelihood) over the interval.
// grid_count >= 64.
PhaseDistribution empirical_posterior(const StateModel& model,
                                      std::span<const double> values,
                                      PhaseInterval interval, std::size_t grid_count,
                                      Exec exec = Exec::parallel);

// Cross entropy -int p(x, theta') ln p(x, phi) dx. The closed form is the
// default; the quadrature path evaluates the defining integral directly and
// exists as an independent check.
double relative_entropy(const StateModel& model, double theta_prime, double phi);
double relative_entropy_quadrature(const StateModel& model, double theta_prime, double phi);

// Posterior proportional to exp(-n * relative_entropy(theta', phi)).
PhaseDistribution asymptotic_posterior(const StateModel& model, double theta_prime,
                                       std::size_t n, PhaseInterval interval,
                                       std::size_t grid_count, Exec exec = Exec::parallel);

// Differential entropy of the quadrature density: ln(pi)/2 + 1/2 - r.
// Independent of theta_prime and amp; the argument is kept for symmetry
// with the other information functionals.
double shannon_entropy(const StateModel& model, double theta_prime);

// Analytic Fisher information 4 |alpha|^2 exp(2r) sin^2(theta'), plus a
// finite-difference quadrature path used as an independent check.
double fisher_information(const StateModel& model, double theta_prime);
double fisher_information_quadrature(const StateModel& model, double theta_prime);

// Gaussian-approximation width 1/sqrt(n I). Near theta' = 0 or pi the
// Fisher information vanishes and the width is reported as unavailable
// (I below 1e-9 relative to its peak 4 amp^2 exp(2r), or 1e-12 absolute).
std::optional<double> gaussian_width(const StateModel& model, double theta_prime,
                                     std::size_t n);

// sqrt(1 - |<exp(i phi)>|^2), averaged over the distribution's own interval.
// Throws contract_error if the distribution is not normalized to 1e-6.
double circular_dispersion(const PhaseDistribution& dist);

struct EstimateReport {
    double phi_hat = 0.0;
    double dispersion = 0.0;
    std::optional<double> gaussian_width;  // unset when no usable curvature
    bool twin_peak = false;
    PhaseInterval interval = PhaseInterval::full;
};

// Grid argmax with three-point parabolic refinement of the log-density.
// twin_peak flags a second local maximum within exp(-1/2) of the global one
// (the mirror image); on a twin-peak tie the reported peak is the one in
// [0, pi]. The width comes from the log-density curvature at the peak.
EstimateReport ml_estimate(const PhaseDistribution& dist);

// Circular dispersions of half-interval asymptotic posteriors at
// theta' = pi/2 (best resolution) and theta' = 0 (degenerate edge).
// Requires n * amp^2 >= 10.
struct WidthScalingProbe {
    double w_mid;
    double w_edge;
};
WidthScalingProbe width_scaling_probe(const StateModel& model, std::size_t n);

// 1/2 int |p - q| over the common grid; grids must match exactly.
double total_variation_distance(const PhaseDistribution& a, const PhaseDistribution& b);

// CSV columns phi,density,log_density.
void save_distribution_csv(const PhaseDistribution& dist, const std::filesystem::path& path);

// Flat JSON record with keys phi_hat, dispersion, gaussian_width (null when
// unavailable), twin_peak, interval.
std::string report_to_json(const EstimateReport& report);
void save_report_json(const EstimateReport& report, const std::filesystem::path& path);

}  // namespace phaseml
