#pragma once

// Probe-state models and their rotated-quadrature measurement statistics.
// Units: X(theta) = (a e^{-i theta} + a^dag e^{i theta})/sqrt(2), so the
// vacuum quadrature variance is 1/2 and a squeezed probe has variance
// exp(-2r)/2 along the measured quadrature.

#include <string>

namespace phaseml {

struct StateModel {
    double amp = 0.0;        // coherent modulus |alpha|
    double sig_phase = 0.0;  // signal phase, normalized into [0, 2*pi)
    double squeeze = 0.0;    // squeezing parameter r; 0 = coherent

    StateModel() = default;
    StateModel(double amp, double sig_phase, double squeeze);
};

// Gaussian density of the measured quadrature at a fixed phase difference.
struct QuadratureDensity {
    double mean = 0.0;     // sqrt(2) |alpha| cos(theta')
    double inv_std = 0.0;  // exp(r) sqrt(2)
    double theta_prime = 0.0;

    double pdf(double x) const;
    double log_pdf(double x) const;
};

QuadratureDensity quadrature_density(const StateModel& model, double theta_prime);

// Phase difference theta' = lo_phase - sig_phase wrapped into [0, 2*pi).
double theta_prime(const StateModel& model, double lo_phase);

double quadrature_pdf(const StateModel& model, double theta_prime, double x);
double log_quadrature_pdf(const StateModel& model, double theta_prime, double x);

struct QuadratureMoments {
    double mean;
    double std;
};
QuadratureMoments quadrature_mean_and_std(const StateModel& model, double theta_prime);

// N = |alpha|^2 + sinh^2(r)
double mean_photon_number(const StateModel& model);

// Energy split amp = sqrt(N/2), r = ln(2 amp). The split is asymptotic: for
// small N the realized photon number drifts from the requested one, which
// the deviates flag reports (threshold 25% relative).
struct PartitionResult {
    StateModel model;
    double achieved_photon_number;
    bool deviates;
};
PartitionResult optimum_partition(double total_photon_number);

// Flat key=value record with keys amp, sig_phase, squeeze (radians).
std::string to_config(const StateModel& model);
StateModel state_from_config(const std::string& text);

}  // namespace phaseml
