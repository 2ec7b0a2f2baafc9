#pragma once

// Synthetic homodyne measurement records.
//
// Random source: a counter-based generator. Draw i under seed s hashes
// s + (i+1)*0x9E3779B97F4A7C15 through the splitmix64 finalizer, maps the
// top 53 bits to a uniform in (0,1), and applies the AS241 inverse normal
// CDF. Each draw depends only on (seed, index), so records are reproducible
// bit for bit and generation parallelizes without changing the output.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "phaseml/common.hpp"
#include "phaseml/states.hpp"

namespace phaseml {

struct SampleSet {
    std::vector<double> values;     // x_1 ... x_n
    double true_theta_prime = 0.0;  // ground truth, for evaluation harnesses only
    std::uint64_t seed = 0;

    std::size_t n() const { return values.size(); }
};

SampleSet draw_samples(const StateModel& model, double theta_prime, std::size_t n,
                       std::uint64_t seed, Exec exec = Exec::parallel);

struct SampleMoments {
    double mean;
    double std;  // unbiased
};
// Requires n >= 2.
SampleMoments sample_moments(const SampleSet& samples);

// CSV record: one `# amp=,squeeze=,theta_prime=,seed=,n=` header line, then
// one x value per line at 17 significant digits.
void save_samples_csv(const SampleSet& samples, const StateModel& model,
                      const std::filesystem::path& path);

struct LoadedSamples {
    SampleSet samples;
    StateModel model;
};
LoadedSamples load_samples_csv(const std::filesystem::path& path);

namespace detail {
// Exposed for tests: standard normal draw for (seed, index).
double normal_draw(std::uint64_t seed, std::uint64_t index);
// Inverse of the standard normal CDF (Wichura's AS241, PPND16).
double inverse_normal_cdf(double p);
}  // namespace detail

}  // namespace phaseml
