#include "phaseml/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "phaseml/numerics.hpp"

namespace phaseml {

namespace detail {

namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform in the open interval (0, 1): top 53 bits, offset by half an ulp.
inline double uniform_open(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t z = splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ull);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("inverse_normal_cdf: p must be in (0, 1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        z = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -z : z;
}

double normal_draw(std::uint64_t seed, std::uint64_t index) {
    return inverse_normal_cdf(uniform_open(seed, index));
}

}  // namespace detail

namespace {

void fill_samples_serial(double mean, double std, std::uint64_t seed,
                         std::vector<double>& out) {
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = mean + std * detail::normal_draw(seed, i);
}

void fill_samples_parallel(double mean, double std, std::uint64_t seed,
                           std::vector<double>& out) {
    const std::int64_t n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[i] = mean + std * detail::normal_draw(seed, static_cast<std::uint64_t>(i));
}

}  // namespace

SampleSet draw_samples(const StateModel& model, double theta_prime, std::size_t n,
                       std::uint64_t seed, Exec exec) {
    if (n < 1) throw std::domain_error("draw_samples: n must be >= 1");
    if (!std::isfinite(theta_prime))
        throw std::domain_error("draw_samples: non-finite theta_prime");
    const QuadratureMoments m = quadrature_mean_and_std(model, theta_prime);
    SampleSet s;
    s.values.resize(n);
    s.true_theta_prime = theta_prime;
    s.seed = seed;
    if (exec == Exec::serial)
        fill_samples_serial(m.mean, m.std, seed, s.values);
    else
        fill_samples_parallel(m.mean, m.std, seed, s.values);
    return s;
}

SampleMoments sample_moments(const SampleSet& samples) {
    if (samples.n() < 2)
        throw std::domain_error("sample_moments: need at least 2 values");
    KahanSum acc;
    for (double x : samples.values) acc.add(x);
    const double mean = acc.value() / static_cast<double>(samples.n());
    KahanSum sq;
    for (double x : samples.values) sq.add((x - mean) * (x - mean));
    const double var = sq.value() / static_cast<double>(samples.n() - 1);
    return {mean, std::sqrt(var)};
}

void save_samples_csv(const SampleSet& samples, const StateModel& model,
                      const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    char buf[160];
    std::snprintf(buf, sizeof(buf), "# amp=%.17g,squeeze=%.17g,theta_prime=%.17g,seed=%llu,n=%zu\n",
                  model.amp, model.squeeze, samples.true_theta_prime,
                  static_cast<unsigned long long>(samples.seed), samples.n());
    out << buf;
    for (double x : samples.values) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", x);
        out << buf;
    }
    if (!out) throw io_error("write failed: " + path.string());
}

LoadedSamples load_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw io_error(path.string() + ":1: expected '# key=value,...' header");

    double amp = 0.0, squeeze = 0.0, theta = 0.0;
    unsigned long long seed = 0;
    std::size_t n = 0;
    bool have[5] = {false, false, false, false, false};
    std::istringstream header(line.substr(2));
    std::string field;
    while (std::getline(header, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos)
            throw io_error(path.string() + ":1: malformed header field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string val = field.substr(eq + 1);
        try {
            if (key == "amp") { amp = std::stod(val); have[0] = true; }
            else if (key == "squeeze") { squeeze = std::stod(val); have[1] = true; }
            else if (key == "theta_prime") { theta = std::stod(val); have[2] = true; }
            else if (key == "seed") { seed = std::stoull(val); have[3] = true; }
            else if (key == "n") { n = std::stoul(val); have[4] = true; }
        } catch (const std::exception&) {
            throw io_error(path.string() + ":1: cannot parse header field '" + field + "'");
        }
    }
    for (bool h : have)
        if (!h) throw io_error(path.string() + ":1: incomplete header");

    LoadedSamples loaded;
    loaded.model = StateModel(amp, 0.0, squeeze);
    loaded.samples.true_theta_prime = theta;
    loaded.samples.seed = seed;
    loaded.samples.values.reserve(n);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw io_error(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + line + "'");
        }
        if (pos != line.size() || !std::isfinite(x))
            throw io_error(path.string() + ":" + std::to_string(lineno) + ": invalid value: '" + line + "'");
        loaded.samples.values.push_back(x);
    }
    if (loaded.samples.n() != n)
        throw io_error(path.string() + ": header says n=" + std::to_string(n) + " but found " +
                       std::to_string(loaded.samples.n()) + " values");
    return loaded;
}

}  // namespace phaseml
