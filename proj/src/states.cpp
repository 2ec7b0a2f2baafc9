#include "phaseml/states.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "phaseml/numerics.hpp"

namespace phaseml {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kLogSqrtPi = 0.5 * std::log(std::numbers::pi);
}  // namespace

StateModel::StateModel(double amp_, double sig_phase_, double squeeze_)
    : amp(amp_), sig_phase(wrap_2pi(sig_phase_)), squeeze(squeeze_) {
    if (!std::isfinite(amp) || amp < 0.0)
        throw std::domain_error("StateModel: amp must be finite and >= 0");
    if (!std::isfinite(squeeze))
        throw std::domain_error("StateModel: squeeze must be finite");
}

double QuadratureDensity::log_pdf(double x) const {
    const double u = inv_std * (x - mean);
    // inv_std = exp(r) sqrt(2); density (e^r / sqrt(pi)) exp(-e^{2r} (x-mean)^2)
    return std::log(inv_std / kSqrt2) - kLogSqrtPi - 0.5 * u * u;
}

double QuadratureDensity::pdf(double x) const { return std::exp(log_pdf(x)); }

QuadratureDensity quadrature_density(const StateModel& model, double theta_prime) {
    QuadratureDensity d;
    d.mean = kSqrt2 * model.amp * std::cos(theta_prime);
    d.inv_std = std::exp(model.squeeze) * kSqrt2;
    d.theta_prime = theta_prime;
    return d;
}

double theta_prime(const StateModel& model, double lo_phase) {
    if (!std::isfinite(lo_phase)) throw std::domain_error("theta_prime: non-finite lo_phase");
    return wrap_2pi(lo_phase - model.sig_phase);
}

double quadrature_pdf(const StateModel& model, double theta_prime, double x) {
    return quadrature_density(model, theta_prime).pdf(x);
}

double log_quadrature_pdf(const StateModel& model, double theta_prime, double x) {
    return quadrature_density(model, theta_prime).log_pdf(x);
}

QuadratureMoments quadrature_mean_and_std(const StateModel& model, double theta_prime) {
    return {kSqrt2 * model.amp * std::cos(theta_prime),
            std::exp(-model.squeeze) / kSqrt2};
}

double mean_photon_number(const StateModel& model) {
    const double s = std::sinh(model.squeeze);
    return model.amp * model.amp + s * s;
}

PartitionResult optimum_partition(double total_photon_number) {
    if (!std::isfinite(total_photon_number) || total_photon_number <= 0.0)
        throw std::domain_error("optimum_partition: total photon number must be > 0");
    const double amp = std::sqrt(total_photon_number / 2.0);
    const double r = std::log(2.0 * amp);
    PartitionResult res;
    res.model = StateModel(amp, 0.0, r);
    res.achieved_photon_number = mean_photon_number(res.model);
    res.deviates = std::abs(res.achieved_photon_number - total_photon_number) >
                   0.25 * total_photon_number;
    return res;
}

static std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_config(const StateModel& model) {
    std::string out;
    out += "amp=" + format_double(model.amp) + "\n";
    out += "sig_phase=" + format_double(model.sig_phase) + "\n";
    out += "squeeze=" + format_double(model.squeeze) + "\n";
    return out;
}

StateModel state_from_config(const std::string& text) {
    std::map<std::string, double> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("state_from_config: expected key=value, got '" + line + "'");
        kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
    }
    for (const char* key : {"amp", "sig_phase", "squeeze"})
        if (!kv.count(key))
            throw std::invalid_argument(std::string("state_from_config: missing key ") + key);
    return StateModel(kv["amp"], kv["sig_phase"], kv["squeeze"]);
}

}  // namespace phaseml
