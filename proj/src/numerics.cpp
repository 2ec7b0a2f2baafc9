#include "phaseml/numerics.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace phaseml {

double wrap_2pi(double angle) {
    if (!std::isfinite(angle)) throw std::domain_error("wrap_2pi: non-finite angle");
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

static void check_grid_args(double lo, double hi, std::size_t count) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi <= lo)
        throw std::domain_error("Grid1D: requires finite lo < hi");
    if (count < 3) throw std::domain_error("Grid1D: count must be >= 3");
}

Grid1D Grid1D::closed(double lo, double hi, std::size_t count) {
    check_grid_args(lo, hi, count);
    Grid1D g;
    g.lo = lo;
    g.hi = hi;
    g.count = count;
    g.is_periodic = false;
    g.nodes.resize(count);
    const double h = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) g.nodes[i] = lo + static_cast<double>(i) * h;
    g.nodes.back() = hi;  // pin the endpoint against accumulated rounding
    return g;
}

Grid1D Grid1D::periodic(double lo, double hi, std::size_t count) {
    check_grid_args(lo, hi, count);
    Grid1D g;
    g.lo = lo;
    g.hi = hi;
    g.count = count;
    g.is_periodic = true;
    g.nodes.resize(count);
    const double h = (hi - lo) / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) g.nodes[i] = lo + static_cast<double>(i) * h;
    return g;
}

double Grid1D::step() const {
    const double n = is_periodic ? static_cast<double>(count) : static_cast<double>(count - 1);
    return (hi - lo) / n;
}

std::vector<double> quadrature_weights(const Grid1D& grid) {
    const double h = grid.step();
    std::vector<double> w(grid.count, h);
    if (grid.is_periodic) return w;

    // Composite Simpson. With an odd number of intervals, Simpson covers the
    // first count-4 nodes and the 3/8 rule takes the final three intervals.
    std::fill(w.begin(), w.end(), 0.0);
    const std::size_t intervals = grid.count - 1;
    std::size_t simpson_end = intervals;  // index of last node of the Simpson block
    if (intervals % 2 != 0) simpson_end = intervals - 3;
    if (simpson_end > 0) {
        w[0] += h / 3.0;
        w[simpson_end] += h / 3.0;
        for (std::size_t i = 1; i < simpson_end; ++i)
            w[i] += (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    }
    if (simpson_end != intervals) {
        const double c = 3.0 * h / 8.0;
        w[simpson_end] += c;
        w[simpson_end + 1] += 3.0 * c;
        w[simpson_end + 2] += 3.0 * c;
        w[simpson_end + 3] += c;
    }
    return w;
}

double integrate_values(std::span<const double> values, const Grid1D& grid) {
    if (values.size() != grid.count)
        throw std::invalid_argument("integrate_values: size mismatch with grid");
    const std::vector<double> w = quadrature_weights(grid);
    KahanSum acc;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw integration_error("integrate: non-finite integrand at node " +
                                        std::to_string(grid.nodes[i]),
                                    grid.nodes[i]);
        acc.add(w[i] * values[i]);
    }
    return acc.value();
}

double log_sum_exp_weighted(std::span<const double> log_values,
                            std::span<const double> weights) {
    if (log_values.empty()) throw std::domain_error("log_sum_exp_weighted: empty input");
    if (log_values.size() != weights.size())
        throw std::invalid_argument("log_sum_exp_weighted: length mismatch");
    double m = -std::numeric_limits<double>::infinity();
    for (double v : log_values) m = std::max(m, v);
    if (!std::isfinite(m)) return m;  // all -inf (or a stray +inf/NaN propagates)
    KahanSum acc;
    for (std::size_t i = 0; i < log_values.size(); ++i) {
        if (!(weights[i] > 0.0))
            throw std::domain_error("log_sum_exp_weighted: weights must be positive");
        acc.add(weights[i] * std::exp(log_values[i] - m));
    }
    return m + std::log(acc.value());
}

// ---- Bessel I0 / I1 -------------------------------------------------------

namespace {

constexpr double kSeriesCutoff = 25.0;

void check_kappa(double kappa, const char* fn) {
    if (!std::isfinite(kappa) || kappa < 0.0)
        throw std::domain_error(std::string(fn) + ": kappa must be finite and >= 0");
}

double i0_series(double kappa) {
    const double q = 0.25 * kappa * kappa;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 400; ++m) {
        term *= q / (static_cast<double>(m) * static_cast<double>(m));
        sum += term;
        if (term <= sum * 1e-17) break;
    }
    return sum;
}

double i1_series(double kappa) {
    const double q = 0.25 * kappa * kappa;
    double term = 0.5 * kappa, sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= q / (static_cast<double>(m) * static_cast<double>(m + 1));
        sum += term;
        if (term <= sum * 1e-17) break;
    }
    return sum;
}

// Asymptotic factor F in I_nu(z) ~ exp(z)/sqrt(2 pi z) * F(z), mu = 4 nu^2.
// Terms are summed until they stop decreasing; at z >= 25 the truncation
// error is far below 1e-12 relative.
double asymptotic_factor(double mu, double z) {
    double term = 1.0, sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (odd * odd - mu) / (8.0 * z * static_cast<double>(k));
        if (std::abs(term) >= prev) break;
        sum += term;
        prev = std::abs(term);
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

double bessel_i0(double kappa) {
    check_kappa(kappa, "bessel_i0");
    if (kappa <= kSeriesCutoff) return i0_series(kappa);
    return std::exp(kappa) / std::sqrt(two_pi * kappa) * asymptotic_factor(0.0, kappa);
}

double bessel_i1(double kappa) {
    check_kappa(kappa, "bessel_i1");
    if (kappa <= kSeriesCutoff) return i1_series(kappa);
    return std::exp(kappa) / std::sqrt(two_pi * kappa) * asymptotic_factor(4.0, kappa);
}

double log_bessel_i0(double kappa) {
    check_kappa(kappa, "log_bessel_i0");
    if (kappa <= kSeriesCutoff) return std::log(i0_series(kappa));
    return kappa - 0.5 * std::log(two_pi * kappa) + std::log(asymptotic_factor(0.0, kappa));
}

double bessel_i1_over_i0(double kappa) {
    check_kappa(kappa, "bessel_i1_over_i0");
    if (kappa <= kSeriesCutoff) return i1_series(kappa) / i0_series(kappa);
    return asymptotic_factor(4.0, kappa) / asymptotic_factor(0.0, kappa);
}

}  // namespace phaseml
