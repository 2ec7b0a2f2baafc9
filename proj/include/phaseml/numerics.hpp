#pragma once

// Self-contained numerical kernel: quadrature grids, log-domain utilities
// and the modified Bessel functions I0/I1. No external dependencies.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace phaseml {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Wraps an angle into [0, 2*pi). Throws std::domain_error on non-finite input.
double wrap_2pi(double angle);

// Compensated (Kahan) accumulator. Fixed-order summation with this keeps
// grid reductions reproducible and accurate to a few ulps.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Uniform 1-D grid. Two conventions:
//  - closed:   nodes include both endpoints; integrates with composite
//              Simpson (order h^4 for C^4 integrands).
//  - periodic: nodes cover [lo, hi) excluding hi; integrates with the
//              rectangle rule, which for smooth periodic integrands
//              converges faster than any power of h.
struct Grid1D {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    bool is_periodic = false;
    std::vector<double> nodes;

    static Grid1D closed(double lo, double hi, std::size_t count);
    static Grid1D periodic(double lo, double hi, std::size_t count);

    double step() const;
};

// Quadrature weights matching the grid convention (Simpson for closed
// grids, uniform for periodic ones). sum(weights) == hi - lo.
std::vector<double> quadrature_weights(const Grid1D& grid);

class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, double node)
        : std::runtime_error(what), node(node) {}
    double node;  // grid node where the integrand was non-finite
};

// Weighted sum of pre-evaluated integrand values over the grid's nodes.
// Throws integration_error if a value is non-finite.
double integrate_values(std::span<const double> values, const Grid1D& grid);

template <class F>
double integrate(F&& f, const Grid1D& grid) {
    std::vector<double> values(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) values[i] = f(grid.nodes[i]);
    return integrate_values(values, grid);
}

// ln(sum_i w_i * exp(v_i)) evaluated without overflow or underflow; v_i may
// be as negative as -1e6. Weights must be positive.
double log_sum_exp_weighted(std::span<const double> log_values,
                            std::span<const double> weights);

// Modified Bessel functions of the first kind. Power series for small
// argument, asymptotic expansion beyond; relative error <= 1e-12 on
// [0, 700]. Past the overflow point of exp(kappa) use log_bessel_i0.
double bessel_i0(double kappa);
double bessel_i1(double kappa);
double log_bessel_i0(double kappa);
// I1(kappa)/I0(kappa), stable for arbitrarily large kappa.
double bessel_i1_over_i0(double kappa);

}  // namespace phaseml
