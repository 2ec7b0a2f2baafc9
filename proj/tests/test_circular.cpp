#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "phaseml/circular.hpp"
#include "phaseml/inference.hpp"

using namespace phaseml;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("von_mises_pdf") {
    const VonMisesFactor uniform(0.0, 0.0, 1);
    for (double x : {0.0, 1.0, 4.0})
        CHECK(von_mises_pdf(uniform, x) == doctest::Approx(1.0 / two_pi).epsilon(1e-14));

    const VonMisesFactor f(1.0, 0.0, 1);
    CHECK(von_mises_pdf(f, 0.0) ==
          doctest::Approx(std::exp(1.0) / (two_pi * bessel_i0(1.0))).epsilon(1e-13));

    // maximum at x = beta for harmonic 1
    const VonMisesFactor g(2.5, 1.1, 1);
    const double at_beta = von_mises_pdf(g, 1.1);
    for (double dx : {-0.5, -0.1, 0.1, 0.5})
        CHECK(von_mises_pdf(g, 1.1 + dx) < at_beta);

    // harmonic-1 factor integrates to 1 on [0, 2*pi)
    const Grid1D grid = Grid1D::periodic(0.0, two_pi, 1024);
    CHECK(integrate([&](double x) { return von_mises_pdf(g, x); }, grid) ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(VonMisesFactor(-1.0, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(VonMisesFactor(1.0, 0.0, 3), std::domain_error);
}

TEST_CASE("von_mises_pdf survives huge concentrations") {
    const VonMisesFactor f(4e4, 0.0, 1);
    CHECK(std::isfinite(von_mises_pdf(f, 0.0)));
    CHECK(von_mises_pdf(f, kPi) >= 0.0);
}

TEST_CASE("von_mises_dispersion") {
    CHECK(von_mises_dispersion(0.0) == doctest::Approx(1.0));
    // from the Bessel series: sqrt(1 - (I1(1)/I0(1))^2)
    const double r = bessel_i1(1.0) / bessel_i0(1.0);
    const double expect = std::sqrt(1.0 - r * r);
    CHECK(von_mises_dispersion(1.0) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(expect == doctest::Approx(0.894840).epsilon(1e-5));
    CHECK(von_mises_dispersion(1e4) == doctest::Approx(0.01).epsilon(0.05));

    double prev = von_mises_dispersion(0.0);
    for (double k = 0.25; k <= 80.0; k += 0.25) {
        const double d = von_mises_dispersion(k);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("dispersion of a sampled harmonic-1 factor matches the Bessel form") {
    for (double kappa : {0.5, 2.0, 10.0}) {
        const VonMisesFactor f(kappa, 0.0, 1);
        Grid1D grid = Grid1D::periodic(0.0, two_pi, 4096);
        std::vector<double> raw(grid.count);
        for (std::size_t j = 0; j < grid.count; ++j)
            raw[j] = kappa * std::cos(grid.nodes[j] - f.beta);
        const PhaseDistribution dist =
            make_phase_distribution(PhaseInterval::full, std::move(grid), std::move(raw));
        CHECK(std::abs(circular_dispersion(dist) - von_mises_dispersion(kappa)) <= 1e-6);
    }
}

TEST_CASE("decompose_posterior") {
    const PosteriorFactors a = decompose_posterior(100.0, 0.0);
    CHECK(a.f1.kappa == doctest::Approx(400.0));
    CHECK(a.f1.beta == doctest::Approx(0.0));
    CHECK(a.f1.harmonic == 1);
    CHECK(a.f2.kappa == doctest::Approx(100.0));
    CHECK(a.f2.beta == doctest::Approx(kPi));
    CHECK(a.f2.harmonic == 2);

    const PosteriorFactors b = decompose_posterior(100.0, kPi / 2.0);
    CHECK(b.f1.kappa < 1e-11);  // cos(pi/2) at double precision

    // cos(2 pi / 3) = -1/2: sign folds into the location
    const PosteriorFactors c = decompose_posterior(50.0, 2.0 * kPi / 3.0);
    CHECK(c.f1.kappa == doctest::Approx(100.0).epsilon(1e-13));
    CHECK(c.f1.beta == doctest::Approx(kPi));

    CHECK_THROWS_AS(decompose_posterior(0.0, 1.0), std::domain_error);
}

TEST_CASE("verify_decomposition spot values") {
    CHECK(verify_decomposition(100.0, 0.7, Grid1D::periodic(0.0, two_pi, 4096)) < 1e-10);
    CHECK(verify_decomposition(1.0, kPi / 2.0, Grid1D::periodic(0.0, two_pi, 4096)) < 1e-12);
    CHECK(verify_decomposition(500.0, 0.1, Grid1D::periodic(0.0, two_pi, 8192)) < 1e-10);
    CHECK_THROWS_AS(verify_decomposition(10.0, 0.1, Grid1D::closed(0.0, kPi, 128)),
                    std::domain_error);
}

TEST_CASE("decomposition identity holds for random parameters") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> conc(1.0, 500.0);
    std::uniform_real_distribution<double> ang(0.0, two_pi);
    const Grid1D grid = Grid1D::periodic(0.0, two_pi, 4096);
    double worst = 0.0;
    for (int i = 0; i < 30; ++i)
        worst = std::max(worst, verify_decomposition(conc(rng), ang(rng), grid));
    CHECK(worst < 1e-9);
}
