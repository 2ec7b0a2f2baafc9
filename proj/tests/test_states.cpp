#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "phaseml/numerics.hpp"
#include "phaseml/states.hpp"

using namespace phaseml;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);

Grid1D pdf_support(const StateModel& m, double theta) {
    const QuadratureMoments ms = quadrature_mean_and_std(m, theta);
    return Grid1D::closed(ms.mean - 10.0 * ms.std, ms.mean + 10.0 * ms.std, 2001);
}
}  // namespace

TEST_CASE("StateModel validation and normalization") {
    CHECK_THROWS_AS(StateModel(-1.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(StateModel(1.0, 0.0, std::nan("")), std::domain_error);
    const StateModel m(1.0, -kPi, 0.5);
    CHECK(m.sig_phase == doctest::Approx(kPi));
}

TEST_CASE("theta_prime wraps the difference") {
    CHECK(theta_prime(StateModel(1.0, 0.0, 0.0), 1.3) == doctest::Approx(1.3));
    CHECK(theta_prime(StateModel(1.0, kPi / 2.0, 0.0), 0.0) ==
          doctest::Approx(3.0 * kPi / 2.0));
    CHECK(theta_prime(StateModel(1.0, 0.2, 0.0), 0.2) == doctest::Approx(0.0));
    CHECK_THROWS_AS(theta_prime(StateModel(), std::numeric_limits<double>::infinity()),
                    std::domain_error);
}

TEST_CASE("quadrature_pdf spot values") {
    CHECK(quadrature_pdf(StateModel(0.0, 0.0, 0.0), 1.234, 0.0) ==
          doctest::Approx(kInvSqrtPi).epsilon(1e-14));
    CHECK(quadrature_pdf(StateModel(2.0, 0.0, 0.0), kPi / 2.0, 0.0) ==
          doctest::Approx(kInvSqrtPi).epsilon(1e-14));
    CHECK(quadrature_pdf(StateModel(1.0, 0.0, 0.0), 0.0, kSqrt2) ==
          doctest::Approx(kInvSqrtPi).epsilon(1e-14));
    // log form agrees with the direct form
    const StateModel m(1.3, 0.0, 0.4);
    CHECK(std::exp(log_quadrature_pdf(m, 0.7, 0.3)) ==
          doctest::Approx(quadrature_pdf(m, 0.7, 0.3)).epsilon(1e-13));
}

TEST_CASE("quadrature mean and std") {
    const QuadratureMoments a = quadrature_mean_and_std(StateModel(1.0, 0.0, 0.0), 0.0);
    CHECK(a.mean == doctest::Approx(kSqrt2).epsilon(1e-15));
    CHECK(a.std == doctest::Approx(1.0 / kSqrt2).epsilon(1e-15));
    const QuadratureMoments b =
        quadrature_mean_and_std(StateModel(1.0, 0.0, 0.0), kPi / 2.0);
    CHECK(b.mean == doctest::Approx(0.0).scale(1.0));
    const QuadratureMoments c =
        quadrature_mean_and_std(StateModel(1.0, 0.0, std::log(2.0)), 0.0);
    CHECK(c.mean == doctest::Approx(kSqrt2).epsilon(1e-15));
    CHECK(c.std == doctest::Approx(1.0 / (2.0 * kSqrt2)).epsilon(1e-15));
}

TEST_CASE("pdf normalization and moment consistency on random models") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> amp(0.0, 5.0);
    std::uniform_real_distribution<double> sq(-1.0, 2.0);
    std::uniform_real_distribution<double> ang(0.0, two_pi);
    for (int i = 0; i < 20; ++i) {
        const StateModel m(amp(rng), 0.0, sq(rng));
        const double theta = ang(rng);
        const Grid1D g = pdf_support(m, theta);
        const double mass = integrate([&](double x) { return quadrature_pdf(m, theta, x); }, g);
        CHECK(std::abs(mass - 1.0) <= 1e-10);

        const double mean =
            integrate([&](double x) { return x * quadrature_pdf(m, theta, x); }, g);
        const QuadratureMoments ms = quadrature_mean_and_std(m, theta);
        CHECK(std::abs(mean - ms.mean) <= 1e-8);
        const double var = integrate(
            [&](double x) { return (x - ms.mean) * (x - ms.mean) * quadrature_pdf(m, theta, x); },
            g);
        CHECK(std::abs(std::sqrt(var) - ms.std) <= 1e-8);
    }
}

TEST_CASE("pdf symmetry in the phase difference") {
    const StateModel m(1.7, 0.0, 0.3);
    for (double theta : {0.3, 1.1, 2.9}) {
        for (double x : {-1.0, 0.25, 2.0}) {
            CHECK(quadrature_pdf(m, theta, x) == quadrature_pdf(m, -theta, x));
            // 2*pi itself rounds, so this mirror holds only to an ulp
            CHECK(quadrature_pdf(m, theta, x) ==
                  doctest::Approx(quadrature_pdf(m, two_pi - theta, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("r = 0 squeezed form reduces to the coherent form") {
    const StateModel coherent(1.2, 0.0, 0.0);
    for (double x : {-2.0, 0.0, 0.7, 3.0}) {
        const double expect =
            kInvSqrtPi * std::exp(-std::pow(x - kSqrt2 * 1.2 * std::cos(0.9), 2));
        CHECK(quadrature_pdf(coherent, 0.9, x) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("mean photon number") {
    CHECK(mean_photon_number(StateModel(0.0, 0.0, 0.0)) == 0.0);
    CHECK(mean_photon_number(StateModel(3.0, 0.0, 0.0)) == doctest::Approx(9.0));
    CHECK(mean_photon_number(StateModel(1.0, 0.0, 1.0)) ==
          doctest::Approx(1.0 + std::pow(std::sinh(1.0), 2)).epsilon(1e-15));
}

TEST_CASE("optimum_partition") {
    const PartitionResult p2 = optimum_partition(2.0);
    CHECK(p2.model.amp == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p2.model.squeeze == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK_FALSE(p2.deviates);

    const PartitionResult p50 = optimum_partition(50.0);
    CHECK(p50.model.amp == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(p50.model.squeeze == doctest::Approx(std::log(10.0)).epsilon(1e-15));

    const PartitionResult p8 = optimum_partition(8.0);
    CHECK(p8.model.amp == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p8.model.squeeze == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    // sinh^2(ln 4) = ((4 - 1/4)/2)^2 = 3.515625
    CHECK(p8.achieved_photon_number == doctest::Approx(7.515625).epsilon(1e-14));
    CHECK_FALSE(p8.deviates);

    // very small N: the asymptotic split misses the target energy
    CHECK(optimum_partition(0.5).deviates);
    CHECK_THROWS_AS(optimum_partition(0.0), std::domain_error);
    CHECK_THROWS_AS(optimum_partition(-3.0), std::domain_error);
}

TEST_CASE("config round trip") {
    const StateModel m(1.25, 0.75, -0.5);
    const StateModel back = state_from_config(to_config(m));
    CHECK(back.amp == m.amp);
    CHECK(back.sig_phase == m.sig_phase);
    CHECK(back.squeeze == m.squeeze);
    CHECK_THROWS_AS(state_from_config("amp=1\nsig_phase=0\n"), std::invalid_argument);
    CHECK_THROWS_AS(state_from_config("nonsense"), std::invalid_argument);
}
