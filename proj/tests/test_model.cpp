#include <cmath>
#include <numbers>
#include <vector>

#include "becphase/log_polar.hpp"
#include "becphase/model.hpp"
#include "becphase/oracle.hpp"
#include "becphase/phase_axis.hpp"
#include "doctest.h"

using namespace becphase;

namespace {

// sum_n P_n n (n-1) ... (n-order), summed until the tail is negligible
double brute_moment(const std::vector<double>& p, int order) {
    double total = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        double ff = 1.0;
        for (int j = 0; j <= order; ++j) ff *= static_cast<double>(n) - j;
        total += p[n] * ff;
    }
    return total;
}

double fock_oracle_visibility(int n1, int n2, double gamma) {
    const auto p1 = oracle::fock_distribution(n1);
    const auto p2 = oracle::fock_distribution(n2);
    const PhaseAxis axis(256);
    const std::vector<double> detected{0.0};
    const auto density = oracle::mixture_conditional_density(p1, p2, gamma, detected, axis.angles());
    return first_harmonic(axis, density).visibility;
}

}  // namespace

TEST_CASE("falling factorial moments") {
    CHECK(falling_factorial_moment(CondensateSpec::thermal(2.0), 1) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(falling_factorial_moment(CondensateSpec::poisson(3.0), 0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(falling_factorial_moment(CondensateSpec::fock(5), 5) == 0.0);
    CHECK(falling_factorial_moment(CondensateSpec::fock(5), 4) == doctest::Approx(120.0));
    CHECK(falling_factorial_moment(CondensateSpec::thermal(1.5), 3) == doctest::Approx(121.5).epsilon(1e-12));
    CHECK_THROWS_AS(falling_factorial_moment(CondensateSpec::poisson(1.0), -1), std::invalid_argument);

    const auto geometric = oracle::thermal_distribution(1.5, 200);
    CHECK(brute_moment(geometric, 3) == doctest::Approx(121.5).epsilon(1e-10));
}

TEST_CASE("poisson and thermal moments agree with direct summation") {
    for (double mean : {0.5, 1.0, 3.0, 7.5, 20.0}) {
        const auto pois = oracle::poisson_distribution(mean, static_cast<int>(mean + 40.0 * std::sqrt(mean) + 60.0));
        const auto geom = oracle::thermal_distribution(mean, 4000);
        for (int k = 0; k <= 6; ++k) {
            CAPTURE(mean);
            CAPTURE(k);
            CHECK(falling_factorial_moment(CondensateSpec::poisson(mean), k) ==
                  doctest::Approx(brute_moment(pois, k)).epsilon(1e-8));
            CHECK(falling_factorial_moment(CondensateSpec::thermal(mean), k) ==
                  doctest::Approx(brute_moment(geom, k)).epsilon(1e-8));
        }
    }
}

TEST_CASE("log moments stay finite past the double range") {
    const double lm = log_falling_factorial_moment(CondensateSpec::thermal(1000.0), 501);
    CHECK(std::isfinite(lm));
    CHECK(lm == doctest::Approx(std::lgamma(502.0) + 501.0 * std::log(1000.0)).epsilon(1e-13));
    CHECK(log_falling_factorial_moment(CondensateSpec::fock(3), 4) == -INFINITY);
    CHECK(log_falling_factorial_moment(CondensateSpec::fock(3), 0) == 0.0);
}

TEST_CASE("gaussian moments use the second-moment relation for low orders") {
    const auto g = CondensateSpec::gaussian(50.0, 20.0);
    CHECK(falling_factorial_moment(g, 0) == doctest::Approx(50.0));
    CHECK(falling_factorial_moment(g, 1) == doctest::Approx(20.0 + 2500.0 - 50.0));
    // discretized sum converges to the continuous third falling moment
    const double third = falling_factorial_moment(g, 2);
    const double raw3 = 50.0 * 50.0 * 50.0 + 3.0 * 50.0 * 20.0;
    const double raw2 = 2500.0 + 20.0;
    CHECK(third == doctest::Approx(raw3 - 3.0 * raw2 + 2.0 * 50.0).epsilon(1e-6));
}

TEST_CASE("spec validation") {
    CHECK_NOTHROW(CondensateSpec::fock(20).validate());
    CondensateSpec bad = CondensateSpec::fock(20);
    bad.mean_n = 3.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(CondensateSpec::gaussian(10.0, -1.0).validate(), ConfigError);

    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.grid_points = 32;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.histogram_bins = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.gamma_ratio = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    CHECK(parse_distribution("thermal") == Distribution::Thermal);
    CHECK(to_string(Distribution::Gaussian) == "gaussian");
    CHECK_THROWS_AS(parse_distribution("boltzmann"), ConfigError);
}

TEST_CASE("one-detection visibilities at equal net rates") {
    CHECK(visibility_one_detection(CondensateSpec::thermal(40.0), CondensateSpec::thermal(20.0), 2.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(visibility_one_detection(CondensateSpec::poisson(100.0), CondensateSpec::poisson(100.0), 1.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(visibility_one_detection(CondensateSpec::fock(20), CondensateSpec::fock(20), 1.0) ==
          doctest::Approx(1.0 / (2.0 * (1.0 - 1.0 / 40.0))).epsilon(1e-12));
    CHECK(visibility_one_detection(CondensateSpec::gaussian(1e6, 1e6), CondensateSpec::gaussian(1e6, 1e6), 1.0) ==
          doctest::Approx(0.5).epsilon(1e-5));
    CHECK(visibility_one_detection(CondensateSpec::poisson(100.0), CondensateSpec::poisson(0.0), 1.0) == 0.0);
    CHECK(visibility_one_detection(CondensateSpec::fock(0), CondensateSpec::fock(20), 1.0) == 0.0);
}

TEST_CASE("number-state visibility agrees with the two-mode oracle") {
    for (double gamma : {0.25, 1.0, 3.0}) {
        CAPTURE(gamma);
        CHECK(visibility_one_detection(CondensateSpec::fock(20), CondensateSpec::fock(20), gamma) ==
              doctest::Approx(fock_oracle_visibility(20, 20, gamma)).epsilon(1e-12));
    }
    CHECK(visibility_one_detection(CondensateSpec::fock(5), CondensateSpec::fock(9), 1.0) ==
          doctest::Approx(fock_oracle_visibility(5, 9, 1.0)).epsilon(1e-12));
}

TEST_CASE("exchange symmetry") {
    const double n1 = 30.0, n2 = 70.0, g = 0.6;
    for (auto make : {&CondensateSpec::poisson, &CondensateSpec::thermal}) {
        CHECK(visibility_one_detection(make(n1), make(n2), g) ==
              doctest::Approx(visibility_one_detection(make(n2), make(n1), 1.0 / g)).epsilon(1e-13));
    }
    CHECK(visibility_one_detection(CondensateSpec::fock(12), CondensateSpec::fock(31), g) ==
          doctest::Approx(visibility_one_detection(CondensateSpec::fock(31), CondensateSpec::fock(12), 1.0 / g))
              .epsilon(1e-13));
}

TEST_CASE("ordering at equal rates") {
    const double vt = visibility_one_detection(CondensateSpec::thermal(50.0), CondensateSpec::thermal(50.0), 1.0);
    const double vp = visibility_one_detection(CondensateSpec::poisson(50.0), CondensateSpec::poisson(50.0), 1.0);
    CHECK(vt < vp);
    for (std::uint64_t n = 1; n <= 200; n += 7) {
        const double vf = visibility_one_detection(CondensateSpec::fock(n), CondensateSpec::fock(n), 1.0);
        CAPTURE(n);
        CHECK(vp <= vf + 1e-15);
    }
}

TEST_CASE("curves peak at ratio one") {
    const auto ratios = log_spaced_ratios(0.01, 100.0, 101);
    REQUIRE(ratios.size() == 101);
    CHECK(ratios[50] == 1.0);
    CHECK(ratios.front() == doctest::Approx(0.01));
    CHECK(ratios.back() == doctest::Approx(100.0));

    const std::vector<std::pair<CondensateSpec, CondensateSpec>> kinds{
        {CondensateSpec::fock(20), CondensateSpec::fock(20)},
        {CondensateSpec::poisson(20.0), CondensateSpec::poisson(20.0)},
        {CondensateSpec::thermal(20.0), CondensateSpec::thermal(20.0)},
    };
    for (const auto& [a, b] : kinds) {
        const auto curve = visibility_curve(a, b, ratios);
        std::size_t best = 0;
        for (std::size_t i = 0; i < curve.size(); ++i)
            if (curve[i].visibility > curve[best].visibility) best = i;
        CHECK(best == 50);
        CHECK(curve.front().visibility < 0.25);
    }
    const auto thermal = visibility_curve(kinds[2].first, kinds[2].second, ratios);
    for (std::size_t i = 0; i < thermal.size(); ++i)
        CHECK(thermal[i].visibility == doctest::Approx(thermal[thermal.size() - 1 - i].visibility).epsilon(1e-12));

    const auto by_mean = visibility_curve(CondensateSpec::poisson(20.0), CondensateSpec::poisson(20.0), ratios,
                                          RatioAxis::ScaleSecondMean);
    CHECK(by_mean[50].visibility == doctest::Approx(0.5).epsilon(1e-12));
    const auto by_gamma = visibility_curve(CondensateSpec::poisson(20.0), CondensateSpec::poisson(20.0), ratios);
    for (std::size_t i = 0; i < by_mean.size(); ++i) {
        const double r = ratios[i];
        CHECK(by_mean[i].visibility == doctest::Approx(by_gamma[i].visibility).epsilon(1e-12));
        CHECK(by_gamma[i].visibility == doctest::Approx(2.0 * r / ((1.0 + r) * (1.0 + r))).epsilon(1e-12));
        CHECK(thermal[i].visibility == doctest::Approx(r / (1.0 + r + r * r)).epsilon(1e-12));
    }
}
