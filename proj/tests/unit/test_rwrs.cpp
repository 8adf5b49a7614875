#include <cmath>

#include "doctest.h"
#include "siltlab/local_time.hpp"
#include "siltlab/rwrs.hpp"

using namespace siltlab;

TEST_CASE("scenery is a pure function of seed and site") {
    const Scenery a(42, {1.0, 1.0});
    const Scenery b(42, {1.0, 1.0});
    const Scenery c(43, {1.0, 1.0});
    const Site x{3, -7, 11};
    CHECK(a.value(x) == b.value(x));
    CHECK(a.value(x) == a.value(x));
    CHECK(a.value(x) != c.value(x));
    CHECK(a.value(Site{0, 0, 0}) != a.value(Site{0, 0, 1}));
}

TEST_CASE("scenery is symmetric and centred") {
    const Scenery s(7, {2.0, 1.0});
    const int draws = 1000000;
    int positive = 0;
    double sum = 0;
    double sum2 = 0;
    for (int i = 0; i < draws; ++i) {
        const double v = s.value(Site{i});
        positive += v > 0;
        sum += v;
        sum2 += v * v;
    }
    CHECK(std::abs(positive - draws / 2.0) < 5 * std::sqrt(draws / 4.0));
    const double var = sum2 / draws;
    CHECK(std::abs(sum / draws) < 3 * std::sqrt(var / draws));
    CHECK(var == doctest::Approx(SceneryParams{2.0, 1.0}.second_moment()).epsilon(0.01));
}

TEST_CASE("independent sceneries are uncorrelated") {
    const Scenery a(1, {1.0, 1.0});
    const Scenery b(2, {1.0, 1.0});
    const int draws = 200000;
    double sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < draws; ++i) {
        const double u = a.value(Site{i, 0});
        const double v = b.value(Site{i, 0});
        sab += u * v;
        saa += u * u;
        sbb += v * v;
    }
    const double corr = sab / std::sqrt(saa * sbb);
    CHECK(std::abs(corr) < 3 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("scenery tail has the requested constant") {
    // alpha = 1, c = 1: P(eta > t) = exp(-t) / 2
    const Scenery s(3, {1.0, 1.0});
    const double t = std::log(0.5 / 1e-4);
    const int draws = 10000000;
    int above = 0;
    for (int i = 0; i < draws; ++i) {
        above += s.value(Site{i, 1}) > t;
    }
    const double p = static_cast<double>(above) / draws;
    CHECK(-std::log(p) / t == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("time sum equals space sum") {
    const Scenery s(5, {1.5, 2.0});
    const auto t0 = Trajectory::from_1d({0});
    CHECK(rwrs_sum(t0, s) == s.value(Site{0}));
    const auto t1 = Trajectory::from_1d({0, 1, 0});
    CHECK(rwrs_sum(t1, s) == doctest::Approx(2 * s.value(Site{0}) + s.value(Site{1})));
    RngStream rng(1, 0);
    for (int i = 0; i < 20; ++i) {
        const auto t = simulate_walk(3, 1024, rng);
        CHECK(std::abs(rwrs_sum(t, s) - rwrs_space_sum(local_times(t), s)) < 1e-9);
    }
}

TEST_CASE("scenery parameters are validated") {
    CHECK_THROWS_AS(Scenery(1, {0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(Scenery(1, {1.0, 0.0}), DomainError);
}

TEST_CASE("zeta regions and exponents") {
    auto r = zeta_exponent(1, 0.6);
    CHECK(r.region == Region::I);
    CHECK(*r.zeta == doctest::Approx(0.2));
    r = zeta_exponent(1, 0.75);
    CHECK(r.region == Region::II);
    CHECK(*r.zeta == doctest::Approx(0.375));
    r = zeta_exponent(2, 0.8);
    CHECK(r.region == Region::III);
    CHECK(*r.zeta == doctest::Approx(0.44));
    CHECK(zeta_exponent(0.9, 0.6).region == Region::Invalid);
    CHECK(zeta_exponent(2, 0.5).region == Region::Invalid);
    CHECK(zeta_exponent(2, 1.0).region == Region::IV_out_of_scope);
    CHECK_FALSE(zeta_exponent(2, 1.0).zeta.has_value());
    // On the II/III frontier beta = (1 + alpha) / (4 - alpha) with alpha < 3/2.
    CHECK(zeta_exponent(1.2, (1 + 1.2) / (4 - 1.2)).region == Region::Boundary);
    CHECK(zeta_exponent(5, 0.9).region == Region::III);
    CHECK(zeta_exponent(std::nan(""), 0.9).region == Region::Invalid);
}

TEST_CASE("annealed tails are symmetric") {
    McConfig cfg;
    cfg.seed = 9;
    const auto t = mc_tail_rwrs(256, 0.6, 1.0, {1.0, 1.0}, 20000, cfg);
    const double se = std::sqrt(t.upper.std_error * t.upper.std_error + t.lower.std_error * t.lower.std_error);
    CHECK(std::abs(t.upper.p_hat - t.lower.p_hat) < 3 * se);
    CHECK(t.upper.p_hat > 0);
    CHECK(t.threshold == doctest::Approx(std::pow(256.0, 0.6)));
}

TEST_CASE("region III probe") {
    McConfig cfg;
    cfg.seed = 2;
    const auto p = region_iii_lower_bound_probe(1024, 0.8, 0.05, 0.05, 50, cfg, {2.0, 1.0});
    CHECK(p.u == doctest::Approx(0.84));
    CHECK(p.v == doctest::Approx(0.16));
    CHECK(p.zeta == doctest::Approx(1 - 2.0 / 3 * p.u));
    CHECK(static_cast<double>(p.ball_size) >= std::pow(1024.0, 0.84));
    CHECK(p.log_confinement < 0);
    CHECK(p.scenery_log_gaussian < 0);
    CHECK_THROWS_AS(region_iii_lower_bound_probe(1024, 0.6, 0.05, 0.05, 10, cfg, {2.0, 1.0}), DomainError);
}
