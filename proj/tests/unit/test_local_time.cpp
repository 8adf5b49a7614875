#include "doctest.h"
#include "oracles/brute_force.hpp"
#include "siltlab/local_time.hpp"

using namespace siltlab;

TEST_CASE("local times of a short path") {
    const auto f = local_times(Trajectory::from_1d({0, 1, 0, 1, 2}));
    CHECK(f.count(Site{0}) == 2);
    CHECK(f.count(Site{1}) == 2);
    CHECK(f.count(Site{2}) == 1);
    CHECK(f.count(Site{5}) == 0);
    CHECK(f.range_size() == 3);
    CHECK(silt(f) == 9);
    CHECK(f.max_count() == 2);
    CHECK(local_times(Trajectory::from_1d({0})).range_size() == 1);
}

TEST_CASE("silt and range agree with the pair-count and set oracles") {
    RngStream rng(21, 0);
    for (int d = 1; d <= 5; ++d) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto t = simulate_walk(d, 300, rng);
            const auto f = local_times(t);
            CHECK(silt(f) == oracle::silt_pairs(t));
            CHECK(f.range_size() == oracle::range_set(t));
            const auto s = summarize(f);
            CHECK(check_jensen(s));
        }
    }
}

TEST_CASE("sample_walk consumes the stream like simulate_walk") {
    for (int d : {1, 2, 3, 6}) {
        RngStream a(9, 2), b(9, 2);
        const auto direct = LocalTimeField::sample_walk(d, 2000, a);
        const auto via_path = local_times(simulate_walk(d, 2000, b));
        REQUIRE(direct.range_size() == via_path.range_size());
        for (std::size_t i = 0; i < direct.range_size(); ++i) {
            CHECK(direct.entries()[i].key == via_path.entries()[i].key);
            CHECK(direct.entries()[i].count == via_path.entries()[i].count);
        }
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("level sets are strict and bands are half-open") {
    const auto f = local_times(Trajectory::from_1d({0, 1, 0, 1, 0, -1}));
    // l(0) = 3, l(1) = 2, l(-1) = 1
    CHECK(level_set_size(f, 2) == 1);
    CHECK(level_set_size(f, 1.5) == 2);
    CHECK(level_set_size(f, 0) == 3);
    CHECK(level_set_size(f, 3) == 0);
    CHECK(level_band(f, 1, 3).size() == 2);
    CHECK(level_band(f, 2, 4).size() == 2);
    const SiteSet d = level_set(f, 1);
    CHECK(d.contains(Site{0}));
    CHECK_FALSE(d.contains(Site{-1}));
    CHECK(restricted_silt(f, d) == 13);
    CHECK(restricted_mass(f, d) == 5);
}

TEST_CASE("restricted mass against a second walk") {
    RngStream rng(4, 0);
    const auto a = simulate_walk(2, 400, rng);
    const auto b = simulate_walk(2, 400, rng);
    const auto fa = local_times(a);
    const auto fb = local_times(b);
    const SiteSet d = level_set(fa, 2);
    std::uint64_t expect = 0;
    for (const auto& x : d.sites()) {
        expect += fb.count(x);
    }
    CHECK(restricted_mass(fb, d) == expect);
}

TEST_CASE("from_counts validates its input") {
    CHECK_NOTHROW(LocalTimeField::from_counts(1, 2, {{Site{0}, 2}, {Site{1}, 1}}));
    CHECK_THROWS_AS(LocalTimeField::from_counts(1, 2, {{Site{0}, 2}}), DomainError);
    CHECK_THROWS_AS(LocalTimeField::from_counts(1, 2, {{Site{0}, 3}, {Site{1}, 0}}), DomainError);
    CHECK_THROWS_AS(LocalTimeField::from_counts(1, 3, {{Site{0}, 2}, {Site{0}, 2}}), DomainError);
}

TEST_CASE("site packing round-trips and rejects out-of-range coordinates") {
    for (int d = 1; d <= 8; ++d) {
        const SitePacker p(d);
        Site s(d);
        for (int i = 0; i < d; ++i) {
            s[i] = (i % 2 ? -1 : 1) * (p.max_abs() - i);
        }
        CHECK(p.unpack(p.pack(s)) == s);
        if (p.width() < 64) {
            s[0] = p.max_abs() + 1;
            CHECK_THROWS_AS(p.pack(s), ResourceError);
        }
    }
}
