#include "doctest.h"
#include "siltlab/lattice.hpp"

using namespace siltlab;

TEST_CASE("site arithmetic and norms") {
    const Site a{3, -4};
    CHECK(a.l1_norm() == 7);
    CHECK(a.sup_norm() == 4);
    CHECK(a.norm2() == 25);
    CHECK((a - a).is_origin());
    CHECK(a + (-a) == Site::origin(2));
    CHECK_THROWS_AS(Site(9), DomainError);
    CHECK_THROWS_AS(Site(0), DomainError);
}

TEST_CASE("balls") {
    const BallSpec e{2.0, Norm::euclidean};
    CHECK(e.contains(Site{2, 0}));
    CHECK_FALSE(e.contains(Site{2, 1}));
    CHECK(e.extent() == 2);
    const BallSpec s{1.0, Norm::sup};
    CHECK(s.contains(Site{1, -1, 1}));
    CHECK_FALSE(s.contains(Site{2, 0, 0}));
    CHECK(parse_norm("sup") == Norm::sup);
    CHECK_THROWS_AS(parse_norm("taxicab"), DomainError);
}

TEST_CASE("trajectory validation") {
    CHECK_NOTHROW(Trajectory::from_1d({0, 1, 0, -1}));
    CHECK_THROWS_AS(Trajectory::from_1d({1, 2}), DomainError);
    CHECK_THROWS_AS(Trajectory::from_1d({0, 2}), DomainError);
    CHECK_THROWS_AS(Trajectory(2, {0, 0, 1, 1}), DomainError);
    CHECK(is_nearest_neighbour_path(2, std::vector<std::int64_t>{0, 0, 0, 1, -1, 1}));
}

TEST_CASE("simulated walks are nearest-neighbour paths") {
    RngStream rng(3, 0);
    for (int d = 1; d <= 4; ++d) {
        const auto t = simulate_walk(d, 500, rng);
        CHECK(t.steps() == 500);
        CHECK(is_nearest_neighbour_path(d, t.flat()));
    }
    CHECK(simulate_walk(3, 0, rng).size() == 1);
}

TEST_CASE("simulate_walk respects the memory budget") {
    RngStream rng(3, 0);
    Budget tiny;
    tiny.max_bytes = 1024;
    CHECK_THROWS_AS(simulate_walk(3, 1000, rng, tiny), ResourceError);
}

TEST_CASE("exit time") {
    const auto t = Trajectory::from_1d({0, 1, 2, 1, 2, 3});
    CHECK(exit_time(t, BallSpec{1.0, Norm::sup}) == 2u);
    CHECK(exit_time(t, BallSpec{2.5, Norm::euclidean}) == 5u);
    CHECK_FALSE(exit_time(t, BallSpec{3.0, Norm::sup}).has_value());
}
