#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/local_time.hpp"

namespace siltlab {

// Orbits of Z^d under coordinate sign flips and permutations, restricted to
// a symmetric region. Each orbit is represented by its sorted non-increasing
// absolute coordinates. The simple random walk commutes with this group, so
// any symmetric initial condition can be propagated on orbits exactly.
//
// Orbits are ordered by L1 norm, so {o : |rep(o)|_1 <= k} is a prefix.
class OrbitSpace {
  public:
    // {x : |x|_1 <= radius}
    static OrbitSpace l1_ball(int d, std::uint64_t radius, const Budget& budget = {});
    // {x : ||x|| <= r} for the ball's norm
    static OrbitSpace lattice_ball(int d, const BallSpec& ball, const Budget& budget = {});

    int dim() const { return dim_; }
    std::size_t size() const { return l1_.size(); }

    std::span<const std::int32_t> rep(std::size_t o) const {
        return {reps_.data() + o * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    Site rep_site(std::size_t o) const;
    std::uint64_t l1(std::size_t o) const { return l1_[o]; }
    std::uint64_t norm2(std::size_t o) const;
    // Number of lattice sites in the orbit.
    std::uint64_t multiplicity(std::size_t o) const { return mult_[o]; }
    // Total number of sites in the region.
    std::uint64_t cardinality() const;

    // Orbit reached by move `dir` (see apply_move) from the representative,
    // or -1 when the move leaves the region.
    std::int32_t neighbour(std::size_t o, int dir) const {
        return nbr_[o * static_cast<std::size_t>(2 * dim_) + static_cast<std::size_t>(dir)];
    }
    // Number of orbits with L1 norm <= k.
    std::size_t prefix(std::uint64_t k) const;

    std::optional<std::size_t> find(std::span<const std::int64_t> x) const;
    std::optional<std::size_t> find(const Site& x) const { return find(x.coords()); }

  private:
    template <class Feasible>
    static OrbitSpace build(int d, std::int64_t max_coord, Feasible feasible, const Budget& budget);

    int dim_ = 1;
    std::vector<std::int32_t> reps_;
    std::vector<std::uint64_t> l1_;
    std::vector<std::uint64_t> mult_;
    std::vector<std::int32_t> nbr_;
    std::vector<PackedSite> sorted_keys_;
    std::vector<std::uint32_t> key_order_;
};

// Apply the killed one-step operator (Kf)(x) = (1/2d) sum_e f(x + e) on
// orbit-valued functions; f is treated as zero outside the region and
// beyond `limit` orbits of the input.
void apply_walk_operator(const OrbitSpace& space, std::span<const double> in, std::size_t in_limit,
                         std::span<double> out);

}  // namespace siltlab
