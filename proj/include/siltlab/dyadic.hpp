#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/local_time.hpp"

namespace siltlab {

// One strand of the midpoint decomposition. Generation l strands of a
// length-2^N path have 2^(N-l) steps and are re-rooted at the origin.
struct Strand {
    int generation = 0;
    std::uint64_t index = 1;  // 1-based within the generation
    Trajectory sites;
    Site anchor;  // parent's midpoint value used at the split (origin for the root)
};

Strand root_strand(const Trajectory& traj);

// Splits a strand of 2m steps at its midpoint x~ = S_m into
//   child1_k = S_m - S_{m-k},  child2_k = S_m - S_{m+k},  k = 0..m.
std::pair<Strand, Strand> split(const Strand& strand);

// Largest |l_parent(x) - (l_1(x~ - x) + l_2(x~ - x) - 1{x = x~})| over all x.
// Zero for children produced by split().
std::int64_t verify_midpoint_identity(const Strand& parent, const Strand& child1, const Strand& child2);
std::int64_t midpoint_residual(const LocalTimeField& parent, const LocalTimeField& child1,
                               const LocalTimeField& child2, const Site& anchor);

// Full decomposition: levels 0..N, level l holding 2^l strands.
class StrandTree {
  public:
    int depth() const { return depth_; }
    int level_count() const { return depth_ + 1; }
    const std::vector<Strand>& level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }
    // 0-based position within the level.
    const LocalTimeField& field(int l, std::size_t pos) const {
        return fields_.at(static_cast<std::size_t>(l)).at(pos);
    }

  private:
    friend StrandTree build_tree(const Trajectory& traj, const Budget& budget);
    int depth_ = 0;
    std::vector<std::vector<Strand>> levels_;
    std::vector<std::vector<LocalTimeField>> fields_;
};

// Requires a path of exactly 2^N steps, N >= 0.
StrandTree build_tree(const Trajectory& traj, const Budget& budget = {});

// Maximum midpoint residual over every internal node.
std::int64_t tree_identity_residual(const StrandTree& tree);

struct NodeInclusion {
    std::uint64_t parent_level_set = 0;  // |D_i^(l)(z)|
    std::uint64_t child1_level_set = 0;  // |D_{2i-1}^(l+1)((1-delta) z)|
    std::uint64_t child2_level_set = 0;  // |D_{2i}^(l+1)((1-delta) z)|
    std::uint64_t common_set = 0;        // |C_i^(l+1)(delta z)|
    std::uint64_t even_mass_on_odd = 0;  // l_{2i}(D_{2i-1}^(l+1)(delta z))
};

struct LevelInclusion {
    int level = 0;
    double z = 0;
    double delta = 0;
    std::uint64_t nodes = 0;
    std::uint64_t cardinality_violations = 0;  // |D| <= |D1| + |D2| + |C|
    std::uint64_t mass_violations = 0;         // l_even(D_odd(delta z)) >= delta z |C|
    std::vector<NodeInclusion> counts;

    bool pass() const { return cardinality_violations == 0 && mass_violations == 0; }
};

LevelInclusion verify_level_inclusion(const StrandTree& tree, int level, double z, double delta);

struct DecompReport {
    double threshold = 0;
    std::uint64_t z0 = 0;                        // pairs k < k' at sites with l(x) <= threshold
    std::vector<std::vector<std::uint64_t>> j;   // j[l-1][k-1] = J_k^(l), l = 1..N-1
    std::uint64_t j_total = 0;
    std::uint64_t band0_silt = 0;                // sum of l^2 over {1 <= l < threshold}
    std::int64_t identity_residual = 0;
    std::vector<LevelInclusion> inclusion_checks;

    bool legall_pass() const { return z0 <= j_total; }
    bool band0_pass(std::uint64_t horizon) const { return band0_silt <= horizon + 1 + 2 * z0; }
};

DecompReport legall_decomposition(const StrandTree& tree, double threshold);

// Le Gall bound plus the identity residual and inclusion checks for every
// level l < N - 1 and every (z, delta) pair.
DecompReport analyze_tree(const StrandTree& tree, double threshold, const std::vector<double>& zs,
                          const std::vector<double>& deltas);

}  // namespace siltlab
