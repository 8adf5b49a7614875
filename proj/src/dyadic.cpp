#include "siltlab/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace siltlab {

Strand root_strand(const Trajectory& traj) {
    return Strand{0, 1, traj, Site::origin(traj.dim())};
}

std::pair<Strand, Strand> split(const Strand& strand) {
    const Trajectory& s = strand.sites;
    const std::uint64_t steps = s.steps();
    if (steps < 2 || steps % 2 != 0) {
        throw DomainError("cannot split a strand of " + std::to_string(steps) + " steps");
    }
    const std::uint64_t m = steps / 2;
    const auto d = static_cast<std::size_t>(s.dim());
    const auto mid = s.at(m);
    std::vector<std::int64_t> c1((m + 1) * d);
    std::vector<std::int64_t> c2((m + 1) * d);
    for (std::uint64_t k = 0; k <= m; ++k) {
        const auto before = s.at(m - k);
        const auto after = s.at(m + k);
        for (std::size_t i = 0; i < d; ++i) {
            c1[k * d + i] = mid[i] - before[i];
            c2[k * d + i] = mid[i] - after[i];
        }
    }
    const Site anchor(s.dim(), mid);
    const int g = strand.generation + 1;
    return {Strand{g, 2 * strand.index - 1, Trajectory(s.dim(), std::move(c1)), anchor},
            Strand{g, 2 * strand.index, Trajectory(s.dim(), std::move(c2)), anchor}};
}

std::int64_t midpoint_residual(const LocalTimeField& parent, const LocalTimeField& child1,
                               const LocalTimeField& child2, const Site& anchor) {
    const SitePacker& packer = parent.packer();
    auto residual_at = [&](const Site& x) {
        const Site rel = anchor - x;
        const auto lhs = static_cast<std::int64_t>(parent.count(x));
        const auto rhs = static_cast<std::int64_t>(child1.count(rel) + child2.count(rel)) -
                         (x == anchor ? 1 : 0);
        return static_cast<std::int64_t>(std::llabs(lhs - rhs));
    };
    std::int64_t worst = 0;
    for (const auto& e : parent.entries()) {
        worst = std::max(worst, residual_at(packer.unpack(e.key)));
    }
    for (const LocalTimeField* child : {&child1, &child2}) {
        for (const auto& e : child->entries()) {
            worst = std::max(worst, residual_at(anchor - child->packer().unpack(e.key)));
        }
    }
    return worst;
}

std::int64_t verify_midpoint_identity(const Strand& parent, const Strand& child1, const Strand& child2) {
    const std::uint64_t steps = parent.sites.steps();
    if (steps % 2 != 0 || child1.sites.steps() * 2 != steps || child2.sites.steps() * 2 != steps ||
        child1.sites.dim() != parent.sites.dim() || child2.sites.dim() != parent.sites.dim()) {
        throw DomainError("children do not match the parent strand");
    }
    const Site anchor = parent.sites.site(steps / 2);
    return midpoint_residual(local_times(parent.sites), local_times(child1.sites),
                             local_times(child2.sites), anchor);
}

StrandTree build_tree(const Trajectory& traj, const Budget& budget) {
    const std::uint64_t n = traj.steps();
    if (n == 0 || !std::has_single_bit(n)) {
        throw DomainError("strand tree needs 2^N steps, got " + std::to_string(n));
    }
    const int depth = std::countr_zero(n);
    const double per_level = static_cast<double>(2 * n + 1);
    budget.require<std::int64_t>(per_level * (depth + 1) * (traj.dim() + 3), "strand tree");

    StrandTree tree;
    tree.depth_ = depth;
    tree.levels_.resize(static_cast<std::size_t>(depth) + 1);
    tree.fields_.resize(static_cast<std::size_t>(depth) + 1);
    tree.levels_[0].push_back(root_strand(traj));
    for (int l = 0; l <= depth; ++l) {
        auto& level = tree.levels_[static_cast<std::size_t>(l)];
        auto& fields = tree.fields_[static_cast<std::size_t>(l)];
        fields.reserve(level.size());
        for (const auto& strand : level) {
            fields.push_back(local_times(strand.sites));
        }
        if (l == depth) {
            break;
        }
        auto& next = tree.levels_[static_cast<std::size_t>(l) + 1];
        next.reserve(level.size() * 2);
        for (const auto& strand : level) {
            auto [a, b] = split(strand);
            next.push_back(std::move(a));
            next.push_back(std::move(b));
        }
    }
    return tree;
}

std::int64_t tree_identity_residual(const StrandTree& tree) {
    std::int64_t worst = 0;
    for (int l = 0; l < tree.depth(); ++l) {
        const auto& level = tree.level(l);
        for (std::size_t p = 0; p < level.size(); ++p) {
            const Site anchor = tree.level(l + 1)[2 * p].anchor;
            worst = std::max(worst, midpoint_residual(tree.field(l, p), tree.field(l + 1, 2 * p),
                                                      tree.field(l + 1, 2 * p + 1), anchor));
        }
    }
    return worst;
}

namespace {

// Calls fn(count_a, count_b) for every key present in both fields.
template <class Fn>
void join_fields(const LocalTimeField& a, const LocalTimeField& b, Fn fn) {
    auto ea = a.entries();
    auto eb = b.entries();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].key < eb[j].key) {
            ++i;
        } else if (eb[j].key < ea[i].key) {
            ++j;
        } else {
            fn(ea[i].count, eb[j].count);
            ++i;
            ++j;
        }
    }
}

}  // namespace

LevelInclusion verify_level_inclusion(const StrandTree& tree, int level, double z, double delta) {
    if (!(delta > 0 && delta < 1)) {
        throw DomainError("delta must lie in (0, 1)");
    }
    if (!(z > 0)) {
        throw DomainError("z must be positive");
    }
    if (level < 0 || level >= tree.depth()) {
        throw DomainError("inclusion level must be in [0, N)");
    }
    LevelInclusion out;
    out.level = level;
    out.z = z;
    out.delta = delta;
    const std::size_t parents = tree.level(level).size();
    out.nodes = parents;
    out.counts.reserve(parents);
    const double z_max = (1 - delta) * z;
    const double z_min = delta * z;
    for (std::size_t p = 0; p < parents; ++p) {
        const auto& c1 = tree.field(level + 1, 2 * p);
        const auto& c2 = tree.field(level + 1, 2 * p + 1);
        NodeInclusion node;
        node.parent_level_set = level_set_size(tree.field(level, p), z);
        node.child1_level_set = level_set_size(c1, z_max);
        node.child2_level_set = level_set_size(c2, z_max);
        join_fields(c1, c2, [&](std::uint64_t a, std::uint64_t b) {
            const double lo = static_cast<double>(std::min(a, b));
            node.common_set += lo > z_min;
            if (static_cast<double>(a) > z_min) {
                node.even_mass_on_odd += b;
            }
        });
        if (node.parent_level_set > node.child1_level_set + node.child2_level_set + node.common_set) {
            ++out.cardinality_violations;
        }
        if (static_cast<double>(node.even_mass_on_odd) < z_min * static_cast<double>(node.common_set)) {
            ++out.mass_violations;
        }
        out.counts.push_back(node);
    }
    return out;
}

DecompReport legall_decomposition(const StrandTree& tree, double threshold) {
    if (!(threshold >= 1)) {
        throw DomainError("threshold must be >= 1");
    }
    DecompReport r;
    r.threshold = threshold;
    for (const auto& e : tree.field(0, 0).entries()) {
        const auto l = static_cast<double>(e.count);
        if (l <= threshold) {
            r.z0 += e.count * (e.count - 1) / 2;
        }
        if (l < threshold) {
            r.band0_silt += e.count * e.count;
        }
    }
    for (int l = 1; l < tree.depth(); ++l) {
        std::vector<std::uint64_t> row;
        const std::size_t pairs = tree.level(l).size() / 2;
        row.reserve(pairs);
        for (std::size_t k = 0; k < pairs; ++k) {
            std::uint64_t jk = 0;
            join_fields(tree.field(l, 2 * k), tree.field(l, 2 * k + 1),
                        [&](std::uint64_t odd, std::uint64_t even) {
                            if (static_cast<double>(odd) <= threshold) {
                                jk += odd * even;
                            }
                        });
            row.push_back(jk);
            r.j_total += jk;
        }
        r.j.push_back(std::move(row));
    }
    r.identity_residual = tree_identity_residual(tree);
    return r;
}

DecompReport analyze_tree(const StrandTree& tree, double threshold, const std::vector<double>& zs,
                          const std::vector<double>& deltas) {
    DecompReport r = legall_decomposition(tree, threshold);
    for (int l = 0; l + 1 < tree.depth(); ++l) {
        for (double z : zs) {
            for (double delta : deltas) {
                auto check = verify_level_inclusion(tree, l, z, delta);
                check.counts.clear();
                r.inclusion_checks.push_back(std::move(check));
            }
        }
    }
    return r;
}

}  // namespace siltlab
