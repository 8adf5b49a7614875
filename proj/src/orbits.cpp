#include "siltlab/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>

namespace siltlab {

namespace {

std::uint64_t orbit_multiplicity(std::span<const std::int32_t> rep) {
    const auto d = rep.size();
    std::uint64_t m = 1;
    for (std::size_t i = 2; i <= d; ++i) {
        m *= i;
    }
    std::size_t run = 1;
    for (std::size_t i = 1; i <= d; ++i) {
        if (i < d && rep[i] == rep[i - 1]) {
            ++run;
            continue;
        }
        for (std::size_t f = 2; f <= run; ++f) {
            m /= f;
        }
        run = 1;
    }
    for (auto v : rep) {
        if (v != 0) {
            m *= 2;
        }
    }
    return m;
}

}  // namespace

template <class Feasible>
OrbitSpace OrbitSpace::build(int d, std::int64_t max_coord, Feasible feasible, const Budget& budget) {
    check_dimension(d);
    if (max_coord < 0 || max_coord > INT32_MAX - 1) {
        throw DomainError("orbit region radius out of range");
    }
    OrbitSpace s;
    s.dim_ = d;
    const double bytes_per_orbit = 4.0 * d + 8 + 8 + 4.0 * 2 * d + 16 + 4;
    const auto max_orbits = static_cast<std::size_t>(static_cast<double>(budget.max_bytes) / bytes_per_orbit);

    std::vector<std::int32_t> cur(static_cast<std::size_t>(d), 0);
    std::vector<std::int32_t> reps;
    // Depth-first over non-increasing sequences; feasible() is monotone in
    // each coordinate, so a failing prefix prunes its subtree.
    auto rec = [&](auto&& self, int pos, std::int32_t bound) -> void {
        if (pos == d) {
            reps.insert(reps.end(), cur.begin(), cur.end());
            if (reps.size() / static_cast<std::size_t>(d) > max_orbits) {
                budget.require_bytes(static_cast<double>(budget.max_bytes) + 1, "orbit space");
            }
            return;
        }
        for (std::int32_t v = 0; v <= bound; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            std::fill(cur.begin() + pos + 1, cur.end(), 0);
            if (!feasible(std::span<const std::int32_t>(cur))) {
                break;
            }
            self(self, pos + 1, v);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, static_cast<std::int32_t>(max_coord));

    const std::size_t count = reps.size() / static_cast<std::size_t>(d);
    std::vector<std::uint64_t> l1(count);
    for (std::size_t o = 0; o < count; ++o) {
        l1[o] = 0;
        for (int i = 0; i < d; ++i) {
            l1[o] += static_cast<std::uint64_t>(reps[o * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)]);
        }
    }
    std::vector<std::uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return l1[a] < l1[b]; });

    s.reps_.resize(reps.size());
    s.l1_.resize(count);
    s.mult_.resize(count);
    for (std::size_t o = 0; o < count; ++o) {
        std::copy_n(reps.begin() + static_cast<std::ptrdiff_t>(order[o] * static_cast<std::size_t>(d)), d,
                    s.reps_.begin() + static_cast<std::ptrdiff_t>(o * static_cast<std::size_t>(d)));
        s.l1_[o] = l1[order[o]];
        s.mult_[o] = orbit_multiplicity(s.rep(o));
    }

    const SitePacker packer(d);
    std::vector<std::int64_t> wide(static_cast<std::size_t>(d));
    s.sorted_keys_.resize(count);
    for (std::size_t o = 0; o < count; ++o) {
        std::copy(s.rep(o).begin(), s.rep(o).end(), wide.begin());
        s.sorted_keys_[o] = packer.pack(wide);
    }
    s.key_order_.resize(count);
    std::iota(s.key_order_.begin(), s.key_order_.end(), 0u);
    std::sort(s.key_order_.begin(), s.key_order_.end(),
              [&](auto a, auto b) { return s.sorted_keys_[a] < s.sorted_keys_[b]; });
    std::vector<PackedSite> keys(count);
    for (std::size_t i = 0; i < count; ++i) {
        keys[i] = s.sorted_keys_[s.key_order_[i]];
    }
    s.sorted_keys_ = std::move(keys);

    s.nbr_.assign(count * static_cast<std::size_t>(2 * d), -1);
    for (std::size_t o = 0; o < count; ++o) {
        std::copy(s.rep(o).begin(), s.rep(o).end(), wide.begin());
        for (int dir = 0; dir < 2 * d; ++dir) {
            apply_move(wide, static_cast<std::uint32_t>(dir));
            if (auto t = s.find(wide)) {
                s.nbr_[o * static_cast<std::size_t>(2 * d) + static_cast<std::size_t>(dir)] =
                    static_cast<std::int32_t>(*t);
            }
            apply_move(wide, static_cast<std::uint32_t>(dir ^ 1));
        }
    }
    return s;
}

OrbitSpace OrbitSpace::l1_ball(int d, std::uint64_t radius, const Budget& budget) {
    if (radius > static_cast<std::uint64_t>(INT32_MAX - 1)) {
        throw DomainError("L1 radius too large");
    }
    const auto r = static_cast<std::int64_t>(radius);
    return build(
        d, r,
        [r](std::span<const std::int32_t> x) {
            std::int64_t s = 0;
            for (auto v : x) {
                s += v;
            }
            return s <= r;
        },
        budget);
}

OrbitSpace OrbitSpace::lattice_ball(int d, const BallSpec& ball, const Budget& budget) {
    if (!(ball.radius >= 0)) {
        throw DomainError("ball radius must be >= 0");
    }
    std::vector<std::int64_t> wide(static_cast<std::size_t>(d));
    return build(
        d, ball.extent(),
        [&](std::span<const std::int32_t> x) {
            std::copy(x.begin(), x.end(), wide.begin());
            return ball.contains(wide);
        },
        budget);
}

Site OrbitSpace::rep_site(std::size_t o) const {
    Site s(dim_);
    for (int i = 0; i < dim_; ++i) {
        s[i] = rep(o)[static_cast<std::size_t>(i)];
    }
    return s;
}

std::uint64_t OrbitSpace::norm2(std::size_t o) const {
    std::uint64_t s = 0;
    for (auto v : rep(o)) {
        s += static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(v);
    }
    return s;
}

std::uint64_t OrbitSpace::cardinality() const {
    return std::accumulate(mult_.begin(), mult_.end(), std::uint64_t{0});
}

std::size_t OrbitSpace::prefix(std::uint64_t k) const {
    return static_cast<std::size_t>(std::upper_bound(l1_.begin(), l1_.end(), k) - l1_.begin());
}

std::optional<std::size_t> OrbitSpace::find(std::span<const std::int64_t> x) const {
    std::array<std::int64_t, kMaxDim> a{};
    for (int i = 0; i < dim_; ++i) {
        a[static_cast<std::size_t>(i)] = std::llabs(x[static_cast<std::size_t>(i)]);
    }
    std::sort(a.begin(), a.begin() + dim_, std::greater<>());
    const SitePacker packer(dim_);
    if (a[0] > packer.max_abs()) {
        return std::nullopt;
    }
    const PackedSite key = packer.pack(std::span<const std::int64_t>(a.data(), static_cast<std::size_t>(dim_)));
    auto it = std::lower_bound(sorted_keys_.begin(), sorted_keys_.end(), key);
    if (it == sorted_keys_.end() || *it != key) {
        return std::nullopt;
    }
    return key_order_[static_cast<std::size_t>(it - sorted_keys_.begin())];
}

void apply_walk_operator(const OrbitSpace& space, std::span<const double> in, std::size_t in_limit,
                         std::span<double> out) {
    const int moves = 2 * space.dim();
    const double w = 1.0 / moves;
    const auto limit = static_cast<std::int64_t>(std::min(in_limit, in.size()));
    for (std::size_t o = 0; o < out.size(); ++o) {
        double acc = 0;
        for (int dir = 0; dir < moves; ++dir) {
            const std::int32_t t = space.neighbour(o, dir);
            if (t >= 0 && t < limit) {
                acc += in[static_cast<std::size_t>(t)];
            }
        }
        out[o] = acc * w;
    }
}

}  // namespace siltlab
