#include "siltlab/local_time.hpp"

#include <algorithm>
#include <array>

namespace siltlab {

SitePacker::SitePacker(int dim) : dim_(dim) {
    check_dimension(dim);
    width_ = std::min(64, 128 / dim);
    max_abs_ = width_ == 64 ? INT64_MAX : (std::int64_t{1} << (width_ - 1)) - 1;
}

PackedSite SitePacker::pack(std::span<const std::int64_t> x) const {
    PackedSite key = 0;
    for (int i = dim_ - 1; i >= 0; --i) {
        const std::int64_t v = x[static_cast<std::size_t>(i)];
        std::uint64_t u;
        if (width_ == 64) {
            u = static_cast<std::uint64_t>(v) ^ (std::uint64_t{1} << 63);
        } else {
            if (v > max_abs_ || v < -max_abs_) {
                throw ResourceError("coordinate " + std::to_string(v) + " exceeds the " +
                                    std::to_string(width_) + "-bit site packing range");
            }
            u = static_cast<std::uint64_t>(v + max_abs_ + 1);
        }
        key = (key << width_) | u;
    }
    return key;
}

Site SitePacker::unpack(PackedSite key) const {
    Site s(dim_);
    const PackedSite mask = (PackedSite{1} << width_) - 1;
    for (int i = 0; i < dim_; ++i) {
        const auto u = static_cast<std::uint64_t>(key & mask);
        key >>= width_;
        s[i] = width_ == 64 ? static_cast<std::int64_t>(u ^ (std::uint64_t{1} << 63))
                            : static_cast<std::int64_t>(u) - max_abs_ - 1;
    }
    return s;
}

LocalTimeField LocalTimeField::from_trajectory(const Trajectory& traj) {
    LocalTimeField f(traj.dim(), traj.steps());
    std::vector<PackedSite> keys(traj.size());
    for (std::uint64_t k = 0; k < traj.size(); ++k) {
        keys[k] = f.packer_.pack(traj.at(k));
    }
    f.compress(keys);
    return f;
}

LocalTimeField LocalTimeField::sample_walk(int d, std::uint64_t n, RngStream& rng, const Budget& budget) {
    LocalTimeField f(d, n);
    if (static_cast<double>(n) > static_cast<double>(f.packer_.max_abs())) {
        return from_trajectory(simulate_walk(d, n, rng, budget));
    }
    budget.require<PackedSite>(static_cast<double>(n) + 1.0, "walk keys");
    std::vector<PackedSite> keys(n + 1);
    std::array<PackedSite, 2 * kMaxDim> delta{};
    for (int i = 0; i < d; ++i) {
        delta[static_cast<std::size_t>(2 * i)] = PackedSite{1} << (f.packer_.width() * i);
        delta[static_cast<std::size_t>(2 * i + 1)] = -delta[static_cast<std::size_t>(2 * i)];
    }
    keys[0] = f.packer_.pack(Site::origin(d));
    const auto moves = static_cast<std::uint32_t>(2 * d);
    for (std::uint64_t k = 1; k <= n; ++k) {
        keys[k] = keys[k - 1] + delta[rng.below(moves)];
    }
    f.compress(keys);
    return f;
}

void LocalTimeField::compress(std::vector<PackedSite>& keys) {
    std::sort(keys.begin(), keys.end());
    entries_.clear();
    entries_.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i + 1;
        while (j < keys.size() && keys[j] == keys[i]) {
            ++j;
        }
        entries_.push_back({keys[i], j - i});
        i = j;
    }
}

LocalTimeField LocalTimeField::from_counts(int dim, std::uint64_t horizon,
                                           const std::vector<std::pair<Site, std::uint64_t>>& counts) {
    LocalTimeField f(dim, horizon);
    std::uint64_t mass = 0;
    for (const auto& [site, c] : counts) {
        if (c == 0) {
            throw DomainError("local-time counts must be positive");
        }
        f.entries_.push_back({f.packer_.pack(site), c});
        mass += c;
    }
    if (mass != horizon + 1) {
        throw DomainError("local-time mass " + std::to_string(mass) + " != horizon + 1");
    }
    std::sort(f.entries_.begin(), f.entries_.end(),
              [](const auto& a, const auto& b) { return a.key < b.key; });
    for (std::size_t i = 1; i < f.entries_.size(); ++i) {
        if (f.entries_[i].key == f.entries_[i - 1].key) {
            throw DomainError("duplicate site in local-time counts");
        }
    }
    return f;
}

std::uint64_t LocalTimeField::count(PackedSite key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const LocalTimeEntry& e, PackedSite k) { return e.key < k; });
    return (it != entries_.end() && it->key == key) ? it->count : 0;
}

std::uint64_t LocalTimeField::max_count() const {
    std::uint64_t m = 0;
    for (const auto& e : entries_) {
        m = std::max(m, e.count);
    }
    return m;
}

SiteSet::SiteSet(int dim, std::vector<PackedSite> sorted_keys)
    : packer_(dim), keys_(std::move(sorted_keys)) {}

SiteSet SiteSet::from_sites(int dim, const std::vector<Site>& sites) {
    SiteSet s(dim);
    for (const auto& x : sites) {
        s.keys_.push_back(s.packer_.pack(x));
    }
    std::sort(s.keys_.begin(), s.keys_.end());
    s.keys_.erase(std::unique(s.keys_.begin(), s.keys_.end()), s.keys_.end());
    return s;
}

bool SiteSet::contains(const Site& x) const {
    return std::binary_search(keys_.begin(), keys_.end(), packer_.pack(x));
}

std::vector<Site> SiteSet::sites() const {
    std::vector<Site> out;
    out.reserve(keys_.size());
    for (auto k : keys_) {
        out.push_back(packer_.unpack(k));
    }
    return out;
}

LocalTimeField local_times(const Trajectory& traj) { return LocalTimeField::from_trajectory(traj); }

std::uint64_t silt(const LocalTimeField& field) {
    std::uint64_t s = 0;
    for (const auto& e : field.entries()) {
        s += e.count * e.count;
    }
    return s;
}

namespace {

template <class Pred>
SiteSet select(const LocalTimeField& field, Pred pred) {
    std::vector<PackedSite> keys;
    for (const auto& e : field.entries()) {
        if (pred(static_cast<double>(e.count))) {
            keys.push_back(e.key);
        }
    }
    return SiteSet(field.dim(), std::move(keys));
}

}  // namespace

SiteSet level_set(const LocalTimeField& field, double z) {
    if (!(z >= 0)) {
        throw DomainError("level-set threshold must be >= 0");
    }
    return select(field, [z](double l) { return l > z; });
}

SiteSet level_band(const LocalTimeField& field, double lo, double hi) {
    if (!(lo >= 0) || !(lo < hi)) {
        throw DomainError("level band needs 0 <= lo < hi");
    }
    return select(field, [lo, hi](double l) { return lo <= l && l < hi; });
}

std::size_t level_set_size(const LocalTimeField& field, double z) {
    std::size_t n = 0;
    for (const auto& e : field.entries()) {
        n += static_cast<double>(e.count) > z;
    }
    return n;
}

namespace {

// Merge-join of a field with a sorted key set.
template <class Fn>
void join(const LocalTimeField& field, const SiteSet& sites, Fn fn) {
    auto entries = field.entries();
    auto keys = sites.keys();
    std::size_t i = 0;
    for (auto k : keys) {
        while (i < entries.size() && entries[i].key < k) {
            ++i;
        }
        if (i < entries.size() && entries[i].key == k) {
            fn(entries[i].count);
        }
    }
}

}  // namespace

std::uint64_t restricted_silt(const LocalTimeField& field, const SiteSet& sites) {
    std::uint64_t s = 0;
    join(field, sites, [&](std::uint64_t c) { s += c * c; });
    return s;
}

std::uint64_t restricted_mass(const LocalTimeField& field, const SiteSet& sites) {
    std::uint64_t s = 0;
    join(field, sites, [&](std::uint64_t c) { s += c; });
    return s;
}

SiltSummary summarize(const LocalTimeField& field) {
    return {silt(field), field.range_size(), field.horizon()};
}

bool check_jensen(const SiltSummary& summary) {
    const unsigned __int128 lhs = static_cast<unsigned __int128>(summary.silt) * summary.range;
    const unsigned __int128 mass = static_cast<unsigned __int128>(summary.horizon) + 1;
    return lhs >= mass * mass;
}

}  // namespace siltlab
