#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "siltlab/lattice.hpp"

namespace siltlab {

using PackedSite = unsigned __int128;

// Order-preserving injection of Z^d sites into 128-bit keys. Each coordinate
// gets min(64, 128/d) bits; sites beyond that range are rejected.
class SitePacker {
  public:
    explicit SitePacker(int dim);

    int dim() const { return dim_; }
    int width() const { return width_; }
    std::int64_t max_abs() const { return max_abs_; }

    PackedSite pack(std::span<const std::int64_t> x) const;
    PackedSite pack(const Site& x) const { return pack(x.coords()); }
    Site unpack(PackedSite key) const;

  private:
    int dim_;
    int width_;
    std::int64_t max_abs_;
};

struct LocalTimeEntry {
    PackedSite key;
    std::uint64_t count;
};

// Sparse map site -> number of visits at times 0..n. Entries are sorted by
// packed key and every stored count is >= 1, so the total mass is n + 1.
class LocalTimeField {
  public:
    static LocalTimeField from_trajectory(const Trajectory& traj);
    // Local times of a fresh walk. Consumes the stream exactly as
    // simulate_walk does, without materialising the path.
    static LocalTimeField sample_walk(int d, std::uint64_t n, RngStream& rng, const Budget& budget = {});
    // Validates positivity and total mass n + 1.
    static LocalTimeField from_counts(int dim, std::uint64_t horizon,
                                      const std::vector<std::pair<Site, std::uint64_t>>& counts);

    int dim() const { return packer_.dim(); }
    std::uint64_t horizon() const { return horizon_; }
    const SitePacker& packer() const { return packer_; }
    std::span<const LocalTimeEntry> entries() const { return entries_; }
    std::size_t range_size() const { return entries_.size(); }

    std::uint64_t count(PackedSite key) const;
    std::uint64_t count(const Site& x) const { return count(packer_.pack(x)); }
    std::uint64_t max_count() const;

  private:
    LocalTimeField(int dim, std::uint64_t horizon) : packer_(dim), horizon_(horizon) {}
    void compress(std::vector<PackedSite>& keys);

    SitePacker packer_;
    std::uint64_t horizon_;
    std::vector<LocalTimeEntry> entries_;
};

// A finite set of sites, stored as sorted packed keys.
class SiteSet {
  public:
    explicit SiteSet(int dim) : packer_(dim) {}
    SiteSet(int dim, std::vector<PackedSite> sorted_keys);
    static SiteSet from_sites(int dim, const std::vector<Site>& sites);

    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }
    bool contains(const Site& x) const;
    std::span<const PackedSite> keys() const { return keys_; }
    std::vector<Site> sites() const;

  private:
    SitePacker packer_;
    std::vector<PackedSite> keys_;
};

struct SiltSummary {
    std::uint64_t silt = 0;
    std::uint64_t range = 0;
    std::uint64_t horizon = 0;
};

LocalTimeField local_times(const Trajectory& traj);

// Sum over sites of l(x)^2.
std::uint64_t silt(const LocalTimeField& field);

// {x : l(x) > z}
SiteSet level_set(const LocalTimeField& field, double z);
// {x : lo <= l(x) < hi}
SiteSet level_band(const LocalTimeField& field, double lo, double hi);
std::size_t level_set_size(const LocalTimeField& field, double z);

// Sum of l(x)^2 over the given sites; absent sites contribute 0.
std::uint64_t restricted_silt(const LocalTimeField& field, const SiteSet& sites);
// Sum of l(x) over the given sites.
std::uint64_t restricted_mass(const LocalTimeField& field, const SiteSet& sites);

SiltSummary summarize(const LocalTimeField& field);

// silt * range >= (n + 1)^2
bool check_jensen(const SiltSummary& summary);

}  // namespace siltlab
