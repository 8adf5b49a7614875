#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "siltlab/error.hpp"
#include "siltlab/rng.hpp"

namespace siltlab {

inline constexpr int kMaxDim = 8;

void check_dimension(int d);

// A point of Z^d, 1 <= d <= 8.
class Site {
  public:
    Site() = default;
    explicit Site(int dim);
    Site(int dim, std::span<const std::int64_t> coords);
    Site(std::initializer_list<std::int64_t> coords);

    static Site origin(int dim) { return Site(dim); }

    int dim() const { return dim_; }
    std::int64_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    std::int64_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    std::span<const std::int64_t> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

    bool is_origin() const;
    std::uint64_t l1_norm() const;
    std::uint64_t sup_norm() const;
    // Exact squared euclidean norm.
    unsigned __int128 norm2() const;

    friend Site operator+(Site a, const Site& b);
    friend Site operator-(Site a, const Site& b);
    friend Site operator-(Site a);
    friend bool operator==(const Site& a, const Site& b);

    std::string str() const;

  private:
    std::array<std::int64_t, kMaxDim> c_{};
    int dim_ = 0;
};

enum class Norm { euclidean, sup };

const char* to_string(Norm norm);
Norm parse_norm(const std::string& name);

// The closed ball {x : ||x|| <= radius}.
struct BallSpec {
    double radius = 0.0;
    Norm norm = Norm::euclidean;

    bool contains(std::span<const std::int64_t> x) const;
    bool contains(const Site& x) const { return contains(x.coords()); }
    // Largest coordinate magnitude of any member.
    std::int64_t extent() const;
};

// A nearest-neighbour path S_0 = 0, S_1, ..., S_n stored row-major.
class Trajectory {
  public:
    // Validates the origin start and the nearest-neighbour property.
    Trajectory(int dim, std::vector<std::int64_t> flat_coords);
    static Trajectory from_sites(int dim, const std::vector<Site>& sites);
    static Trajectory from_1d(std::initializer_list<std::int64_t> path);

    int dim() const { return dim_; }
    std::uint64_t steps() const { return size() - 1; }
    std::uint64_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }

    std::span<const std::int64_t> at(std::uint64_t k) const {
        return {coords_.data() + k * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    Site site(std::uint64_t k) const { return Site(dim_, at(k)); }
    std::span<const std::int64_t> flat() const { return coords_; }

    friend bool operator==(const Trajectory& a, const Trajectory& b) {
        return a.dim_ == b.dim_ && a.coords_ == b.coords_;
    }

  private:
    struct Unchecked {};
    Trajectory(int dim, std::vector<std::int64_t> flat_coords, Unchecked);
    friend Trajectory simulate_walk(int, std::uint64_t, RngStream&, const Budget&);

    int dim_;
    std::vector<std::int64_t> coords_;
};

// Returns true when every step changes exactly one coordinate by one unit and
// the path starts at the origin.
bool is_nearest_neighbour_path(int dim, std::span<const std::int64_t> flat);

// Simple symmetric random walk: each step uniform over the 2d unit moves.
Trajectory simulate_walk(int d, std::uint64_t n, RngStream& rng, const Budget& budget = {});

// Smallest k with S_k outside the ball, or nullopt if the walk survives.
std::optional<std::uint64_t> exit_time(const Trajectory& traj, const BallSpec& ball);

// Direction index in [0, 2d): coordinate dir / 2, sign + for even, - for odd.
inline void apply_move(std::span<std::int64_t> x, std::uint32_t dir) {
    x[dir >> 1] += (dir & 1u) ? -1 : 1;
}

}  // namespace siltlab
