#include "siltlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace siltlab {

void check_dimension(int d) {
    if (d < 1 || d > kMaxDim) {
        throw DomainError("dimension must be in [1, 8], got " + std::to_string(d));
    }
}

Site::Site(int dim) : dim_(dim) { check_dimension(dim); }

Site::Site(int dim, std::span<const std::int64_t> coords) : dim_(dim) {
    check_dimension(dim);
    if (coords.size() != static_cast<std::size_t>(dim)) {
        throw DomainError("site has " + std::to_string(coords.size()) + " coordinates, expected " +
                          std::to_string(dim));
    }
    std::copy(coords.begin(), coords.end(), c_.begin());
}

Site::Site(std::initializer_list<std::int64_t> coords) : dim_(static_cast<int>(coords.size())) {
    check_dimension(dim_);
    std::copy(coords.begin(), coords.end(), c_.begin());
}

bool Site::is_origin() const {
    return std::all_of(c_.begin(), c_.begin() + dim_, [](std::int64_t v) { return v == 0; });
}

std::uint64_t Site::l1_norm() const {
    std::uint64_t s = 0;
    for (int i = 0; i < dim_; ++i) {
        s += static_cast<std::uint64_t>(std::llabs(c_[static_cast<std::size_t>(i)]));
    }
    return s;
}

std::uint64_t Site::sup_norm() const {
    std::uint64_t m = 0;
    for (int i = 0; i < dim_; ++i) {
        m = std::max(m, static_cast<std::uint64_t>(std::llabs(c_[static_cast<std::size_t>(i)])));
    }
    return m;
}

unsigned __int128 Site::norm2() const {
    unsigned __int128 s = 0;
    for (int i = 0; i < dim_; ++i) {
        const __int128 v = c_[static_cast<std::size_t>(i)];
        s += static_cast<unsigned __int128>(v * v);
    }
    return s;
}

Site operator+(Site a, const Site& b) {
    for (int i = 0; i < a.dim_; ++i) {
        a.c_[static_cast<std::size_t>(i)] += b.c_[static_cast<std::size_t>(i)];
    }
    return a;
}

Site operator-(Site a, const Site& b) {
    for (int i = 0; i < a.dim_; ++i) {
        a.c_[static_cast<std::size_t>(i)] -= b.c_[static_cast<std::size_t>(i)];
    }
    return a;
}

Site operator-(Site a) {
    for (int i = 0; i < a.dim_; ++i) {
        a.c_[static_cast<std::size_t>(i)] = -a.c_[static_cast<std::size_t>(i)];
    }
    return a;
}

bool operator==(const Site& a, const Site& b) {
    return a.dim_ == b.dim_ && std::equal(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin());
}

std::string Site::str() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim_; ++i) {
        os << (i ? "," : "") << c_[static_cast<std::size_t>(i)];
    }
    os << ')';
    return os.str();
}

const char* to_string(Norm norm) { return norm == Norm::sup ? "sup" : "euclidean"; }

Norm parse_norm(const std::string& name) {
    if (name == "euclidean" || name == "l2") {
        return Norm::euclidean;
    }
    if (name == "sup" || name == "linf") {
        return Norm::sup;
    }
    throw DomainError("unknown norm '" + name + "'");
}

bool BallSpec::contains(std::span<const std::int64_t> x) const {
    if (norm == Norm::sup) {
        for (auto v : x) {
            if (static_cast<double>(std::llabs(v)) > radius) {
                return false;
            }
        }
        return true;
    }
    long double s = 0;
    for (auto v : x) {
        s += static_cast<long double>(v) * static_cast<long double>(v);
    }
    return s <= static_cast<long double>(radius) * static_cast<long double>(radius);
}

std::int64_t BallSpec::extent() const { return static_cast<std::int64_t>(std::floor(radius)); }

bool is_nearest_neighbour_path(int dim, std::span<const std::int64_t> flat) {
    const auto d = static_cast<std::size_t>(dim);
    if (flat.empty() || flat.size() % d != 0) {
        return false;
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (flat[i] != 0) {
            return false;
        }
    }
    for (std::size_t base = d; base < flat.size(); base += d) {
        std::int64_t moved = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const std::int64_t delta = flat[base + i] - flat[base - d + i];
            if (delta != 0) {
                if (delta != 1 && delta != -1) {
                    return false;
                }
                ++moved;
            }
        }
        if (moved != 1) {
            return false;
        }
    }
    return true;
}

Trajectory::Trajectory(int dim, std::vector<std::int64_t> flat_coords)
    : dim_(dim), coords_(std::move(flat_coords)) {
    check_dimension(dim);
    if (!is_nearest_neighbour_path(dim, coords_)) {
        throw DomainError("not a nearest-neighbour path from the origin");
    }
}

Trajectory::Trajectory(int dim, std::vector<std::int64_t> flat_coords, Unchecked)
    : dim_(dim), coords_(std::move(flat_coords)) {}

Trajectory Trajectory::from_sites(int dim, const std::vector<Site>& sites) {
    std::vector<std::int64_t> flat;
    flat.reserve(sites.size() * static_cast<std::size_t>(dim));
    for (const auto& s : sites) {
        if (s.dim() != dim) {
            throw DomainError("site dimension mismatch");
        }
        flat.insert(flat.end(), s.coords().begin(), s.coords().end());
    }
    return Trajectory(dim, std::move(flat));
}

Trajectory Trajectory::from_1d(std::initializer_list<std::int64_t> path) {
    return Trajectory(1, std::vector<std::int64_t>(path));
}

Trajectory simulate_walk(int d, std::uint64_t n, RngStream& rng, const Budget& budget) {
    check_dimension(d);
    budget.require<std::int64_t>((static_cast<double>(n) + 1.0) * d, "trajectory");
    const auto dim = static_cast<std::size_t>(d);
    std::vector<std::int64_t> flat((n + 1) * dim, 0);
    const auto moves = static_cast<std::uint32_t>(2 * d);
    for (std::uint64_t k = 1; k <= n; ++k) {
        std::int64_t* cur = flat.data() + k * dim;
        std::copy_n(cur - dim, dim, cur);
        apply_move({cur, dim}, rng.below(moves));
    }
    return Trajectory(d, std::move(flat), Trajectory::Unchecked{});
}

std::optional<std::uint64_t> exit_time(const Trajectory& traj, const BallSpec& ball) {
    for (std::uint64_t k = 0; k < traj.size(); ++k) {
        if (!ball.contains(traj.at(k))) {
            return k;
        }
    }
    return std::nullopt;
}

}  // namespace siltlab
