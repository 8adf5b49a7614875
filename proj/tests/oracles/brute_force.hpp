#pragma once

// Deliberately naive reference computations used only by the tests. They
// share no code with the library beyond the Trajectory container.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "siltlab/lattice.hpp"

namespace oracle {

using Point = std::vector<std::int64_t>;

inline std::vector<Point> points(const siltlab::Trajectory& t) {
    std::vector<Point> out;
    for (std::uint64_t k = 0; k < t.size(); ++k) {
        out.emplace_back(t.at(k).begin(), t.at(k).end());
    }
    return out;
}

// Number of time pairs (j, k) in [0, n]^2 with S_j = S_k.
inline std::uint64_t silt_pairs(const siltlab::Trajectory& t) {
    const auto p = points(t);
    std::uint64_t c = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            c += p[j] == p[k];
        }
    }
    return c;
}

inline std::uint64_t range_set(const siltlab::Trajectory& t) {
    const auto p = points(t);
    return std::set<Point>(p.begin(), p.end()).size();
}

inline std::map<Point, std::uint64_t> visits(const std::vector<Point>& p) {
    std::map<Point, std::uint64_t> m;
    for (const auto& x : p) {
        ++m[x];
    }
    return m;
}

// Dense box [-n, n]^d; cell index with the first coordinate slowest.
struct DenseBox {
    int d;
    std::int64_t half;
    std::int64_t side() const { return 2 * half + 1; }
    std::size_t cells() const {
        std::size_t c = 1;
        for (int i = 0; i < d; ++i) {
            c *= static_cast<std::size_t>(side());
        }
        return c;
    }
    std::size_t index(const Point& x) const {
        std::size_t idx = 0;
        for (auto v : x) {
            idx = idx * static_cast<std::size_t>(side()) + static_cast<std::size_t>(v + half);
        }
        return idx;
    }
    Point point(std::size_t idx) const {
        Point x(static_cast<std::size_t>(d));
        for (int i = d - 1; i >= 0; --i) {
            x[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(side())) - half;
            idx /= static_cast<std::size_t>(side());
        }
        return x;
    }
};

// P(S_k = x) on the full box, by direct convolution. mask(x) = false kills.
template <class Mask>
std::vector<std::vector<double>> dense_dp(int d, std::uint64_t n, std::int64_t half, Mask mask) {
    DenseBox box{d, half};
    std::vector<std::vector<double>> p(n + 1, std::vector<double>(box.cells(), 0.0));
    p[0][box.index(Point(static_cast<std::size_t>(d), 0))] = 1.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < box.cells(); ++c) {
            if (p[k][c] == 0) {
                continue;
            }
            const Point x = box.point(c);
            for (int i = 0; i < d; ++i) {
                for (int s : {-1, 1}) {
                    Point y = x;
                    y[static_cast<std::size_t>(i)] += s;
                    if (std::llabs(y[static_cast<std::size_t>(i)]) > half || !mask(y)) {
                        continue;
                    }
                    p[k + 1][box.index(y)] += p[k][c] / (2.0 * d);
                }
            }
        }
    }
    return p;
}

inline std::vector<std::vector<double>> dense_free(int d, std::uint64_t n) {
    return dense_dp(d, n, static_cast<std::int64_t>(n), [](const Point&) { return true; });
}

// All nearest-neighbour paths of n steps from the origin.
template <class Fn>
void for_each_path(int d, std::uint64_t n, Fn fn) {
    std::vector<Point> path{Point(static_cast<std::size_t>(d), 0)};
    auto rec = [&](auto&& self) -> void {
        if (path.size() == n + 1) {
            fn(path);
            return;
        }
        for (int i = 0; i < d; ++i) {
            for (int s : {1, -1}) {
                Point y = path.back();
                y[static_cast<std::size_t>(i)] += s;
                path.push_back(y);
                self(self);
                path.pop_back();
            }
        }
    };
    rec(rec);
}

// Recursive midpoint split written out directly.
inline std::pair<std::vector<Point>, std::vector<Point>> halves(const std::vector<Point>& s) {
    const std::size_t m = (s.size() - 1) / 2;
    std::vector<Point> a, b;
    for (std::size_t k = 0; k <= m; ++k) {
        Point u(s[m].size()), v(s[m].size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] = s[m][i] - s[m - k][i];
            v[i] = s[m][i] - s[m + k][i];
        }
        a.push_back(u);
        b.push_back(v);
    }
    return {a, b};
}

// strands[l] lists the 2^l strands of generation l.
inline std::vector<std::vector<std::vector<Point>>> all_strands(const std::vector<Point>& path, int depth) {
    std::vector<std::vector<std::vector<Point>>> out{{path}};
    for (int l = 1; l <= depth; ++l) {
        std::vector<std::vector<Point>> next;
        for (const auto& s : out.back()) {
            auto [a, b] = halves(s);
            next.push_back(a);
            next.push_back(b);
        }
        out.push_back(next);
    }
    return out;
}

// Time pairs (i, j) with equal sites between two strands, counted only at
// sites where the first strand's local time is at most t.
inline std::uint64_t cross_pairs(const std::vector<Point>& a, const std::vector<Point>& b, double t) {
    const auto va = visits(a);
    std::uint64_t c = 0;
    for (const auto& x : a) {
        if (static_cast<double>(va.at(x)) > t) {
            continue;
        }
        for (const auto& y : b) {
            c += x == y;
        }
    }
    return c;
}

// Pairs of times j < k at equal sites whose local time is at most t.
inline std::uint64_t low_pairs(const std::vector<Point>& p, double t) {
    const auto v = visits(p);
    std::uint64_t c = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (std::size_t k = j + 1; k < p.size(); ++k) {
            c += p[j] == p[k] && static_cast<double>(v.at(p[j])) <= t;
        }
    }
    return c;
}

}  // namespace oracle
