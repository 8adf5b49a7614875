#include "siltlab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <numbers>
#include <numeric>

namespace siltlab {

namespace {

void check_horizon(std::uint64_t n) {
    if (n > static_cast<std::uint64_t>(INT32_MAX - 2)) {
        throw DomainError("horizon too large for exact tables");
    }
}

}  // namespace

double TransitionTable::prob(std::uint64_t k, std::span<const std::int64_t> x) const {
    if (k > horizon()) {
        throw DomainError("time beyond table horizon");
    }
    auto o = orbits_.find(x);
    const auto s = slice(k);
    return (o && *o < s.size()) ? s[*o] : 0.0;
}

double TransitionTable::slice_sum(std::uint64_t k) const {
    const auto s = slice(k);
    double acc = 0;
    for (std::size_t o = 0; o < s.size(); ++o) {
        acc += static_cast<double>(orbits_.multiplicity(o)) * s[o];
    }
    return acc;
}

TransitionTable transition_probs(int d, std::uint64_t n, const Budget& budget) {
    check_dimension(d);
    check_horizon(n);
    TransitionTable t;
    t.orbits_ = OrbitSpace::l1_ball(d, n, budget);
    t.offsets_.resize(n + 2);
    t.offsets_[0] = 0;
    for (std::uint64_t k = 0; k <= n; ++k) {
        t.offsets_[k + 1] = t.offsets_[k] + t.orbits_.prefix(k);
    }
    budget.require<double>(static_cast<double>(t.offsets_.back()), "transition table");
    t.data_.assign(t.offsets_.back(), 0.0);
    t.data_[0] = 1.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto in = t.slice(k);
        std::span<double> out(t.data_.data() + t.offsets_[k + 1], t.offsets_[k + 2] - t.offsets_[k + 1]);
        apply_walk_operator(t.orbits_, in, in.size(), out);
    }
    return t;
}

std::vector<double> return_probabilities(int d, std::uint64_t n, const Budget& budget) {
    check_dimension(d);
    check_horizon(n);
    // Only orbits within distance n - k of the origin at time k can still
    // contribute to a return by time n.
    const OrbitSpace space = OrbitSpace::l1_ball(d, (n + 1) / 2, budget);
    budget.require<double>(2.0 * static_cast<double>(space.size()), "propagation buffers");
    std::vector<double> cur(space.size(), 0.0);
    std::vector<double> next(space.size(), 0.0);
    cur[0] = 1.0;
    std::vector<double> p(n + 1, 0.0);
    p[0] = 1.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const std::uint64_t reach = std::min(k + 1, n - k - 1);
        const std::size_t out_size = space.prefix(reach);
        const std::size_t in_size = space.prefix(std::min(k, n - k));
        apply_walk_operator(space, cur, in_size, std::span<double>(next.data(), out_size));
        std::swap(cur, next);
        p[k + 1] = cur[0];
    }
    return p;
}

double expected_silt(int d, std::uint64_t n, const Budget& budget) {
    const auto p = return_probabilities(d, n, budget);
    double acc = 0;
    for (std::uint64_t j = 1; j <= n; ++j) {
        acc += static_cast<double>(n + 1 - j) * p[j];
    }
    return static_cast<double>(n + 1) + 2.0 * acc;
}

double expected_range(int d, std::uint64_t n, const Budget& budget) {
    const auto p = return_probabilities(d, n, budget);
    // First-return probabilities from p_k(0) = sum_j f_j p_{k-j}(0).
    std::vector<double> f(n + 1, 0.0);
    double escaped = 1.0;  // P(no return during 1..k)
    double total = 1.0;
    for (std::uint64_t k = 1; k <= n; ++k) {
        double acc = p[k];
        for (std::uint64_t j = 1; j < k; ++j) {
            acc -= f[j] * p[k - j];
        }
        f[k] = acc;
        escaped -= acc;
        total += escaped;
    }
    return total;
}

double expected_mutual_intersection(int d, std::uint64_t n, const Budget& budget) {
    check_dimension(d);
    check_horizon(n);
    const OrbitSpace space = OrbitSpace::l1_ball(d, n, budget);
    budget.require<double>(3.0 * static_cast<double>(space.size()), "propagation buffers");
    std::vector<double> cur(space.size(), 0.0);
    std::vector<double> next(space.size(), 0.0);
    std::vector<double> green(space.size(), 0.0);
    cur[0] = 1.0;
    green[0] = 1.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const std::size_t out_size = space.prefix(k + 1);
        apply_walk_operator(space, cur, space.prefix(k), std::span<double>(next.data(), out_size));
        std::swap(cur, next);
        for (std::size_t o = 0; o < out_size; ++o) {
            green[o] += cur[o];
        }
    }
    double acc = 0;
    for (std::size_t o = 0; o < space.size(); ++o) {
        acc += static_cast<double>(space.multiplicity(o)) * green[o] * green[o];
    }
    return acc;
}

namespace {

std::size_t origin_orbit(const OrbitSpace& space) {
    const Site origin = Site::origin(space.dim());
    auto o = space.find(origin);
    if (!o) {
        throw DomainError("origin is not inside the ball");
    }
    return *o;
}

// One killed step followed by renormalisation; returns the surviving mass
// fraction, 0 once everything is killed.
double killed_step(const OrbitSpace& space, std::span<const double> in, std::span<double> out) {
    apply_walk_operator(space, in, in.size(), out);
    double mass = 0;
    for (std::size_t o = 0; o < out.size(); ++o) {
        mass += static_cast<double>(space.multiplicity(o)) * out[o];
    }
    if (!(mass > 0)) {
        std::fill(out.begin(), out.end(), 0.0);
        return 0.0;
    }
    for (auto& v : out) {
        v /= mass;
    }
    return mass;
}

}  // namespace

double KilledTable::prob(std::uint64_t k, std::span<const std::int64_t> x) const {
    if (k > horizon()) {
        throw DomainError("time beyond table horizon");
    }
    if (!ball_.contains(x)) {
        return 0.0;
    }
    auto o = orbits_.find(x);
    return o ? conditional_slice(k)[*o] * std::exp(log_survival_[k]) : 0.0;
}

double KilledTable::survival(std::uint64_t k) const { return std::exp(log_survival_.at(k)); }

KilledTable killed_probs(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget) {
    check_dimension(d);
    KilledTable t;
    t.ball_ = ball;
    t.orbits_ = OrbitSpace::lattice_ball(d, ball, budget);
    const std::size_t m = t.orbits_.size();
    budget.require<double>(static_cast<double>(m) * (static_cast<double>(n) + 1), "killed table");
    t.data_.assign((n + 1) * m, 0.0);
    t.log_survival_.assign(n + 1, 0.0);
    t.data_[origin_orbit(t.orbits_)] = 1.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        std::span<double> out(t.data_.data() + (k + 1) * m, m);
        const double step = killed_step(t.orbits_, t.conditional_slice(k), out);
        t.log_survival_[k + 1] = t.log_survival_[k] + std::log(step);
    }
    return t;
}

double log_survival_prob(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget) {
    check_dimension(d);
    const OrbitSpace space = OrbitSpace::lattice_ball(d, ball, budget);
    std::vector<double> cur(space.size(), 0.0);
    std::vector<double> next(space.size(), 0.0);
    cur[origin_orbit(space)] = 1.0;
    double log_mass = 0;
    for (std::uint64_t k = 0; k < n && std::isfinite(log_mass); ++k) {
        log_mass += std::log(killed_step(space, cur, next));
        std::swap(cur, next);
    }
    return log_mass;
}

double survival_prob(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget) {
    // Same recursion as log_survival_prob, but the per-step mass fractions are
    // multiplied directly so that dyadic answers come out exact.
    check_dimension(d);
    const OrbitSpace space = OrbitSpace::lattice_ball(d, ball, budget);
    std::vector<double> cur(space.size(), 0.0);
    std::vector<double> next(space.size(), 0.0);
    cur[origin_orbit(space)] = 1.0;
    double mass = 1;
    for (std::uint64_t k = 0; k < n && mass > 0; ++k) {
        mass *= killed_step(space, cur, next);
        std::swap(cur, next);
    }
    return mass;
}

double EigenResult::value(const Site& x) const {
    auto o = orbits.find(x);
    return o ? eigenfunction[*o] : 0.0;
}

EigenResult principal_eigen(int d, const BallSpec& ball, double tolerance, std::uint64_t max_iterations,
                            const Budget& budget) {
    check_dimension(d);
    EigenResult r;
    r.orbits = OrbitSpace::lattice_ball(d, ball, budget);
    const OrbitSpace& space = r.orbits;
    const std::size_t m = space.size();
    std::vector<double> phi(m, 1.0);
    std::vector<double> kphi(m, 0.0);

    auto measure = [&] {
        apply_walk_operator(space, phi, m, kphi);
        double num = 0;
        double den = 0;
        for (std::size_t o = 0; o < m; ++o) {
            const auto w = static_cast<double>(space.multiplicity(o));
            num += w * phi[o] * kphi[o];
            den += w * phi[o] * phi[o];
        }
        r.eigenvalue = num / den;
        r.residual = 0;
        for (std::size_t o = 0; o < m; ++o) {
            r.residual = std::max(r.residual, std::abs(kphi[o] - r.eigenvalue * phi[o]));
        }
    };

    for (r.iterations = 0; r.iterations < max_iterations; ++r.iterations) {
        measure();
        if (r.residual < tolerance) {
            break;
        }
        double top = 0;
        for (std::size_t o = 0; o < m; ++o) {
            phi[o] = 0.5 * (phi[o] + kphi[o]);
            top = std::max(top, phi[o]);
        }
        if (!(top > 0)) {
            throw ConvergenceError("eigenfunction vanished; ball is degenerate");
        }
        for (auto& v : phi) {
            v /= top;
        }
    }
    if (r.residual >= tolerance) {
        throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iterations) +
                               " iterations");
    }
    r.eigenfunction = std::move(phi);
    return r;
}

double PathDistribution::mean_silt() const {
    unsigned __int128 acc = 0;
    for (const auto& o : outcomes) {
        acc += static_cast<unsigned __int128>(o.silt) * o.paths;
    }
    const auto whole = static_cast<std::uint64_t>(acc / total_paths);
    const auto rest = static_cast<std::uint64_t>(acc % total_paths);
    return static_cast<double>(whole) + static_cast<double>(rest) / static_cast<double>(total_paths);
}

double PathDistribution::mean_range() const {
    unsigned __int128 acc = 0;
    for (const auto& o : outcomes) {
        acc += static_cast<unsigned __int128>(o.range) * o.paths;
    }
    const auto whole = static_cast<std::uint64_t>(acc / total_paths);
    const auto rest = static_cast<std::uint64_t>(acc % total_paths);
    return static_cast<double>(whole) + static_cast<double>(rest) / static_cast<double>(total_paths);
}

double PathDistribution::prob_silt_above(double t) const {
    std::uint64_t hits = 0;
    for (const auto& o : outcomes) {
        if (static_cast<double>(o.silt) > t) {
            hits += o.paths;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total_paths);
}

double PathDistribution::prob_range_below(double t) const {
    std::uint64_t hits = 0;
    for (const auto& o : outcomes) {
        if (static_cast<double>(o.range) < t) {
            hits += o.paths;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total_paths);
}

PathDistribution enumerate_paths(int d, std::uint64_t n) {
    check_dimension(d);
    if (static_cast<double>(n) * std::log(2.0 * d) > std::log(kMaxEnumeratedPaths) + 1e-9) {
        throw DomainError("enumeration instance too large: (2d)^n exceeds 1e8");
    }
    const std::uint64_t side = 2 * n + 1;
    std::vector<std::int64_t> stride(static_cast<std::size_t>(d));
    std::int64_t cells = 1;
    for (int i = 0; i < d; ++i) {
        stride[static_cast<std::size_t>(i)] = cells;
        cells *= static_cast<std::int64_t>(side);
    }
    std::vector<std::int64_t> move_delta(static_cast<std::size_t>(2 * d));
    for (int dir = 0; dir < 2 * d; ++dir) {
        move_delta[static_cast<std::size_t>(dir)] =
            (dir & 1 ? -1 : 1) * stride[static_cast<std::size_t>(dir >> 1)];
    }
    std::vector<std::uint32_t> grid(static_cast<std::size_t>(cells), 0);
    std::int64_t centre = 0;
    for (int i = 0; i < d; ++i) {
        centre += static_cast<std::int64_t>(n) * stride[static_cast<std::size_t>(i)];
    }
    const std::uint64_t max_silt = (n + 1) * (n + 1);
    const std::uint64_t ranges = n + 2;
    std::vector<std::uint64_t> hist((max_silt + 1) * ranges, 0);

    grid[static_cast<std::size_t>(centre)] = 1;
    auto rec = [&](auto&& self, std::uint64_t depth, std::int64_t pos, std::uint64_t s,
                   std::uint64_t r) -> void {
        if (depth == n) {
            ++hist[s * ranges + r];
            return;
        }
        for (auto delta : move_delta) {
            const std::int64_t next = pos + delta;
            auto& c = grid[static_cast<std::size_t>(next)];
            const std::uint64_t s2 = s + 2 * c + 1;
            const std::uint64_t r2 = r + (c == 0);
            ++c;
            self(self, depth + 1, next, s2, r2);
            --c;
        }
    };
    rec(rec, 0, centre, 1, 1);

    PathDistribution dist;
    dist.dim = d;
    dist.horizon = n;
    dist.total_paths = 1;
    for (std::uint64_t k = 0; k < n; ++k) {
        dist.total_paths *= static_cast<std::uint64_t>(2 * d);
    }
    for (std::uint64_t s = 0; s <= max_silt; ++s) {
        for (std::uint64_t r = 0; r < ranges; ++r) {
            if (auto c = hist[s * ranges + r]) {
                dist.outcomes.push_back({s, r, c});
            }
        }
    }
    return dist;
}

namespace {

bool outside_sqrt_n(std::span<const std::int32_t> rep, std::uint64_t n, Norm norm) {
    if (norm == Norm::sup) {
        const auto a = static_cast<std::uint64_t>(rep[0]);
        return a * a > n;
    }
    std::uint64_t s = 0;
    for (auto v : rep) {
        s += static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(v);
    }
    return s > n;
}

void consider(GaussianComparison& g, double num, double den, std::uint64_t k, const Site& x) {
    ++g.pairs;
    const double ratio = num / den;
    if (ratio > g.value || g.pairs == 1) {
        g.value = ratio;
        g.argmax_k = k;
        g.argmax_x = x;
    }
}

}  // namespace

GaussianComparison gaussian_comparison_constant(const TransitionTable& table, Norm norm, ScanMode mode) {
    const std::uint64_t n = table.horizon();
    const std::uint64_t half = n / 2;
    const OrbitSpace& space = table.orbits();
    const int d = table.dim();
    GaussianComparison g;
    g.argmax_x = Site::origin(d);
    if (mode == ScanMode::reduced) {
        for (std::uint64_t k = 0; k < half; ++k) {
            const auto num_slice = table.slice(half - k);
            const auto den_slice = table.slice(n - k);
            for (std::size_t o = 0; o < den_slice.size(); ++o) {
                if (den_slice[o] > 0 && outside_sqrt_n(space.rep(o), n, norm)) {
                    const double num = o < num_slice.size() ? num_slice[o] : 0.0;
                    consider(g, num, den_slice[o], k, space.rep_site(o));
                }
            }
        }
        return g;
    }
    // Direct scan over every site of the box, without symmetry reduction.
    const double sites = std::pow(2.0 * static_cast<double>(n) + 1, d);
    if (sites * static_cast<double>(half) > 1e9) {
        throw ResourceError("direct Gaussian-comparison scan too large");
    }
    const auto lim = static_cast<std::int64_t>(n);
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), -lim);
    std::vector<std::int32_t> sorted(static_cast<std::size_t>(d));
    for (std::uint64_t k = 0; k < half; ++k) {
        std::fill(x.begin(), x.end(), -lim);
        for (;;) {
            for (int i = 0; i < d; ++i) {
                sorted[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(std::llabs(x[static_cast<std::size_t>(i)]));
            }
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            const double den = table.prob(n - k, x);
            if (den > 0 && outside_sqrt_n(sorted, n, norm)) {
                consider(g, table.prob(half - k, x), den, k, Site(d, x));
            }
            int i = 0;
            while (i < d && x[static_cast<std::size_t>(i)] == lim) {
                x[static_cast<std::size_t>(i)] = -lim;
                ++i;
            }
            if (i == d) {
                break;
            }
            ++x[static_cast<std::size_t>(i)];
        }
    }
    return g;
}

GaussianComparison gaussian_comparison_constant(int d, std::uint64_t n, Norm norm, ScanMode mode,
                                                const Budget& budget) {
    return gaussian_comparison_constant(transition_probs(d, n, budget), norm, mode);
}

double ld_bound_log_rhs(double n, double gamma, double ex2, double c, double x_n) {
    if (!(gamma > 0 && gamma < 1)) {
        throw DomainError("gamma must lie in (0, 1)");
    }
    if (!(c > 1)) {
        throw DomainError("tail constant C must exceed 1");
    }
    if (!(ex2 > 0)) {
        throw DomainError("E[X^2] must be positive");
    }
    if (!(n > 0)) {
        throw DomainError("n must be positive");
    }
    const double cu = 3.0 + std::numbers::e + c;
    const double t = gamma * gamma * ex2;
    return cu * n * std::max(t, std::pow(t, 1.0 - gamma)) - gamma * x_n / 2.0;
}

double ld_bound_rhs(double n, double gamma, double ex2, double c, double x_n) {
    return std::exp(ld_bound_log_rhs(n, gamma, ex2, c, x_n));
}

Rational exact_return_probability_1d(std::uint64_t k) {
    if (k > kMaxExactHorizon) {
        throw DomainError("exact mode supports n <= 64");
    }
    if (k % 2 != 0) {
        return Rational(0);
    }
    using boost::multiprecision::cpp_int;
    cpp_int binom = 1;
    for (std::uint64_t i = 1; i <= k / 2; ++i) {
        binom = binom * (k / 2 + i) / i;
    }
    return Rational(binom, cpp_int(1) << static_cast<unsigned>(k));
}

Rational exact_expected_silt_1d(std::uint64_t n) {
    if (n > kMaxExactHorizon) {
        throw DomainError("exact mode supports n <= 64");
    }
    Rational acc(static_cast<long long>(n + 1));
    for (std::uint64_t j = 1; j <= n; ++j) {
        acc += 2 * Rational(static_cast<long long>(n + 1 - j)) * exact_return_probability_1d(j);
    }
    return acc;
}

std::uint64_t DenseTable::slice_size() const {
    std::uint64_t s = 1;
    for (int i = 0; i < dim; ++i) {
        s *= side();
    }
    return s;
}

double DenseTable::at(std::uint64_t k, std::span<const std::int64_t> x) const {
    if (k > horizon || static_cast<int>(x.size()) != dim) {
        throw DomainError("dense table lookup out of range");
    }
    std::uint64_t idx = 0;
    for (auto v : x) {
        if (v < lo || v > hi) {
            return 0.0;
        }
        idx = idx * side() + static_cast<std::uint64_t>(v - lo);
    }
    return values[k * slice_size() + idx];
}

namespace {

template <class Table>
DenseTable fill_dense(const Table& table, DenseTable out, const Budget& budget) {
    out.dim = table.dim();
    out.horizon = table.horizon();
    const double cells = std::pow(static_cast<double>(out.side()), out.dim) * (static_cast<double>(out.horizon) + 1);
    budget.require<double>(cells, "dense table export");
    out.values.resize(static_cast<std::size_t>(cells));
    std::vector<std::int64_t> x(static_cast<std::size_t>(out.dim));
    std::size_t idx = 0;
    for (std::uint64_t k = 0; k <= out.horizon; ++k) {
        std::fill(x.begin(), x.end(), out.lo);
        for (;;) {
            out.values[idx++] = table.prob(k, x);
            int i = out.dim - 1;
            while (i >= 0 && x[static_cast<std::size_t>(i)] == out.hi) {
                x[static_cast<std::size_t>(i)] = out.lo;
                --i;
            }
            if (i < 0) {
                break;
            }
            ++x[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

template <class T>
void put(std::ostream& os, T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        buf[i] = static_cast<char>(u & 0xFF);
        u = static_cast<U>(u >> 8);
    }
    os.write(buf, sizeof(U));
}

void put_double(std::ostream& os, double v) { put(os, std::bit_cast<std::uint64_t>(v)); }

template <class T>
T get(std::istream& is) {
    using U = std::make_unsigned_t<T>;
    unsigned char buf[sizeof(U)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(U))) {
        throw DomainError("truncated table file");
    }
    U u = 0;
    for (std::size_t i = sizeof(U); i-- > 0;) {
        u = static_cast<U>((u << 8) | buf[i]);
    }
    return static_cast<T>(u);
}

double get_double(std::istream& is) { return std::bit_cast<double>(get<std::uint64_t>(is)); }

constexpr char kMagic[8] = {'S', 'I', 'L', 'T', 'T', 'A', 'B', '\0'};

}  // namespace

DenseTable to_dense(const TransitionTable& table, const Budget& budget) {
    DenseTable out;
    out.kind = DenseTable::Kind::free;
    out.lo = -static_cast<std::int64_t>(table.horizon());
    out.hi = static_cast<std::int64_t>(table.horizon());
    return fill_dense(table, std::move(out), budget);
}

DenseTable to_dense(const KilledTable& table, const Budget& budget) {
    DenseTable out;
    out.kind = DenseTable::Kind::killed;
    out.ball = table.ball();
    out.lo = -table.ball().extent();
    out.hi = table.ball().extent();
    return fill_dense(table, std::move(out), budget);
}

void write_table(const std::filesystem::path& path, const DenseTable& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw ResourceError("cannot open " + path.string() + " for writing");
    }
    os.write(kMagic, sizeof(kMagic));
    put(os, kTableFormatVersion);
    put(os, static_cast<std::uint32_t>(table.kind));
    put(os, static_cast<std::uint32_t>(table.dim));
    put(os, static_cast<std::uint32_t>(table.ball.norm == Norm::sup ? 1 : 0));
    put(os, table.horizon);
    put(os, table.lo);
    put(os, table.hi);
    put_double(os, table.ball.radius);
    for (double v : table.values) {
        put_double(os, v);
    }
    if (!os) {
        throw ResourceError("failed writing " + path.string());
    }
}

DenseTable read_table(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw DomainError("cannot open " + path.string());
    }
    char magic[sizeof(kMagic)];
    if (!is.read(magic, sizeof(magic)) || !std::equal(magic, magic + sizeof(magic), kMagic)) {
        throw DomainError("not a siltlab table file");
    }
    const auto version = get<std::uint32_t>(is);
    if (version != kTableFormatVersion) {
        throw DomainError("unsupported table format version " + std::to_string(version));
    }
    DenseTable t;
    const auto kind = get<std::uint32_t>(is);
    if (kind > 1) {
        throw DomainError("unknown table kind");
    }
    t.kind = static_cast<DenseTable::Kind>(kind);
    t.dim = static_cast<int>(get<std::uint32_t>(is));
    check_dimension(t.dim);
    t.ball.norm = get<std::uint32_t>(is) == 1 ? Norm::sup : Norm::euclidean;
    t.horizon = get<std::uint64_t>(is);
    t.lo = get<std::int64_t>(is);
    t.hi = get<std::int64_t>(is);
    t.ball.radius = get_double(is);
    if (t.hi < t.lo) {
        throw DomainError("corrupt table bounds");
    }
    const double cells = std::pow(static_cast<double>(t.side()), t.dim) * (static_cast<double>(t.horizon) + 1);
    if (cells > 1e10) {
        throw DomainError("corrupt table size");
    }
    t.values.resize(static_cast<std::size_t>(cells));
    for (auto& v : t.values) {
        v = get_double(is);
    }
    if (is.peek() != std::char_traits<char>::eof()) {
        throw DomainError("trailing bytes in table file");
    }
    return t;
}

}  // namespace siltlab
