#include "siltlab/rare_event.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "siltlab/local_time.hpp"

namespace siltlab {

TailEstimate TailEstimate::from_counts(std::uint64_t hits, std::uint64_t samples, std::string event) {
    if (samples == 0) {
        throw DomainError("tail estimate needs at least one sample");
    }
    TailEstimate t;
    t.hits = hits;
    t.samples = samples;
    t.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
    t.std_error = std::sqrt(t.p_hat * (1.0 - t.p_hat) / static_cast<double>(samples));
    t.event = std::move(event);
    return t;
}

namespace {

void check_tail_args(int d, double y, std::uint64_t samples) {
    check_dimension(d);
    if (!(y > 1)) {
        throw DomainError("y must exceed 1");
    }
    if (samples == 0) {
        throw DomainError("samples must be >= 1");
    }
}

struct HitCount {
    std::uint64_t hits = 0;
    std::uint64_t violations = 0;
};

}  // namespace

TailEstimate mc_tail_silt(int d, std::uint64_t n, double y, std::uint64_t samples, const McConfig& cfg) {
    check_tail_args(d, y, samples);
    const double level = static_cast<double>(n) * y;
    auto parts = run_chunks<HitCount>(samples, cfg, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        HitCount c;
        for (std::uint64_t i = b; i < e; ++i) {
            const auto field = LocalTimeField::sample_walk(d, n, rng, cfg.budget);
            c.hits += static_cast<double>(silt(field)) > level;
        }
        return c;
    });
    std::uint64_t hits = 0;
    for (const auto& p : parts) {
        hits += p.hits;
    }
    return TailEstimate::from_counts(hits, samples, "silt > n*y");
}

RangeTail mc_tail_range(int d, std::uint64_t n, double y, std::uint64_t samples, const McConfig& cfg) {
    check_tail_args(d, y, samples);
    const double silt_level = static_cast<double>(n) * y;
    const double range_level = static_cast<double>(n) / y;
    auto parts = run_chunks<HitCount>(samples, cfg, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        HitCount c;
        for (std::uint64_t i = b; i < e; ++i) {
            const auto field = LocalTimeField::sample_walk(d, n, rng, cfg.budget);
            if (static_cast<double>(field.range_size()) < range_level) {
                ++c.hits;
                c.violations += !(static_cast<double>(silt(field)) > silt_level);
            }
        }
        return c;
    });
    RangeTail out;
    std::uint64_t hits = 0;
    for (const auto& p : parts) {
        hits += p.hits;
        out.implication_violations += p.violations;
    }
    out.estimate = TailEstimate::from_counts(hits, samples, "range < n/y");
    return out;
}

namespace {

std::uint64_t count_ball(int d, std::uint64_t m) {
    if (d == 0) {
        return 1;
    }
    std::uint64_t total = count_ball(d - 1, m);
    for (std::uint64_t a = 1; a * a <= m; ++a) {
        total += 2 * count_ball(d - 1, m - a * a);
    }
    return total;
}

}  // namespace

std::uint64_t lattice_ball_cardinality(int d, std::uint64_t m) {
    check_dimension(d);
    return count_ball(d, m);
}

BallSpec radius_for_cardinality(int d, double target) {
    check_dimension(d);
    if (!(target > 0) || !std::isfinite(target)) {
        throw DomainError("target ball size must be positive");
    }
    std::uint64_t m = 0;
    while (static_cast<double>(lattice_ball_cardinality(d, m)) < target) {
        ++m;
    }
    // Nudge upwards so that sites with |x|^2 = m are inside despite rounding.
    double r = std::sqrt(static_cast<double>(m));
    while (static_cast<long double>(r) * static_cast<long double>(r) < static_cast<long double>(m)) {
        r = std::nextafter(r, std::numeric_limits<double>::infinity());
    }
    return BallSpec{r, Norm::euclidean};
}

ConfinedSampler::ConfinedSampler(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget)
    : horizon_(n), ball_(ball), orbits_(OrbitSpace::lattice_ball(d, ball, budget)), extent_(ball.extent()) {
    if (!orbits_.find(Site::origin(d))) {
        throw DomainError("origin is not inside the ball");
    }
    const auto side = static_cast<std::uint64_t>(2 * extent_ + 1);
    double cells = 1;
    stride_.resize(static_cast<std::size_t>(d));
    for (int i = d - 1; i >= 0; --i) {
        stride_[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(cells);
        cells *= static_cast<double>(side);
    }
    const std::size_t m = orbits_.size();
    budget.require_bytes(cells * sizeof(std::int32_t) + (static_cast<double>(n) + 1) * m * sizeof(double),
                         "confined sampler tables");

    cell_orbit_.assign(static_cast<std::size_t>(cells), -1);
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), -extent_);
    for (std::size_t idx = 0; idx < cell_orbit_.size(); ++idx) {
        if (auto o = orbits_.find(x)) {
            cell_orbit_[idx] = static_cast<std::int32_t>(*o);
        }
        for (int i = d - 1; i >= 0; --i) {
            auto& v = x[static_cast<std::size_t>(i)];
            if (v < extent_) {
                ++v;
                break;
            }
            v = -extent_;
        }
    }

    h_.assign((n + 1) * m, 0.0);
    log_scale_.assign(n + 1, 0.0);
    std::fill(h_.begin() + static_cast<std::ptrdiff_t>(n * m), h_.end(), 1.0);
    for (std::uint64_t k = n; k-- > 0;) {
        std::span<const double> in(h_.data() + (k + 1) * m, m);
        std::span<double> out(h_.data() + k * m, m);
        apply_walk_operator(orbits_, in, m, out);
        const double top = *std::max_element(out.begin(), out.end());
        if (!(top > 0)) {
            // Nothing survives; every h_j with j <= k is zero.
            std::fill(h_.begin(), h_.begin() + static_cast<std::ptrdiff_t>((k + 1) * m), 0.0);
            for (std::uint64_t j = 0; j <= k; ++j) {
                log_scale_[j] = -std::numeric_limits<double>::infinity();
            }
            break;
        }
        for (auto& v : out) {
            v /= top;
        }
        log_scale_[k] = log_scale_[k + 1] + std::log(top);
    }
}

std::int64_t ConfinedSampler::cell(std::span<const std::int64_t> x) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < -extent_ || x[i] > extent_) {
            return -1;
        }
        idx += (x[i] + extent_) * stride_[i];
    }
    return idx;
}

double ConfinedSampler::log_h(std::uint64_t k, const Site& x) const {
    if (k > horizon_ || x.dim() != dim()) {
        throw DomainError("confined sampler lookup out of range");
    }
    const std::int64_t c = cell(x.coords());
    const std::int32_t o = c < 0 ? -1 : cell_orbit_[static_cast<std::size_t>(c)];
    if (o < 0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(h_[k * orbits_.size() + static_cast<std::size_t>(o)]) + log_scale_[k];
}

double ConfinedSampler::h(std::uint64_t k, const Site& x) const { return std::exp(log_h(k, x)); }

Trajectory ConfinedSampler::sample(RngStream& rng) const {
    const int d = dim();
    const auto dim = static_cast<std::size_t>(d);
    if (!std::isfinite(log_scale_[0])) {
        throw DomainError("the walk cannot stay in this ball for the whole horizon");
    }
    const std::size_t m = orbits_.size();
    std::vector<std::int64_t> flat((horizon_ + 1) * dim, 0);
    std::int64_t idx = cell(std::span<const std::int64_t>(flat.data(), dim));
    std::array<double, 2 * kMaxDim> w{};
    for (std::uint64_t k = 0; k < horizon_; ++k) {
        const double* next = h_.data() + (k + 1) * m;
        double total = 0;
        const std::int64_t* cur = flat.data() + k * dim;
        for (int dir = 0; dir < 2 * d; ++dir) {
            const auto i = static_cast<std::size_t>(dir >> 1);
            const std::int64_t coord = cur[i] + ((dir & 1) ? -1 : 1);
            double v = 0;
            if (coord >= -extent_ && coord <= extent_) {
                const std::int64_t o =
                    cell_orbit_[static_cast<std::size_t>(idx + ((dir & 1) ? -stride_[i] : stride_[i]))];
                v = o < 0 ? 0.0 : next[o];
            }
            total += v;
            w[static_cast<std::size_t>(dir)] = total;
        }
        const double u = rng.uniform() * total;
        int dir = 0;
        while (dir < 2 * d - 1 && !(u < w[static_cast<std::size_t>(dir)])) {
            ++dir;
        }
        // Skip zero-weight moves that a boundary draw could land on.
        while (dir > 0 && w[static_cast<std::size_t>(dir)] == w[static_cast<std::size_t>(dir - 1)]) {
            --dir;
        }
        std::copy_n(cur, dim, flat.data() + (k + 1) * dim);
        apply_move(std::span<std::int64_t>(flat.data() + (k + 1) * dim, dim), static_cast<std::uint32_t>(dir));
        const auto i = static_cast<std::size_t>(dir >> 1);
        idx += (dir & 1) ? -stride_[i] : stride_[i];
    }
    return Trajectory(d, std::move(flat));
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("linear fit needs at least two paired points");
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0)) {
        throw DomainError("degenerate fit: all abscissae are equal");
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) {
        throw DomainError("exponent fit needs at least 3 points");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& [n, neg_log_p] : points) {
        if (!(n > 0) || !(neg_log_p > 0) || !std::isfinite(neg_log_p)) {
            throw DomainError("exponent fit needs n > 0 and p in (0, 1)");
        }
        lx.push_back(std::log(n));
        ly.push_back(std::log(neg_log_p));
    }
    const LinearFit lf = linear_fit(lx, ly);
    ExponentFit f;
    f.exponent = lf.slope;
    f.prefactor = std::exp(lf.intercept);
    f.r_squared = lf.r_squared;
    f.points = points;
    return f;
}

VisitedFraction visited_fraction_experiment(const ConfinedSampler& sampler, double delta0, double eps0,
                                            std::uint64_t samples, const McConfig& cfg) {
    if (!(delta0 > 0 && delta0 < 1) || !(eps0 > 0 && eps0 < 1)) {
        throw DomainError("delta0 and eps0 must lie in (0, 1)");
    }
    const std::uint64_t n = sampler.horizon();
    const auto ball = static_cast<double>(sampler.ball_size());
    if (static_cast<double>(n) < ball) {
        throw DomainError("need n >= |B(r)|");
    }
    VisitedFraction out;
    out.ball_size = sampler.ball_size();
    out.level = delta0 * static_cast<double>(n) / ball;
    out.required_sites = eps0 * ball;
    const double silt_floor = static_cast<double>(n) * static_cast<double>(n) / ball;
    auto parts = run_chunks<HitCount>(samples, cfg, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        HitCount c;
        for (std::uint64_t i = b; i < e; ++i) {
            const auto field = local_times(sampler.sample(rng));
            const auto s = summarize(field);
            c.violations += static_cast<double>(s.range) > ball || !(static_cast<double>(s.silt) > silt_floor);
            c.hits += static_cast<double>(level_set_size(field, out.level)) >= out.required_sites;
        }
        return c;
    });
    std::uint64_t hits = 0;
    for (const auto& p : parts) {
        hits += p.hits;
        out.audit_violations += p.violations;
    }
    out.frequency = TailEstimate::from_counts(hits, samples, "|{l > delta0 n/|B|}| >= eps0 |B|");
    return out;
}

VisitedFraction visited_fraction_experiment(int d, std::uint64_t n, const BallSpec& ball, double delta0,
                                            double eps0, std::uint64_t samples, const McConfig& cfg) {
    return visited_fraction_experiment(ConfinedSampler(d, n, ball, cfg.budget), delta0, eps0, samples, cfg);
}

namespace {

struct MomentSums {
    std::vector<double> size, size2, mass, mass2, mass4;
};

double mean_and_se(double sum, double sum2, double count, double& se) {
    const double mean = sum / count;
    const double var = count > 1 ? std::max(0.0, (sum2 - count * mean * mean) / (count - 1)) : 0.0;
    se = std::sqrt(var / count);
    return mean;
}

}  // namespace

std::vector<LevelMoments> level_moment_mc(int d, std::uint64_t n, const std::vector<double>& zs,
                                          std::uint64_t samples, const McConfig& cfg) {
    check_dimension(d);
    if (samples == 0) {
        throw DomainError("samples must be >= 1");
    }
    const std::size_t nz = zs.size();
    auto parts = run_chunks<MomentSums>(samples, cfg, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        MomentSums s;
        for (auto* v : {&s.size, &s.size2, &s.mass, &s.mass2, &s.mass4}) {
            v->assign(nz, 0.0);
        }
        for (std::uint64_t i = b; i < e; ++i) {
            const auto first = LocalTimeField::sample_walk(d, n, rng, cfg.budget);
            const auto second = LocalTimeField::sample_walk(d, n, rng, cfg.budget);
            for (std::size_t j = 0; j < nz; ++j) {
                const SiteSet level = level_set(first, zs[j]);
                const auto size = static_cast<double>(level.size());
                const auto mass = static_cast<double>(restricted_mass(second, level));
                s.size[j] += size;
                s.size2[j] += size * size;
                s.mass[j] += mass;
                s.mass2[j] += mass * mass;
                s.mass4[j] += mass * mass * mass * mass;
            }
        }
        return s;
    });
    std::vector<LevelMoments> out(nz);
    const auto count = static_cast<double>(samples);
    for (std::size_t j = 0; j < nz; ++j) {
        double size = 0, size2 = 0, mass = 0, mass2 = 0, mass4 = 0;
        for (const auto& p : parts) {
            size += p.size[j];
            size2 += p.size2[j];
            mass += p.mass[j];
            mass2 += p.mass2[j];
            mass4 += p.mass4[j];
        }
        auto& m = out[j];
        m.z = zs[j];
        m.samples = samples;
        m.mean_size = mean_and_se(size, size2, count, m.se_size);
        m.mean_mass = mean_and_se(mass, mass2, count, m.se_mass);
        m.mean_mass2 = mean_and_se(mass2, mass4, count, m.se_mass2);
    }
    return out;
}

LevelMoments level_moment_mc(int d, std::uint64_t n, double z, std::uint64_t samples, const McConfig& cfg) {
    return level_moment_mc(d, n, std::vector<double>{z}, samples, cfg).front();
}

LevelDecay level_decay(int d, std::uint64_t n, const std::vector<double>& zs, std::uint64_t samples,
                       const McConfig& cfg) {
    LevelDecay out;
    out.moments = level_moment_mc(d, n, zs, samples, cfg);
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& m : out.moments) {
        if (m.mean_size > 0) {
            x.push_back(m.z);
            y.push_back(std::log(m.mean_size));
        }
    }
    if (x.size() < 3) {
        throw DomainError("too few non-empty level sets to fit a decay rate");
    }
    out.fit = linear_fit(x, y);
    out.kappa = -out.fit.slope;
    return out;
}

}  // namespace siltlab
