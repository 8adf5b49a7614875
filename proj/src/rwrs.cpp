#include "siltlab/rwrs.hpp"

#include <cmath>
#include <limits>

namespace siltlab {

void SceneryParams::validate() const {
    if (!(alpha >= 1) || !std::isfinite(alpha)) {
        throw DomainError("scenery tail exponent alpha must be >= 1");
    }
    if (!(c > 0) || !std::isfinite(c)) {
        throw DomainError("scenery tail constant c must be positive");
    }
}

double SceneryParams::second_moment() const { return std::pow(c, -2.0 / alpha) * std::tgamma(1.0 + 2.0 / alpha); }

Scenery::Scenery(std::uint64_t seed, SceneryParams params) : seed_(seed), params_(params) {
    params_.validate();
    inv_alpha_ = 1.0 / params_.alpha;
}

double Scenery::from_bits(std::uint32_t sign_word, std::uint64_t mantissa_bits) const {
    const double u = (static_cast<double>(mantissa_bits >> 11) + 1.0) * 0x1.0p-53;
    const double e = -std::log(u);
    const double magnitude = params_.alpha == 1.0 ? e / params_.c : std::pow(e / params_.c, inv_alpha_);
    return (sign_word & 1u) ? -magnitude : magnitude;
}

double Scenery::value_packed(PackedSite key) const {
    const Philox4x32Counter ctr{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                                static_cast<std::uint32_t>(key >> 64), static_cast<std::uint32_t>(key >> 96)};
    const Philox4x32Key k{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    const auto w = philox4x32(ctr, k);
    return from_bits(w[0], (std::uint64_t{w[1]} << 32) | w[2]);
}

double Scenery::value(std::span<const std::int64_t> x) const {
    const SitePacker packer(static_cast<int>(x.size()));
    return value_packed(packer.pack(x));
}

double rwrs_sum(const Trajectory& traj, const Scenery& scenery) {
    const SitePacker packer(traj.dim());
    double acc = 0;
    for (std::uint64_t k = 0; k < traj.size(); ++k) {
        acc += scenery.value_packed(packer.pack(traj.at(k)));
    }
    return acc;
}

double rwrs_space_sum(const LocalTimeField& field, const Scenery& scenery) {
    double acc = 0;
    for (const auto& e : field.entries()) {
        acc += static_cast<double>(e.count) * scenery.value_packed(e.key);
    }
    return acc;
}

const char* to_string(Region region) {
    switch (region) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV_out_of_scope: return "IV_out_of_scope";
        case Region::Boundary: return "Boundary";
        case Region::Invalid: return "Invalid";
    }
    return "Invalid";
}

namespace {

// (1 + alpha) / (4 - alpha)^+, infinite once alpha >= 4
double frontier(double alpha) {
    return alpha >= 4 ? std::numeric_limits<double>::infinity() : (1 + alpha) / (4 - alpha);
}

}  // namespace

bool in_region(Region region, double alpha, double beta) {
    if (!(alpha >= 1) || !(beta > 0.5) || !(beta < 1)) {
        return false;
    }
    switch (region) {
        case Region::I: return beta <= 2.0 / 3.0;
        case Region::II: return alpha < 1.5 && beta > frontier(alpha);
        case Region::III: return beta > 2.0 / 3.0 && beta < std::min(1.0, frontier(alpha));
        default: return false;
    }
}

RegionResult zeta_exponent(double alpha, double beta) {
    RegionResult r;
    if (!(alpha >= 1) || !(beta > 0.5) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        r.region = Region::Invalid;
    } else if (beta >= 1) {
        r.region = Region::IV_out_of_scope;
    } else if (in_region(Region::I, alpha, beta)) {
        r.region = Region::I;
        r.zeta = 2 * beta - 1;
    } else if (in_region(Region::II, alpha, beta)) {
        r.region = Region::II;
        r.zeta = beta * alpha / (1 + alpha);
    } else if (in_region(Region::III, alpha, beta)) {
        r.region = Region::III;
        r.zeta = 0.8 * beta - 0.2;
    } else {
        r.region = Region::Boundary;
    }
    return r;
}

namespace {

struct TwoSided {
    std::uint64_t upper = 0;
    std::uint64_t lower = 0;
};

}  // namespace

RwrsTail mc_tail_rwrs(std::uint64_t n, double beta, double y, const SceneryParams& params,
                      std::uint64_t samples, const McConfig& cfg, int d) {
    check_dimension(d);
    params.validate();
    if (!(beta > 0.5)) {
        throw DomainError("beta must exceed 1/2");
    }
    if (samples == 0) {
        throw DomainError("samples must be >= 1");
    }
    RwrsTail out;
    out.threshold = y * std::pow(static_cast<double>(n), beta);
    auto parts = run_chunks<TwoSided>(samples, cfg, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        TwoSided c;
        for (std::uint64_t i = b; i < e; ++i) {
            const Scenery scenery(rng.next_u64(), params);
            const double x = rwrs_space_sum(LocalTimeField::sample_walk(d, n, rng, cfg.budget), scenery);
            c.upper += x > out.threshold;
            c.lower += x < -out.threshold;
        }
        return c;
    });
    TwoSided total;
    for (const auto& p : parts) {
        total.upper += p.upper;
        total.lower += p.lower;
    }
    out.upper = TailEstimate::from_counts(total.upper, samples, "X_n > y n^beta");
    out.lower = TailEstimate::from_counts(total.lower, samples, "X_n < -y n^beta");
    return out;
}

RegionIIIProbe region_iii_lower_bound_probe(std::uint64_t n, double beta, double delta0, double eps0,
                                            std::uint64_t samples, const McConfig& cfg,
                                            const SceneryParams& params, double y) {
    params.validate();
    const RegionResult region = zeta_exponent(params.alpha, beta);
    if (region.region != Region::III) {
        throw DomainError("(alpha, beta) is not in region III");
    }
    if (!(delta0 > 0 && delta0 < 1) || !(eps0 > 0 && eps0 < 1)) {
        throw DomainError("delta0 and eps0 must lie in (0, 1)");
    }
    if (samples == 0) {
        throw DomainError("samples must be >= 1");
    }
    constexpr int d = 3;
    const auto nd = static_cast<double>(n);
    RegionIIIProbe p;
    p.u = 9.0 / 5.0 - 6.0 * beta / 5.0;
    p.v = 1.0 - p.u;
    p.zeta = *region.zeta;
    p.ball = radius_for_cardinality(d, std::pow(nd, p.u));
    const ConfinedSampler sampler(d, n, p.ball, cfg.budget);
    p.ball_size = sampler.ball_size();
    p.level = delta0 * std::pow(nd, p.v);
    p.required_sites = eps0 * std::pow(nd, p.u);
    p.log_confinement = sampler.log_survival();

    auto hits = run_chunks<std::uint64_t>(samples, cfg, [&](RngStream& rng, std::uint64_t b, std::uint64_t e) {
        std::uint64_t c = 0;
        for (std::uint64_t i = b; i < e; ++i) {
            const auto field = local_times(sampler.sample(rng));
            c += static_cast<double>(level_set_size(field, p.level)) > p.required_sites;
        }
        return c;
    });
    std::uint64_t visited = 0;
    for (auto h : hits) {
        visited += h;
    }
    p.visited = TailEstimate::from_counts(visited, samples, "|{l > delta0 n^v}| > eps0 n^u");

    p.scenery_terms = static_cast<std::uint64_t>(std::ceil(p.required_sites));
    p.scenery_threshold = y * std::pow(nd, beta - p.v);
    // The scenery factor uses its own streams, offset past the walk samples.
    McConfig scenery_cfg = cfg;
    scenery_cfg.seed = cfg.seed ^ 0x5CE7E4Bull;
    auto tail = run_chunks<std::uint64_t>(samples, scenery_cfg, [&](RngStream& rng, std::uint64_t b,
                                                                    std::uint64_t e) {
        std::uint64_t c = 0;
        for (std::uint64_t i = b; i < e; ++i) {
            const Scenery scenery(rng.next_u64(), params);
            double s = 0;
            for (std::uint64_t j = 0; j < p.scenery_terms; ++j) {
                s += scenery.value_packed(static_cast<PackedSite>(j));
            }
            c += s > p.scenery_threshold;
        }
        return c;
    });
    std::uint64_t scenery_hits = 0;
    for (auto h : tail) {
        scenery_hits += h;
    }
    p.scenery_tail = TailEstimate::from_counts(scenery_hits, samples, "sum of m scenery values > y n^(beta-v)");
    p.scenery_log_gaussian = -p.scenery_threshold * p.scenery_threshold /
                             (2.0 * static_cast<double>(p.scenery_terms) * params.second_moment());
    return p;
}

}  // namespace siltlab
