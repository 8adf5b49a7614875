#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "siltlab/lattice.hpp"
#include "siltlab/local_time.hpp"
#include "siltlab/parallel.hpp"
#include "siltlab/rare_event.hpp"

namespace siltlab {

// Symmetric scenery with log P(eta > t) ~ -c t^alpha.
struct SceneryParams {
    double alpha = 1.0;
    double c = 1.0;

    void validate() const;
    // E[eta^2] = c^(-2/alpha) Gamma(1 + 2/alpha)
    double second_moment() const;
};

// i.i.d. field eta(x) = sign * (E / c)^(1/alpha), generated lazily from a
// keyed hash of (seed, x). Nothing is stored.
class Scenery {
  public:
    Scenery(std::uint64_t seed, SceneryParams params);

    std::uint64_t seed() const { return seed_; }
    const SceneryParams& params() const { return params_; }

    double value(std::span<const std::int64_t> x) const;
    double value(const Site& x) const { return value(x.coords()); }
    double value_packed(PackedSite key) const;

  private:
    double from_bits(std::uint32_t sign_word, std::uint64_t mantissa_bits) const;

    std::uint64_t seed_;
    SceneryParams params_;
    double inv_alpha_;
};

// X_n = sum_k eta(S_k)
double rwrs_sum(const Trajectory& traj, const Scenery& scenery);
// sum_x eta(x) l_n(x), equal to rwrs_sum up to rounding
double rwrs_space_sum(const LocalTimeField& field, const Scenery& scenery);

enum class Region { I, II, III, IV_out_of_scope, Boundary, Invalid };

const char* to_string(Region region);

struct RegionResult {
    Region region = Region::Invalid;
    std::optional<double> zeta;
};

// Membership in regions I, II and III as separate predicates, for
// alpha >= 1 and 1/2 < beta < 1.
bool in_region(Region region, double alpha, double beta);

// Moderate-deviation speed exponent: -log P(X_n > y n^beta) grows like n^zeta.
RegionResult zeta_exponent(double alpha, double beta);

struct RwrsTail {
    TailEstimate upper;  // X_n > y n^beta
    TailEstimate lower;  // X_n < -y n^beta
    double threshold = 0;
};

// Annealed tails of X_n: every sample draws a fresh walk and a fresh scenery.
RwrsTail mc_tail_rwrs(std::uint64_t n, double beta, double y, const SceneryParams& params,
                      std::uint64_t samples, const McConfig& cfg, int d = 3);

struct RegionIIIProbe {
    double u = 0;  // |B(r_n)| = n^u
    double v = 0;  // 1 - u; level of the heavily visited set
    double zeta = 0;
    BallSpec ball;
    std::uint64_t ball_size = 0;
    double level = 0;           // delta0 n^v
    double required_sites = 0;  // eps0 n^u
    TailEstimate visited;       // |{x : l_n(x) > delta0 n^v}| > eps0 n^u under confinement
    double log_confinement = 0;  // log P(sigma(r_n) > n)
    // Scenery factor: sum of m = ceil(eps0 n^u) scenery values above y n^(beta - v).
    std::uint64_t scenery_terms = 0;
    double scenery_threshold = 0;
    TailEstimate scenery_tail;
    double scenery_log_gaussian = 0;  // -t^2 / (2 m E[eta^2])
};

RegionIIIProbe region_iii_lower_bound_probe(std::uint64_t n, double beta, double delta0, double eps0,
                                            std::uint64_t samples, const McConfig& cfg,
                                            const SceneryParams& params = {}, double y = 1.0);

}  // namespace siltlab
