#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/orbits.hpp"
#include "siltlab/parallel.hpp"

namespace siltlab {

struct TailEstimate {
    double p_hat = 0;
    double std_error = 0;  // sqrt(p (1 - p) / samples)
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    std::string event;

    static TailEstimate from_counts(std::uint64_t hits, std::uint64_t samples, std::string event);
};

// P(silt > n y) by plain Monte Carlo.
TailEstimate mc_tail_silt(int d, std::uint64_t n, double y, std::uint64_t samples, const McConfig& cfg);

struct RangeTail {
    TailEstimate estimate;
    // Samples with range < n / y but silt <= n y. Always zero by Jensen.
    std::uint64_t implication_violations = 0;
};

// P(|R_n| < n / y) by plain Monte Carlo, auditing each sample against the
// silt event.
RangeTail mc_tail_range(int d, std::uint64_t n, double y, std::uint64_t samples, const McConfig& cfg);

// Number of lattice sites with |x|_2^2 <= m.
std::uint64_t lattice_ball_cardinality(int d, std::uint64_t m);

// Smallest euclidean radius sqrt(m) whose ball holds at least `target` sites.
BallSpec radius_for_cardinality(int d, double target);

// Walk conditioned on staying in the ball up to time n, sampled exactly from
// the backward survival probabilities h_k(x) = P_x(sigma > n - k).
class ConfinedSampler {
  public:
    ConfinedSampler(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget = {});

    int dim() const { return orbits_.dim(); }
    std::uint64_t horizon() const { return horizon_; }
    const BallSpec& ball() const { return ball_; }
    std::uint64_t ball_size() const { return orbits_.cardinality(); }

    double h(std::uint64_t k, const Site& x) const;
    double log_h(std::uint64_t k, const Site& x) const;
    // h_0(0) = P(sigma > n)
    double survival() const { return h(0, Site::origin(dim())); }
    double log_survival() const { return log_h(0, Site::origin(dim())); }

    Trajectory sample(RngStream& rng) const;

  private:
    std::int64_t cell(std::span<const std::int64_t> x) const;

    std::uint64_t horizon_;
    BallSpec ball_;
    OrbitSpace orbits_;
    std::int64_t extent_;
    std::vector<std::int64_t> stride_;
    std::vector<std::int32_t> cell_orbit_;  // box cell -> orbit, -1 outside the ball
    // h_k per orbit divided by exp(log_scale_[k]), which keeps each slice's
    // maximum at 1.
    std::vector<double> h_;
    std::vector<double> log_scale_;
};

struct ExponentFit {
    double exponent = 0;   // rho in -log p = a n^rho
    double prefactor = 0;  // a
    double r_squared = 0;
    std::vector<std::pair<double, double>> points;  // (n, -log p)
};

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Least squares of log(-log p) against log n.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);

struct VisitedFraction {
    TailEstimate frequency;  // among confined samples
    std::uint64_t ball_size = 0;
    double level = 0;              // delta0 n / |B|
    double required_sites = 0;     // eps0 |B|
    std::uint64_t audit_violations = 0;  // range > |B| or silt <= n^2 / |B|
};

// Frequency of |{x : l_n(x) > delta0 n / |B|}| >= eps0 |B| under exact
// confinement to the ball.
VisitedFraction visited_fraction_experiment(int d, std::uint64_t n, const BallSpec& ball, double delta0,
                                            double eps0, std::uint64_t samples, const McConfig& cfg);
VisitedFraction visited_fraction_experiment(const ConfinedSampler& sampler, double delta0, double eps0,
                                            std::uint64_t samples, const McConfig& cfg);

struct LevelMoments {
    double z = 0;
    double mean_size = 0;  // E|D_n(z)|
    double se_size = 0;
    double mean_mass = 0;  // E[l~_n(D_n(z))]
    double se_mass = 0;
    double mean_mass2 = 0;  // E[l~_n(D_n(z))^2]
    double se_mass2 = 0;
    std::uint64_t samples = 0;
};

// Moments of the level set D_n(z) = {x : l_n(x) > z} of one walk, weighted by
// the local times of an independent second walk. All z share the samples.
std::vector<LevelMoments> level_moment_mc(int d, std::uint64_t n, const std::vector<double>& zs,
                                          std::uint64_t samples, const McConfig& cfg);
LevelMoments level_moment_mc(int d, std::uint64_t n, double z, std::uint64_t samples, const McConfig& cfg);

struct LevelDecay {
    std::vector<LevelMoments> moments;
    double kappa = 0;  // minus the slope of log E|D_n(z)| in z
    LinearFit fit;
};

LevelDecay level_decay(int d, std::uint64_t n, const std::vector<double>& zs, std::uint64_t samples,
                       const McConfig& cfg);

}  // namespace siltlab
