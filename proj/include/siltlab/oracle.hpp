#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "siltlab/lattice.hpp"
#include "siltlab/orbits.hpp"

namespace siltlab {

// P_0(S_k = x) for k = 0..n, stored per symmetry orbit. Slice k holds the
// orbits with |x|_1 <= k.
class TransitionTable {
  public:
    int dim() const { return orbits_.dim(); }
    std::uint64_t horizon() const { return offsets_.size() - 2; }
    const OrbitSpace& orbits() const { return orbits_; }

    // Per-site probabilities indexed by orbit, length orbits().prefix(k).
    std::span<const double> slice(std::uint64_t k) const {
        return {data_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }
    double prob(std::uint64_t k, std::span<const std::int64_t> x) const;
    double prob(std::uint64_t k, const Site& x) const { return prob(k, x.coords()); }
    double slice_sum(std::uint64_t k) const;

  private:
    friend TransitionTable transition_probs(int d, std::uint64_t n, const Budget& budget);
    OrbitSpace orbits_;
    std::vector<std::size_t> offsets_;
    std::vector<double> data_;
};

TransitionTable transition_probs(int d, std::uint64_t n, const Budget& budget = {});

// p_k(0) for k = 0..n, computed without storing the full table.
std::vector<double> return_probabilities(int d, std::uint64_t n, const Budget& budget = {});

// E[sum_x l_n(x)^2] = (n + 1) + 2 sum_{j=1}^n (n + 1 - j) p_j(0)
double expected_silt(int d, std::uint64_t n, const Budget& budget = {});

// E|R_n| = sum_{k=0}^n P(no return to 0 during 1..k), from first-return
// probabilities.
double expected_range(int d, std::uint64_t n, const Budget& budget = {});

// E[I_n] = sum_x (sum_{k<=n} p_k(x))^2 for two independent walks from 0.
double expected_mutual_intersection(int d, std::uint64_t n, const Budget& budget = {});

// P_0(S_k = x, sigma(r) > k) for k = 0..n on the ball. Slices are stored
// conditioned on survival, with the log survival probability kept apart so
// that long horizons do not underflow.
class KilledTable {
  public:
    int dim() const { return orbits_.dim(); }
    std::uint64_t horizon() const { return log_survival_.size() - 1; }
    const BallSpec& ball() const { return ball_; }
    const OrbitSpace& orbits() const { return orbits_; }

    // P(S_k = x | sigma > k) per orbit.
    std::span<const double> conditional_slice(std::uint64_t k) const {
        const std::size_t m = orbits_.size();
        return {data_.data() + k * m, m};
    }
    double prob(std::uint64_t k, std::span<const std::int64_t> x) const;
    double prob(std::uint64_t k, const Site& x) const { return prob(k, x.coords()); }
    // log P(sigma > k)
    double log_survival(std::uint64_t k) const { return log_survival_[k]; }
    double survival(std::uint64_t k) const;

  private:
    friend KilledTable killed_probs(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget);
    BallSpec ball_;
    OrbitSpace orbits_;
    std::vector<double> data_;
    std::vector<double> log_survival_;
};

KilledTable killed_probs(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget = {});

// P(sigma(r) > n), exact up to rounding.
double survival_prob(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget = {});
double log_survival_prob(int d, std::uint64_t n, const BallSpec& ball, const Budget& budget = {});

struct EigenResult {
    double eigenvalue = 0;
    OrbitSpace orbits;
    std::vector<double> eigenfunction;  // per orbit, sup-normalised to 1
    double residual = 0;                // sup |K phi - lambda phi|
    std::uint64_t iterations = 0;

    double value(const Site& x) const;
};

// Principal eigenpair of the killed walk operator on the ball, by power
// iteration on the lazy operator (I + K)/2 (the bipartite walk has -lambda in
// its spectrum too).
EigenResult principal_eigen(int d, const BallSpec& ball, double tolerance = 1e-12,
                            std::uint64_t max_iterations = 2'000'000, const Budget& budget = {});

struct PathOutcome {
    std::uint64_t silt = 0;
    std::uint64_t range = 0;
    std::uint64_t paths = 0;
};

// Exact joint law of (silt, range) over all (2d)^n paths.
struct PathDistribution {
    int dim = 1;
    std::uint64_t horizon = 0;
    std::uint64_t total_paths = 1;
    std::vector<PathOutcome> outcomes;  // sorted by (silt, range)

    double probability(const PathOutcome& o) const {
        return static_cast<double>(o.paths) / static_cast<double>(total_paths);
    }
    double mean_silt() const;
    double mean_range() const;
    double prob_silt_above(double t) const;   // P(silt > t)
    double prob_range_below(double t) const;  // P(range < t)
};

inline constexpr double kMaxEnumeratedPaths = 1e8;

PathDistribution enumerate_paths(int d, std::uint64_t n);

enum class ScanMode { reduced, direct };

struct GaussianComparison {
    double value = 0;  // max ratio; 0 if no admissible pair
    std::uint64_t argmax_k = 0;
    Site argmax_x;
    std::uint64_t pairs = 0;  // admissible (k, orbit or site) pairs scanned
};

// max over {|x| > sqrt(n), k < floor(n/2), p_{n-k}(x) > 0} of
// p_{floor(n/2)-k}(x) / p_{n-k}(x).
GaussianComparison gaussian_comparison_constant(const TransitionTable& table, Norm norm = Norm::euclidean,
                                                ScanMode mode = ScanMode::reduced);
GaussianComparison gaussian_comparison_constant(int d, std::uint64_t n, Norm norm = Norm::euclidean,
                                                ScanMode mode = ScanMode::reduced,
                                                const Budget& budget = {});

// Upper bound on P(sum_i (X_i - E X) > x_n) for positive i.i.d. X with
// P(X > u) <= C exp(-u):
//   exp(c_u n max(g^2 E[X^2], (g^2 E[X^2])^(1-g)) - g x_n / 2),  c_u = 3 + e + C.
double ld_bound_log_rhs(double n, double gamma, double ex2, double c, double x_n);
double ld_bound_rhs(double n, double gamma, double ex2, double c, double x_n);

// Exact rational arithmetic for d = 1, n <= 64.
using Rational = boost::multiprecision::cpp_rational;
inline constexpr std::uint64_t kMaxExactHorizon = 64;
Rational exact_return_probability_1d(std::uint64_t k);
Rational exact_expected_silt_1d(std::uint64_t n);

// Dense export of a table over the box [lo, hi]^d, row-major with the first
// coordinate slowest.
struct DenseTable {
    enum class Kind : std::uint32_t { free = 0, killed = 1 };
    Kind kind = Kind::free;
    int dim = 1;
    std::uint64_t horizon = 0;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    BallSpec ball{};
    std::vector<double> values;

    std::uint64_t side() const { return static_cast<std::uint64_t>(hi - lo + 1); }
    std::uint64_t slice_size() const;
    double at(std::uint64_t k, std::span<const std::int64_t> x) const;
};

inline constexpr std::uint32_t kTableFormatVersion = 1;

DenseTable to_dense(const TransitionTable& table, const Budget& budget = {});
DenseTable to_dense(const KilledTable& table, const Budget& budget = {});
void write_table(const std::filesystem::path& path, const DenseTable& table);
DenseTable read_table(const std::filesystem::path& path);

}  // namespace siltlab
