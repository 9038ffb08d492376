#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdist/oracle.hpp"
#include "mdist/rng.hpp"
#include "mdist/rowdist.hpp"

namespace mdist::estimator {

/// Accuracy target plus every tunable constant the estimation pipeline uses.
/// paper_defaults() is the conforming configuration; relaxed() trades the
/// conforming flag for desk-scale speed.
struct EstimatorParams {
  double epsilon = 0.25;  // in (0, 1/2)

  double bucket_ratio_divisor = 50.0;  // bucket ratio = 1 + epsilon/divisor
  double tau_divisor = 40.0;           // tau = (|G|/n) sqrt(eps T)/(div * t)
  double ss_divisor = 1600.0;          // additive slack term eps*T/divisor
  double quit_slack_divisor = 10.0;    // halving quits when T <= m/(1+eps/div)
  double sampler_constant = 50.0;      // per-level divider inside the sampler

  double psi_constant = 1.0;  // psi = c * (log2 n)^4 / eps^4 ...
  double psi_override = 0.0;  // ... unless overridden explicitly (> 0)

  double gamma_multiplier = 1.0;  // |G| = ceil(g * n * log2(n)^2 / (eps^2 sqrt T))
  double eta_exponent = 3.0;      // inner failure probability eta = n^-exponent

  bool force_sampling = false;  // disable the exact shortcut in row estimates

  double ratio() const { return 1.0 + epsilon / bucket_ratio_divisor; }
  double beta() const { return epsilon / bucket_ratio_divisor; }
  double eta(index_t n) const;
  double psi(index_t n) const;
  std::uint64_t gamma_size(index_t n, double T) const;
  int bucket_count(index_t n) const;
  double tau(std::uint64_t gamma, index_t n, double T) const;
  bool conforming() const;

  static EstimatorParams paper_defaults(double epsilon);
  /// Divisors 8/8/1600, sampler constant 8, psi = (log2 n)^2 / eps^2, and
  /// gamma_multiplier tuned so |G| <= n for every guess above psi.
  static EstimatorParams relaxed(index_t n, double epsilon);

  /// Key-value text document ("key value" or "key=value" per line, '#'
  /// comments). Unknown keys are an error.
  static EstimatorParams from_file(const std::string& path, double epsilon,
                                   index_t n);
  void apply(const std::string& key, const std::string& value, index_t n);
};

struct GuessTooSmall : std::invalid_argument {
  GuessTooSmall(double T, double psi)
      : std::invalid_argument("guess " + std::to_string(T) +
                              " is below the threshold " +
                              std::to_string(psi) +
                              "; use the trivial estimator") {}
};

/// Bucket k holds values v with ratio^(k-1) <= v < ratio^k; values below 1
/// (including 0) map to the zero-bucket sentinel. Returns 0 for the
/// sentinel, else k >= 1.
int bucket_index(double a_hat_value, double ratio);

/// Sampled rows, their memoized distance estimates, and the induced bucket
/// structure of one guess run.
struct BucketTable {
  int t = 0;
  double ratio = 1.0;
  double tau = 0.0;
  std::vector<index_t> gamma;                 // with multiplicity
  std::vector<double> a_hat;                  // size n; -1 = never estimated
  std::vector<std::vector<index_t>> buckets;  // [1..t] slot lists (multiplicity)
  std::vector<index_t> zero_bucket;           // slots with a_hat < 1
  std::vector<int> large, small;              // partition of [1..t]
};

struct PhaseQueries {
  std::uint64_t row_phase = 0;      // effective binary, row-sample estimates
  std::uint64_t sampler_phase = 0;  // effective binary, mismatch sampling
  std::uint64_t total = 0;
};

struct GuessStep {
  double t_guess = 0;
  double m_hat = 0;
  std::string decision;  // "quit" | "continue"
};

struct EstimateReport {
  double d_hat = 0;
  double d_hat_l = 0;
  double d_hat_s = 0;
  std::map<int, double> zeta_hat;  // per large bucket
  PhaseQueries queries;
  std::vector<GuessStep> guess_trace;
  bool conforming = true;
  double epsilon = 0;
  index_t n = 0;
  std::uint64_t seed = 0;
  std::string mode;  // "guess" | "trivial" | "symmetric" | "arbitrary"
};

/// Test hooks: swap the randomized primitives for exact references to
/// isolate the bucketing and resampling logic, or observe the bucket table a
/// guess run built.
struct Backend {
  std::function<double(index_t row)> row_dist;       // distance estimate
  std::function<index_t(index_t row)> sample_col;    // mismatch-column draw
  std::function<void(const BucketTable&)> observe_buckets;
};

/// One guess run against a symmetric pair: sample rows with replacement,
/// estimate their distances once each (memoized), bucket them, estimate the
/// large-bucket mass directly and the small-bucket mass through mismatch
/// sampling. Requires T >= psi (throws GuessTooSmall otherwise).
EstimateReport guess_estimate(const OraclePair& pair,
                              const EstimatorParams& params, double T,
                              RngBundle& rngs, const Backend& backend = {});

/// Sums per-row distance estimates over all rows at accuracy epsilon and
/// per-row failure probability n^-10.
EstimateReport trivial_estimate(const OraclePair& pair,
                                const EstimatorParams& params,
                                RngBundle& rngs);

/// Guess-halving wrapper: T starts at n^2/2 and halves until a guess run
/// passes the quit test; if T falls below psi, falls through to the trivial
/// estimator. Requires symmetric oracles.
EstimateReport symm_estimate(const OraclePair& pair,
                             const EstimatorParams& params, RngBundle& rngs,
                             const Backend& backend = {});

/// Arbitrary square matrices: estimates the distances of the two mirrored
/// symmetric views at accuracy epsilon/2 each and returns half their sum.
EstimateReport arbitrary_estimate(MatrixOracle& a, MatrixOracle& b,
                                  const EstimatorParams& params,
                                  RngBundle& rngs, double eq_tol = 0.0);

/// Stable JSON rendering of a report (sorted keys; byte-identical for
/// identical inputs).
std::string report_to_json(const EstimateReport& report);

}  // namespace mdist::estimator
