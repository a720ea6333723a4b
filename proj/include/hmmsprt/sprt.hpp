#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hmmsprt/model.hpp"

namespace hmmsprt {

struct Thresholds {
    double log_lower;  // A = ln(alpha / (1 - beta)), < 0
    double log_upper;  // B = ln((1 - alpha) / beta), > 0
    double alpha;      // 0 when only the log-scale bound is representable
    double beta;

    static Thresholds from_error_bounds(double alpha, double beta);
    // For extreme bounds like ln(alpha) = -800 that underflow a double.
    static Thresholds from_log_error_bounds(double ln_alpha, double ln_beta);
};

// ln(p/q) without overflow for huge numerators/denominators.
double log_of_rational(const Rational& r);

// Exact-rational likelihood tracker. After each step both belief
// vectors are jointly rescaled by 1/(||x|| + ||y||), which leaves the
// ratio untouched and keeps the rationals small.
class ExactTracker {
  public:
    ExactTracker(const Hmm& h, const Dist& pi1, const Dist& pi2);

    void step(int letter);  // throws ImpossibleObservation when ||y Psi(a)|| = 0
    bool x_dead() const { return x_dead_; }
    std::size_t steps() const { return steps_; }
    Rational likelihood() const;          // exact L_n (0 once dead)
    double log_likelihood_ratio() const;  // -inf once dead
    const RatVector& x() const { return x_; }
    const RatVector& y() const { return y_; }

  private:
    const Hmm& h_;
    RatVector x_, y_;
    bool x_dead_ = false;
    std::size_t steps_ = 0;
};

// Log-domain tracker for long runs. Each belief vector is renormalized
// by its own norm with the removed scale accumulated in log space, so
// the tracked ratio never underflows even at ln L ~ -10^3. Supports are
// tracked exactly from the zero pattern; death decisions never depend
// on floating point.
class LogTracker {
  public:
    enum class Status { Ok, XDied, YDied };

    LogTracker(const HmmSim& sim, const Dist& pi1, const Dist& pi2);

    Status step(int letter);
    bool x_dead() const { return x_dead_; }
    std::size_t steps() const { return steps_; }
    double log_likelihood_ratio() const;

  private:
    const HmmSim& sim_;
    std::vector<double> x_, y_, scratch_;
    std::vector<std::uint8_t> x_supp_, y_supp_, supp_scratch_;
    double log_cx_ = 0.0, log_cy_ = 0.0;
    bool x_dead_ = false;
    std::size_t steps_ = 0;
};

enum class SprtVerdict { Pi1, Pi2, Undecided };

struct SprtOutcome {
    SprtVerdict verdict = SprtVerdict::Undecided;
    std::optional<std::size_t> stopped_at;
    double final_log_ratio = 0.0;
    bool zero_mass = false;  // stopped because ||pi1 Psi(w)|| hit exact 0
};

enum class TrackerMode { Exact, LogDomain };

using LetterSource = std::function<int()>;

// Runs a single SPRT: stops at the first n with ln L_n <= A or >= B
// (inclusive), Undecided after max_steps.
SprtOutcome run_sprt(const Hmm& h, const Dist& pi1, const Dist& pi2,
                     const Thresholds& th, const LetterSource& stream,
                     std::size_t max_steps,
                     TrackerMode mode = TrackerMode::LogDomain);

// First n with ||pi1 Psi(w_n)|| = 0 exactly, or nullopt within max_steps.
std::optional<std::size_t> n_bottom(const Hmm& h, const Dist& pi1,
                                    const LetterSource& stream,
                                    std::size_t max_steps);

struct ReplicaOutcome {
    std::size_t replica = 0;
    SprtVerdict verdict = SprtVerdict::Undecided;
    std::optional<std::size_t> stopped_at;
    double final_log_ratio = 0.0;
    bool zero_mass = false;
};

struct SprtStats {
    std::size_t replicas = 0;
    std::size_t count_pi1 = 0, count_pi2 = 0, count_undecided = 0;
    // fraction of decided-wrong replicas w.r.t. the sampling hypothesis
    double error_rate = 0.0, error_stderr = 0.0;
    double undecided_fraction = 0.0;
    double mean_stopping_time = 0.0;  // over stopped replicas
    double stopping_quartiles[3] = {0, 0, 0};
    std::size_t zero_mass_count = 0;
    double zero_mass_mean_n = 0.0;
    std::size_t threshold_count = 0;
    double threshold_mean_n = 0.0;
    std::vector<ReplicaOutcome> outcomes;
};

// Monte Carlo harness: replicas are sampled from pi1 or pi2, each with
// its own derived RNG stream; results are merged in replica order so
// the output is independent of the thread count.
SprtStats mc_sprt(const Hmm& h, const Dist& pi1, const Dist& pi2,
                  const Thresholds& th, std::size_t replicas,
                  std::size_t max_steps, std::uint64_t seed,
                  bool sample_from_pi1, unsigned threads = 0);

// Series of ln L_0 .. ln L_n on a single sampled run (-inf once dead).
std::vector<double> loglik_series(const Hmm& h, const Dist& sampler,
                                  const Dist& pi1, const Dist& pi2,
                                  std::size_t n, std::uint64_t seed);

// (last - value at burn-in) / steps between; demands no -inf after burn-in.
double slope_estimate(const std::vector<double>& series, double burn_in_fraction);

}  // namespace hmmsprt
