#include "hmmsprt/sprt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Thresholds Thresholds::from_error_bounds(double alpha, double beta) {
    if (!(alpha > 0 && alpha < 1) || !(beta > 0 && beta < 1))
        throw BadErrorBounds("alpha and beta must lie in (0,1)");
    if (!(alpha + beta < 1))
        throw BadErrorBounds("alpha + beta must be < 1");
    Thresholds th;
    th.alpha = alpha;
    th.beta = beta;
    th.log_lower = std::log(alpha / (1 - beta));
    th.log_upper = std::log((1 - alpha) / beta);
    return th;
}

Thresholds Thresholds::from_log_error_bounds(double ln_alpha, double ln_beta) {
    if (!(ln_alpha < 0) || !(ln_beta < 0))
        throw BadErrorBounds("ln(alpha) and ln(beta) must be negative");
    double alpha = std::exp(ln_alpha);  // may underflow to 0, that is fine
    double beta = std::exp(ln_beta);
    if (!(alpha + beta < 1))
        throw BadErrorBounds("alpha + beta must be < 1");
    Thresholds th;
    th.alpha = alpha;
    th.beta = beta;
    th.log_lower = ln_alpha - std::log1p(-beta);
    th.log_upper = std::log1p(-alpha) - ln_beta;
    return th;
}

double log_of_rational(const Rational& r) {
    if (r == 0) return -kInf;
    signed long ne, de;
    double nd = mpz_get_d_2exp(&ne, r.get_num().get_mpz_t());
    double dd = mpz_get_d_2exp(&de, r.get_den().get_mpz_t());
    return std::log(nd / dd) + (static_cast<double>(ne) - de) * std::log(2.0);
}

ExactTracker::ExactTracker(const Hmm& h, const Dist& pi1, const Dist& pi2)
    : h_(h), x_(pi1), y_(pi2) {
    check_dist(h, pi1);
    check_dist(h, pi2);
}

void ExactTracker::step(int letter) {
    RatVector nx = vec_mat(x_, h_.psi.at(letter));
    RatVector ny = vec_mat(y_, h_.psi.at(letter));
    Rational norm_y = l1_norm(ny);
    if (norm_y == 0)
        throw ImpossibleObservation("letter '" + h_.alphabet.at(letter) +
                                    "' has probability 0 under pi2 at step " +
                                    std::to_string(steps_ + 1));
    Rational norm_x = l1_norm(nx);
    Rational scale = 1 / (norm_x + norm_y);
    for (auto& e : nx) e *= scale;
    for (auto& e : ny) e *= scale;
    x_ = std::move(nx);
    y_ = std::move(ny);
    if (norm_x == 0) x_dead_ = true;
    ++steps_;
}

Rational ExactTracker::likelihood() const {
    if (x_dead_) return Rational(0);
    return l1_norm(x_) / l1_norm(y_);
}

double ExactTracker::log_likelihood_ratio() const {
    if (x_dead_) return -kInf;
    return log_of_rational(likelihood());
}

LogTracker::LogTracker(const HmmSim& sim, const Dist& pi1, const Dist& pi2)
    : sim_(sim),
      x_(sim.n),
      y_(sim.n),
      scratch_(sim.n),
      x_supp_(sim.n),
      y_supp_(sim.n),
      supp_scratch_(sim.n) {
    for (std::size_t q = 0; q < sim.n; ++q) {
        x_[q] = rat_double(pi1[q]);
        y_[q] = rat_double(pi2[q]);
        x_supp_[q] = pi1[q] != 0;
        y_supp_[q] = pi2[q] != 0;
    }
}

LogTracker::Status LogTracker::step(int letter) {
    const std::size_t n = sim_.n;
    const auto& m = sim_.psi_d[letter];
    const auto& pos = sim_.psi_pos[letter];
    ++steps_;

    // y first: its death means the observation was impossible
    std::fill(supp_scratch_.begin(), supp_scratch_.end(), 0);
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    bool y_alive = false;
    for (std::size_t q = 0; q < n; ++q) {
        if (!y_supp_[q]) continue;
        double yq = y_[q];
        const double* row = &m[q * n];
        const std::uint8_t* prow = &pos[q * n];
        for (std::size_t r = 0; r < n; ++r) {
            if (!prow[r]) continue;
            scratch_[r] += yq * row[r];
            supp_scratch_[r] = 1;
            y_alive = true;
        }
    }
    if (!y_alive) return Status::YDied;
    double norm_y = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm_y += scratch_[r];
    for (std::size_t r = 0; r < n; ++r) y_[r] = scratch_[r] / norm_y;
    std::swap(y_supp_, supp_scratch_);
    log_cy_ += std::log(norm_y);

    if (x_dead_) return Status::Ok;
    std::fill(supp_scratch_.begin(), supp_scratch_.end(), 0);
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    bool x_alive = false;
    for (std::size_t q = 0; q < n; ++q) {
        if (!x_supp_[q]) continue;
        double xq = x_[q];
        const double* row = &m[q * n];
        const std::uint8_t* prow = &pos[q * n];
        for (std::size_t r = 0; r < n; ++r) {
            if (!prow[r]) continue;
            scratch_[r] += xq * row[r];
            supp_scratch_[r] = 1;
            x_alive = true;
        }
    }
    if (!x_alive) {
        x_dead_ = true;
        return Status::XDied;
    }
    double norm_x = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm_x += scratch_[r];
    for (std::size_t r = 0; r < n; ++r) x_[r] = scratch_[r] / norm_x;
    std::swap(x_supp_, supp_scratch_);
    log_cx_ += std::log(norm_x);
    return Status::Ok;
}

double LogTracker::log_likelihood_ratio() const {
    if (x_dead_) return -kInf;
    return log_cx_ - log_cy_;
}

SprtOutcome run_sprt(const Hmm& h, const Dist& pi1, const Dist& pi2,
                     const Thresholds& th, const LetterSource& stream,
                     std::size_t max_steps, TrackerMode mode) {
    SprtOutcome out;
    auto decide = [&](double log_ratio, std::size_t step, bool zero) -> bool {
        if (log_ratio <= th.log_lower) {
            out.verdict = SprtVerdict::Pi2;
        } else if (log_ratio >= th.log_upper) {
            out.verdict = SprtVerdict::Pi1;
        } else {
            return false;
        }
        out.stopped_at = step;
        out.final_log_ratio = log_ratio;
        out.zero_mass = zero;
        return true;
    };

    if (mode == TrackerMode::Exact) {
        ExactTracker tracker(h, pi1, pi2);
        for (std::size_t step = 1; step <= max_steps; ++step) {
            tracker.step(stream());
            if (decide(tracker.log_likelihood_ratio(), step, tracker.x_dead()))
                return out;
        }
        out.final_log_ratio = tracker.log_likelihood_ratio();
    } else {
        HmmSim sim(h);
        LogTracker tracker(sim, pi1, pi2);
        for (std::size_t step = 1; step <= max_steps; ++step) {
            auto status = tracker.step(stream());
            if (status == LogTracker::Status::YDied)
                throw ImpossibleObservation(
                    "observed letter has probability 0 under pi2 at step " +
                    std::to_string(step));
            if (decide(tracker.log_likelihood_ratio(), step, tracker.x_dead()))
                return out;
        }
        out.final_log_ratio = tracker.log_likelihood_ratio();
    }
    out.verdict = SprtVerdict::Undecided;
    return out;
}

std::optional<std::size_t> n_bottom(const Hmm& h, const Dist& pi1,
                                    const LetterSource& stream,
                                    std::size_t max_steps) {
    std::size_t n = h.num_states();
    std::vector<std::uint8_t> supp(n), next(n);
    for (std::size_t q = 0; q < n; ++q) supp[q] = pi1[q] != 0;
    for (std::size_t step = 1; step <= max_steps; ++step) {
        int a = stream();
        std::fill(next.begin(), next.end(), 0);
        bool alive = false;
        for (std::size_t q = 0; q < n; ++q) {
            if (!supp[q]) continue;
            for (std::size_t r = 0; r < n; ++r)
                if (h.psi[a].at(q, r) != 0) {
                    next[r] = 1;
                    alive = true;
                }
        }
        supp.swap(next);
        if (!alive) return step;
    }
    return std::nullopt;
}

namespace {

ReplicaOutcome run_replica(const HmmSim& sim, const Dist& pi1,
                           const Dist& pi2, const Dist& sampler,
                           const Thresholds& th, std::size_t max_steps,
                           std::uint64_t seed, std::size_t replica) {
    Rng rng = Rng::stream(seed, replica);
    int state = sim.sample_initial(sampler, rng);
    LogTracker tracker(sim, pi1, pi2);
    ReplicaOutcome out;
    out.replica = replica;
    for (std::size_t step = 1; step <= max_steps; ++step) {
        auto o = sim.step(state, rng);
        state = o.target;
        auto status = tracker.step(o.letter);
        double log_ratio = status == LogTracker::Status::YDied
                               ? kInf
                               : tracker.log_likelihood_ratio();
        if (log_ratio <= th.log_lower || log_ratio >= th.log_upper) {
            out.verdict = log_ratio <= th.log_lower ? SprtVerdict::Pi2
                                                    : SprtVerdict::Pi1;
            out.stopped_at = step;
            out.final_log_ratio = log_ratio;
            out.zero_mass = tracker.x_dead();
            return out;
        }
    }
    out.verdict = SprtVerdict::Undecided;
    out.final_log_ratio = tracker.log_likelihood_ratio();
    return out;
}

}  // namespace

SprtStats mc_sprt(const Hmm& h, const Dist& pi1, const Dist& pi2,
                  const Thresholds& th, std::size_t replicas,
                  std::size_t max_steps, std::uint64_t seed,
                  bool sample_from_pi1, unsigned threads) {
    check_dist(h, pi1);
    check_dist(h, pi2);
    if (replicas < 1) throw Error("at least one replica required");
    HmmSim sim(h);
    const Dist& sampler = sample_from_pi1 ? pi1 : pi2;

    SprtStats stats;
    stats.replicas = replicas;
    stats.outcomes.resize(replicas);

    unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
    nthreads = std::max(1u, std::min<unsigned>(nthreads, replicas));
    std::atomic<std::size_t> next_replica{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next_replica.fetch_add(1);
            if (i >= replicas) break;
            stats.outcomes[i] =
                run_replica(sim, pi1, pi2, sampler, th, max_steps, seed, i);
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<double> stop_times;
    double stop_sum = 0, zero_sum = 0, thresh_sum = 0;
    std::size_t wrong = 0, decided = 0;
    for (const auto& o : stats.outcomes) {
        switch (o.verdict) {
            case SprtVerdict::Pi1: ++stats.count_pi1; break;
            case SprtVerdict::Pi2: ++stats.count_pi2; break;
            case SprtVerdict::Undecided: ++stats.count_undecided; break;
        }
        if (o.stopped_at) {
            double t = static_cast<double>(*o.stopped_at);
            stop_times.push_back(t);
            stop_sum += t;
            if (o.zero_mass) {
                ++stats.zero_mass_count;
                zero_sum += t;
            } else {
                ++stats.threshold_count;
                thresh_sum += t;
            }
        }
        if (o.verdict != SprtVerdict::Undecided) {
            ++decided;
            bool says_pi1 = o.verdict == SprtVerdict::Pi1;
            if (says_pi1 != sample_from_pi1) ++wrong;
        }
    }
    double n = static_cast<double>(replicas);
    stats.undecided_fraction = static_cast<double>(stats.count_undecided) / n;
    // error rate over all replicas: undecided counts as not-an-error,
    // matching the event {SPRT = wrong hypothesis}
    stats.error_rate = static_cast<double>(wrong) / n;
    stats.error_stderr =
        std::sqrt(stats.error_rate * (1 - stats.error_rate) / n);
    if (!stop_times.empty()) {
        stats.mean_stopping_time = stop_sum / static_cast<double>(stop_times.size());
        std::sort(stop_times.begin(), stop_times.end());
        auto quantile = [&](double p) {
            std::size_t idx = static_cast<std::size_t>(
                p * static_cast<double>(stop_times.size() - 1));
            return stop_times[idx];
        };
        stats.stopping_quartiles[0] = quantile(0.25);
        stats.stopping_quartiles[1] = quantile(0.5);
        stats.stopping_quartiles[2] = quantile(0.75);
    }
    if (stats.zero_mass_count)
        stats.zero_mass_mean_n = zero_sum / static_cast<double>(stats.zero_mass_count);
    if (stats.threshold_count)
        stats.threshold_mean_n =
            thresh_sum / static_cast<double>(stats.threshold_count);
    return stats;
}

std::vector<double> loglik_series(const Hmm& h, const Dist& sampler,
                                  const Dist& pi1, const Dist& pi2,
                                  std::size_t n, std::uint64_t seed) {
    check_dist(h, sampler);
    HmmSim sim(h);
    Rng rng = Rng::stream(seed, 0);
    int state = sim.sample_initial(sampler, rng);
    LogTracker tracker(sim, pi1, pi2);
    std::vector<double> series;
    series.reserve(n + 1);
    series.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto o = sim.step(state, rng);
        state = o.target;
        auto status = tracker.step(o.letter);
        if (status == LogTracker::Status::YDied)
            throw ImpossibleObservation(
                "sampled letter impossible under pi2 at step " +
                std::to_string(i + 1));
        series.push_back(tracker.log_likelihood_ratio());
    }
    return series;
}

double slope_estimate(const std::vector<double>& series, double burn_in_fraction) {
    if (series.size() < 2) throw Error("series too short for a slope");
    if (!(burn_in_fraction >= 0 && burn_in_fraction < 1))
        throw Error("burn-in fraction must lie in [0,1)");
    std::size_t last = series.size() - 1;
    std::size_t burn = static_cast<std::size_t>(burn_in_fraction *
                                                static_cast<double>(last));
    if (burn >= last) burn = last - 1;
    for (std::size_t i = burn; i <= last; ++i)
        if (std::isinf(series[i]) && series[i] < 0)
            throw HitNegInfinity("series hit -inf after burn-in");
    return (series[last] - series[burn]) / static_cast<double>(last - burn);
}

}  // namespace hmmsprt
