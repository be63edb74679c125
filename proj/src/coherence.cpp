#include "quadq/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quadq/rng.hpp"
#include "quadq/stats.hpp"
#include "quadq/telegraph.hpp"

namespace quadq {

namespace {

constexpr std::uint64_t kMcStream = 0x6d635f646570ULL;
constexpr long kChunk = 64;

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0;
    return std::sin(x) / x;
}

// cos wt + (lambda/w) sin wt continued across w^2 = k^2 - lambda^2 <= 0.
// No e^{-lambda t} damping; that factor belongs to the caller.
double fluctuator_bracket(double k, double lambda, double t) {
    double w2 = k * k - lambda * lambda;
    if (w2 >= 0.0) {
        double w = std::sqrt(w2);
        return std::cos(w * t) + lambda * t * sinc(w * t);
    }
    if (-w2 * t * t < 1e-12) return 1.0 + lambda * t;  // near-critical limit
    double v = std::sqrt(-w2);
    return std::cosh(v * t) + (lambda / v) * std::sinh(v * t);
}

void validate_grid(const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("time grid is empty");
    if (times.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            throw std::invalid_argument("time grid must be strictly ascending");
        }
    }
}

// phase[t] += k * int_0^t xi for one trap record, single sweep over the grid.
void accumulate_phase(const SwitchingRecord& rec, double k,
                      const std::vector<double>& times, std::vector<double>& phase) {
    double integral = 0.0;
    double prev = 0.0;
    int sign = rec.initial_sign;
    std::size_t si = 0;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        double t = times[ti];
        while (si < rec.switch_times.size() && rec.switch_times[si] < t) {
            integral += sign * (rec.switch_times[si] - prev);
            prev = rec.switch_times[si];
            sign = -sign;
            ++si;
        }
        phase[ti] += k * (integral + sign * (t - prev));
    }
}

void trajectory_values(const FluctuatorList& fluctuators, const std::vector<double>& times,
                       std::uint64_t seed, long traj, std::vector<double>& phase,
                       std::vector<double>& re, std::vector<double>& im) {
    const double horizon = times.back();
    std::fill(phase.begin(), phase.end(), 0.0);
    for (std::size_t j = 0; j < fluctuators.size(); ++j) {
        TelegraphProcess tp{fluctuators[j].second, 0,
                            derive_seed(seed, kMcStream, static_cast<std::uint64_t>(traj),
                                        static_cast<std::uint64_t>(j))};
        SwitchingRecord rec = sample_record(tp, horizon);
        accumulate_phase(rec, fluctuators[j].first, times, phase);
    }
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        re[ti] = std::cos(phase[ti]);
        im[ti] = -std::sin(phase[ti]);
    }
}

CoherenceTrace finalize_trace(const std::vector<double>& times, long n_traj,
                              const std::vector<double>& sum_re,
                              const std::vector<double>& sum_im,
                              const std::vector<double>& sum_sq) {
    const std::size_t nt = times.size();
    const double n = static_cast<double>(n_traj);
    CoherenceTrace trace;
    trace.times = times;
    trace.n_trajectories = n_traj;
    trace.values.resize(nt);
    trace.stderrs.resize(nt);
    for (std::size_t ti = 0; ti < nt; ++ti) {
        double mr = sum_re[ti] / n;
        double mi = sum_im[ti] / n;
        trace.values[ti] = {mr, mi};
        if (n_traj > 1) {
            double var_tot = (sum_sq[ti] - (sum_re[ti] * sum_re[ti] +
                                            sum_im[ti] * sum_im[ti]) / n) / (n - 1.0);
            trace.stderrs[ti] = std::sqrt(std::max(0.0, var_tot) / n);
        } else {
            trace.stderrs[ti] = 0.0;
        }
    }
    return trace;
}

} // namespace

std::vector<double> default_time_grid(double horizon, int n) {
    if (horizon <= 0.0) throw std::invalid_argument("default_time_grid: horizon must be > 0");
    if (n < 16) throw std::invalid_argument("default_time_grid: need at least 16 points");
    int n_log = (n - 1) / 2;
    int n_lin = n - 1 - n_log;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    grid.push_back(0.0);
    for (double t : logspace(horizon * 1e-4, horizon * 0.1, n_log)) grid.push_back(t);
    for (int i = 1; i <= n_lin; ++i) {
        grid.push_back(horizon * 0.1 +
                       horizon * 0.9 * static_cast<double>(i) / static_cast<double>(n_lin));
    }
    grid.back() = horizon;
    return grid;
}

double analytic_single_value(double k, double lambda, double t) {
    if (k < 0.0) k = -k;
    if (lambda < 0.0) throw std::invalid_argument("analytic_single_value: lambda must be >= 0");
    double w2 = k * k - lambda * lambda;
    if (w2 >= 0.0) {
        double w = std::sqrt(w2);
        return std::exp(-lambda * t) * (std::cos(w * t) + lambda * t * sinc(w * t));
    }
    if (-w2 * t * t < 1e-12) {
        return std::exp(-lambda * t) * (1.0 + lambda * t);
    }
    // overflow-safe overdamped form: half-sum of decaying exponentials
    double v = std::sqrt(-w2);
    return 0.5 * ((1.0 + lambda / v) * std::exp((v - lambda) * t) +
                  (1.0 - lambda / v) * std::exp(-(v + lambda) * t));
}

CoherenceTrace analytic_single(double k, double lambda, const std::vector<double>& times) {
    validate_grid(times);
    CoherenceTrace trace;
    trace.times = times;
    trace.values.reserve(times.size());
    for (double t : times) trace.values.emplace_back(analytic_single_value(k, lambda, t), 0.0);
    return trace;
}

double analytic_many_value(const FluctuatorList& fluctuators, double t) {
    double rate_sum = 0.0;
    double product = 1.0;
    for (const auto& [k, lambda] : fluctuators) {
        rate_sum += lambda;
        product *= fluctuator_bracket(k, lambda, t);
    }
    return std::exp(-t * rate_sum) * product;
}

CoherenceTrace analytic_many(const FluctuatorList& fluctuators,
                             const std::vector<double>& times) {
    validate_grid(times);
    CoherenceTrace trace;
    trace.times = times;
    trace.values.reserve(times.size());
    for (double t : times) trace.values.emplace_back(analytic_many_value(fluctuators, t), 0.0);
    return trace;
}

CoherenceTrace short_time(double k_eff, const std::vector<double>& times) {
    validate_grid(times);
    CoherenceTrace trace;
    trace.times = times;
    trace.values.reserve(times.size());
    for (double t : times) {
        trace.values.emplace_back(1.0 - t * t * k_eff * k_eff / 2.0, 0.0);
    }
    return trace;
}

namespace {

CoherenceTrace mc_chunked(const FluctuatorList& fluctuators, const std::vector<double>& times,
                          long n_traj, std::uint64_t seed) {
    validate_grid(times);
    if (n_traj < 1) throw std::invalid_argument("mc_dephasing: need n_traj >= 1");
    const std::size_t nt = times.size();
    const long n_chunks = (n_traj + kChunk - 1) / kChunk;

    // Per-chunk partial sums; chunk boundaries depend only on kChunk, so the
    // ordered reduction below yields the same bits for any thread count.
    std::vector<double> c_re(static_cast<std::size_t>(n_chunks) * nt, 0.0);
    std::vector<double> c_im(static_cast<std::size_t>(n_chunks) * nt, 0.0);
    std::vector<double> c_sq(static_cast<std::size_t>(n_chunks) * nt, 0.0);

#pragma omp parallel
    {
        std::vector<double> phase(nt), re(nt), im(nt);
#pragma omp for schedule(static)
        for (long c = 0; c < n_chunks; ++c) {
            double* pr = &c_re[static_cast<std::size_t>(c) * nt];
            double* pi = &c_im[static_cast<std::size_t>(c) * nt];
            double* pq = &c_sq[static_cast<std::size_t>(c) * nt];
            const long hi = std::min(n_traj, (c + 1) * kChunk);
            for (long i = c * kChunk; i < hi; ++i) {
                trajectory_values(fluctuators, times, seed, i, phase, re, im);
                for (std::size_t ti = 0; ti < nt; ++ti) {
                    pr[ti] += re[ti];
                    pi[ti] += im[ti];
                    pq[ti] += re[ti] * re[ti] + im[ti] * im[ti];
                }
            }
        }
    }

    std::vector<double> sum_re(nt, 0.0), sum_im(nt, 0.0), sum_sq(nt, 0.0);
    for (long c = 0; c < n_chunks; ++c) {
        const double* pr = &c_re[static_cast<std::size_t>(c) * nt];
        const double* pi = &c_im[static_cast<std::size_t>(c) * nt];
        const double* pq = &c_sq[static_cast<std::size_t>(c) * nt];
        for (std::size_t ti = 0; ti < nt; ++ti) {
            sum_re[ti] += pr[ti];
            sum_im[ti] += pi[ti];
            sum_sq[ti] += pq[ti];
        }
    }
    return finalize_trace(times, n_traj, sum_re, sum_im, sum_sq);
}

} // namespace

CoherenceTrace mc_dephasing(const FluctuatorList& fluctuators, const std::vector<double>& times,
                            long n_traj, std::uint64_t seed) {
    return mc_chunked(fluctuators, times, n_traj, seed);
}

CoherenceTrace mc_dephasing_serial(const FluctuatorList& fluctuators,
                                   const std::vector<double>& times, long n_traj,
                                   std::uint64_t seed) {
    validate_grid(times);
    if (n_traj < 1) throw std::invalid_argument("mc_dephasing: need n_traj >= 1");
    const std::size_t nt = times.size();
    std::vector<double> sum_re(nt, 0.0), sum_im(nt, 0.0), sum_sq(nt, 0.0);
    std::vector<double> phase(nt), re(nt), im(nt);
    for (long i = 0; i < n_traj; ++i) {
        trajectory_values(fluctuators, times, seed, i, phase, re, im);
        for (std::size_t ti = 0; ti < nt; ++ti) {
            sum_re[ti] += re[ti];
            sum_im[ti] += im[ti];
            sum_sq[ti] += re[ti] * re[ti] + im[ti] * im[ti];
        }
    }
    return finalize_trace(times, n_traj, sum_re, sum_im, sum_sq);
}

FluctuatorList to_fluctuators(const std::vector<TrapCoupling>& couplings,
                              const std::vector<double>& rates) {
    if (couplings.size() != rates.size()) {
        throw std::invalid_argument("to_fluctuators: couplings/rates size mismatch");
    }
    FluctuatorList fl;
    fl.reserve(couplings.size());
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        fl.emplace_back(couplings[i].k, rates[i]);
    }
    return fl;
}

CoherenceTrace mc_dephasing(const QubitGeometry& geom, const TrapEnsemble& traps,
                            const PhysicalConstants& c, const std::vector<double>& times,
                            long n_traj, std::uint64_t seed) {
    auto couplings = ensemble_couplings(traps, geom, c);
    return mc_dephasing(to_fluctuators(couplings, traps.rates()), times, n_traj, seed);
}

DecayTime decay_time(const CoherenceTrace& trace, double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("decay_time: p must be in (0,1)");
    if (trace.values.empty() || std::abs(trace.values.front()) < p) {
        throw std::invalid_argument("decay_time: trace must start above p");
    }
    DecayTime out;
    out.p = p;
    out.method = trace.analytic() ? DecayTime::Method::AnalyticCrossing
                                  : DecayTime::Method::McCrossing;
    double prev_mag = std::abs(trace.values.front());
    for (std::size_t i = 1; i < trace.values.size(); ++i) {
        double mag = std::abs(trace.values[i]);
        if (mag < p) {
            double frac = (prev_mag - p) / (prev_mag - mag);
            out.tau = trace.times[i - 1] + frac * (trace.times[i] - trace.times[i - 1]);
            out.reached = true;
            return out;
        }
        prev_mag = mag;
    }
    out.tau = std::numeric_limits<double>::infinity();
    out.reached = false;
    return out;
}

DecayTime decay_time_formula(double k_eff, double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("decay_time: p must be in (0,1)");
    DecayTime out;
    out.p = p;
    out.method = DecayTime::Method::Formula;
    out.reached = k_eff > 0.0;
    out.tau = k_eff > 0.0 ? std::sqrt(2.0 * (1.0 - p)) / k_eff
                          : std::numeric_limits<double>::infinity();
    return out;
}

DecayTime decay_time_analytic(const FluctuatorList& fluctuators, double p, double horizon) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("decay_time: p must be in (0,1)");
    if (horizon <= 0.0) throw std::invalid_argument("decay_time: horizon must be > 0");
    DecayTime out;
    out.p = p;
    out.method = DecayTime::Method::AnalyticCrossing;

    auto f = [&](double t) { return std::abs(analytic_many_value(fluctuators, t)) - p; };
    constexpr int kSteps = 4096;
    double lo = 0.0;
    double f_lo = 1.0 - p;
    bool bracketed = false;
    double hi = 0.0;
    for (int i = 1; i <= kSteps; ++i) {
        double t = horizon * static_cast<double>(i) / kSteps;
        double ft = f(t);
        if (ft < 0.0) {
            hi = t;
            bracketed = true;
            break;
        }
        lo = t;
        f_lo = ft;
    }
    if (!bracketed) {
        out.tau = std::numeric_limits<double>::infinity();
        out.reached = false;
        return out;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * horizon; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    (void)f_lo;
    out.tau = 0.5 * (lo + hi);
    out.reached = true;
    return out;
}

} // namespace quadq
