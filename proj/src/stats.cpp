#include "quadq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadq/rng.hpp"

namespace quadq {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double sample_stddev(const std::vector<double>& v) { return std::sqrt(sample_variance(v)); }

double standard_error(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("standard_error: empty input");
    return sample_stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

double percentile(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("percentile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("percentile: p outside [0,1]");
    std::sort(v.begin(), v.end());
    double pos = p * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double median(std::vector<double> v) { return percentile(std::move(v), 0.5); }

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear_fit: need >= 2 paired points");
    }
    double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

std::vector<double> bootstrap_mean_quantiles(const std::vector<double>& samples,
                                             const std::vector<double>& quantiles,
                                             int n_resamples, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("bootstrap: empty sample set");
    auto engine = make_engine(seed, 0xb007ULL);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    std::vector<double> means(static_cast<std::size_t>(n_resamples));
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) s += samples[pick(engine)];
        m = s / static_cast<double>(samples.size());
    }
    std::vector<double> out;
    out.reserve(quantiles.size());
    for (double q : quantiles) out.push_back(percentile(means, q));
    return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
    if (n < 2 || lo <= 0 || hi <= 0) throw std::invalid_argument("logspace: bad arguments");
    std::vector<double> out(static_cast<std::size_t>(n));
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("linspace: need n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

} // namespace quadq
