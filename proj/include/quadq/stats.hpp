#pragma once

#include <cstdint>
#include <vector>

namespace quadq {

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);
double standard_error(const std::vector<double>& v);

// Percentile with linear interpolation between closest ranks
// (position p*(n-1)); p in [0,1]. Throws on empty input.
double percentile(std::vector<double> v, double p);
double median(std::vector<double> v);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares on (x, y); requires >= 2 points.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Percentile bootstrap over iid samples: statistic = mean. Returns the
// requested quantiles of the resampled means. Deterministic per seed.
std::vector<double> bootstrap_mean_quantiles(const std::vector<double>& samples,
                                             const std::vector<double>& quantiles,
                                             int n_resamples, std::uint64_t seed);

std::vector<double> logspace(double lo, double hi, int n);
std::vector<double> linspace(double lo, double hi, int n);

} // namespace quadq
