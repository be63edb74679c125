#pragma once

#include <cstdint>
#include <vector>

namespace quadq {

// Random telegraph signal xi(t) = +-1 switching at Poisson rate lambda.
// initial_sign 0 requests the stationary symmetric process (equiprobable +-1).
struct TelegraphProcess {
    double rate = 0.0;  // Hz
    int initial_sign = 0;
    std::uint64_t seed = 0;
};

struct SwitchingRecord {
    std::vector<double> switch_times;  // strictly ascending, inside [0, horizon]
    int initial_sign = 1;
    double horizon = 0.0;

    // xi(t) = initial_sign * (-1)^{#switches <= t}
    int sign_at(double t) const;
};

SwitchingRecord sample_record(const TelegraphProcess& process, double horizon);

// Exact piecewise-linear integral of xi over [0, t]. Throws when t is
// outside [0, horizon].
double integrate_xi(const SwitchingRecord& record, double t);

// integrate_xi evaluated at an ascending grid in one sweep.
std::vector<double> integrate_xi_grid(const SwitchingRecord& record,
                                      const std::vector<double>& times);

struct MergedSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<int> signs;  // one per record, constant over the segment
};

// Common refinement of all switching partitions over [0, horizon];
// segment count = total switches + 1.
std::vector<MergedSegment> merged_segments(const std::vector<SwitchingRecord>& records,
                                           double horizon);

} // namespace quadq
