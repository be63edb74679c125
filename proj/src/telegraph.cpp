#include "quadq/telegraph.hpp"

#include <algorithm>
#include <stdexcept>

#include "quadq/rng.hpp"

namespace quadq {

int SwitchingRecord::sign_at(double t) const {
    auto n = std::upper_bound(switch_times.begin(), switch_times.end(), t) -
             switch_times.begin();
    return (n % 2 == 0) ? initial_sign : -initial_sign;
}

SwitchingRecord sample_record(const TelegraphProcess& process, double horizon) {
    if (process.rate <= 0.0) throw std::invalid_argument("sample_record: rate must be > 0");
    if (horizon <= 0.0) throw std::invalid_argument("sample_record: horizon must be > 0");

    SwitchingRecord rec;
    rec.horizon = horizon;

    auto engine = make_engine(process.seed);
    if (process.initial_sign == 0) {
        rec.initial_sign = (engine() & 1u) ? 1 : -1;
    } else {
        rec.initial_sign = process.initial_sign > 0 ? 1 : -1;
    }

    std::exponential_distribution<double> gap(process.rate);
    double t = gap(engine);
    while (t < horizon) {
        rec.switch_times.push_back(t);
        t += gap(engine);
    }
    return rec;
}

double integrate_xi(const SwitchingRecord& record, double t) {
    if (t < 0.0 || t > record.horizon) {
        throw std::out_of_range("integrate_xi: t outside [0, horizon]");
    }
    double integral = 0.0;
    double prev = 0.0;
    int sign = record.initial_sign;
    for (double s : record.switch_times) {
        if (s >= t) break;
        integral += sign * (s - prev);
        prev = s;
        sign = -sign;
    }
    integral += sign * (t - prev);
    return integral;
}

std::vector<double> integrate_xi_grid(const SwitchingRecord& record,
                                      const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    double integral = 0.0;
    double prev = 0.0;
    int sign = record.initial_sign;
    std::size_t si = 0;
    for (double t : times) {
        if (t < prev || t > record.horizon) {
            throw std::out_of_range("integrate_xi_grid: times must ascend within [0, horizon]");
        }
        while (si < record.switch_times.size() && record.switch_times[si] < t) {
            integral += sign * (record.switch_times[si] - prev);
            prev = record.switch_times[si];
            sign = -sign;
            ++si;
        }
        out.push_back(integral + sign * (t - prev));
    }
    return out;
}

std::vector<MergedSegment> merged_segments(const std::vector<SwitchingRecord>& records,
                                           double horizon) {
    for (const auto& r : records) {
        if (r.horizon < horizon) {
            throw std::invalid_argument("merged_segments: record horizon shorter than requested");
        }
    }
    // (time, record index) events, sorted
    std::vector<std::pair<double, std::size_t>> events;
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (double t : records[i].switch_times) {
            if (t < horizon) events.emplace_back(t, i);
        }
    }
    std::sort(events.begin(), events.end());

    std::vector<int> signs;
    signs.reserve(records.size());
    for (const auto& r : records) signs.push_back(r.initial_sign);

    std::vector<MergedSegment> out;
    out.reserve(events.size() + 1);
    double prev = 0.0;
    for (const auto& [t, idx] : events) {
        out.push_back({prev, t, signs});
        signs[idx] = -signs[idx];
        prev = t;
    }
    out.push_back({prev, horizon, signs});
    return out;
}

} // namespace quadq
