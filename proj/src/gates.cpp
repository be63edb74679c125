#include "quadq/gates.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "quadq/rng.hpp"

namespace quadq {

namespace {

using std::numbers::pi;
using Cx = std::complex<double>;

constexpr std::uint64_t kGateStream = 0x676174655f6e7aULL;

long long mod_inverse(long long a, long long n) {
    long long t = 0, new_t = 1;
    long long r = n, new_r = a % n;
    while (new_r != 0) {
        long long q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: arguments not coprime");
    return ((t % n) + n) % n;
}

std::array<Eigen::Vector2cd, 6> cardinal_states() {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Eigen::Vector2cd, 6> states;
    states[0] << 1.0, 0.0;                  // +z
    states[1] << 0.0, 1.0;                  // -z
    states[2] << s, s;                      // +x
    states[3] << s, -s;                     // -x
    states[4] << s, Cx(0.0, s);             // +y
    states[5] << s, Cx(0.0, -s);            // -y
    return states;
}

FidelityResult assemble_fidelity(std::vector<double> samples, long n_traj) {
    FidelityResult out;
    out.n_traj_per_state = n_traj;
    const double n = static_cast<double>(n_traj);
    double total = 0.0;
    for (int s = 0; s < 6; ++s) {
        double sum = 0.0, sum_sq = 0.0;
        for (long i = 0; i < n_traj; ++i) {
            double f = samples[static_cast<std::size_t>(s) * n_traj + i];
            sum += f;
            sum_sq += f * f;
        }
        double m = sum / n;
        out.per_state[static_cast<std::size_t>(s)] = m;
        double var = n > 1 ? std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)) : 0.0;
        out.per_state_stderr[static_cast<std::size_t>(s)] = std::sqrt(var / n);
        total += m;
    }
    out.fidelity = total / 6.0;
    out.error = 1.0 - out.fidelity;
    out.samples = std::move(samples);
    return out;
}

std::vector<SwitchingRecord> trajectory_records(const std::vector<double>& rates,
                                                double horizon, std::uint64_t seed,
                                                int state, long traj) {
    std::vector<SwitchingRecord> records;
    records.reserve(rates.size());
    for (std::size_t j = 0; j < rates.size(); ++j) {
        TelegraphProcess tp{rates[j], 0,
                            derive_seed(seed, kGateStream, static_cast<std::uint64_t>(state),
                                        static_cast<std::uint64_t>(traj),
                                        static_cast<std::uint64_t>(j))};
        records.push_back(sample_record(tp, horizon));
    }
    return records;
}

double state_fidelity(const Eigen::Vector2cd& ideal, const Eigen::Vector2cd& projected) {
    double f = std::norm(ideal.dot(projected));  // Eigen dot conjugates the left factor
    return std::min(1.0, std::max(0.0, f));
}

// 2x2 segment propagator exp(-i (a sigma_x + b sigma_z) dt), closed form.
Eigen::Matrix2cd two_level_segment(double a, double b, double dt) {
    double w = std::hypot(a, b);
    Eigen::Matrix2cd u;
    if (w == 0.0 || dt == 0.0) {
        u.setIdentity();
        return u;
    }
    double c = std::cos(w * dt), s = std::sin(w * dt);
    Cx isa(0.0, -s * a / w), isb(0.0, -s * b / w);
    u << c + isb, isa, isa, c - isb;
    return u;
}

FidelityResult fidelity_4qd(const GateDesign& design, double delta_radps,
                            const std::vector<std::array<double, 4>>& shifts,
                            const std::vector<double>& rates, long n_traj,
                            std::uint64_t seed, bool parallel) {
    if (n_traj < 1) throw std::invalid_argument("average_fidelity: need n_traj >= 1");
    if (shifts.size() != rates.size()) {
        throw std::invalid_argument("average_fidelity: shifts/rates size mismatch");
    }
    const HubbardModel model{delta_radps, design.omega * delta_radps};
    const double t_f = design.t_f / delta_radps;
    const Eigen::Matrix2cd ideal_gate = ideal_logical_gate(design);
    const auto states = cardinal_states();

    std::vector<double> samples(6 * static_cast<std::size_t>(n_traj));
    const long total = 6 * n_traj;

#pragma omp parallel for schedule(static) if (parallel)
    for (long idx = 0; idx < total; ++idx) {
        const int s = static_cast<int>(idx / n_traj);
        const long i = idx % n_traj;
        auto records = trajectory_records(rates, t_f, seed, s, i);
        Eigen::Matrix4cd u = propagate_noisy(model, shifts, records, t_f);
        Eigen::Vector4cd init = Eigen::Vector4cd::Zero();
        init(0) = states[static_cast<std::size_t>(s)](0);
        init(1) = states[static_cast<std::size_t>(s)](1);
        Eigen::Vector4cd fin = u * init;
        Eigen::Vector2cd projected(fin(0), fin(1));
        Eigen::Vector2cd ideal = ideal_gate * states[static_cast<std::size_t>(s)];
        samples[static_cast<std::size_t>(idx)] = state_fidelity(ideal, projected);
    }
    return assemble_fidelity(std::move(samples), n_traj);
}

FidelityResult fidelity_2qd(double t_f_s, const std::vector<double>& ks,
                            const std::vector<double>& rates, long n_traj,
                            std::uint64_t seed, bool parallel) {
    if (n_traj < 1) throw std::invalid_argument("average_fidelity: need n_traj >= 1");
    if (ks.size() != rates.size()) {
        throw std::invalid_argument("average_fidelity: couplings/rates size mismatch");
    }
    if (t_f_s <= 0.0) throw std::invalid_argument("average_fidelity: gate time must be > 0");
    const double omega2 = pi / (4.0 * t_f_s);

    Eigen::Matrix2cd ideal_gate = two_level_segment(omega2, 0.0, t_f_s);
    const auto states = cardinal_states();

    std::vector<double> samples(6 * static_cast<std::size_t>(n_traj));
    const long total = 6 * n_traj;

#pragma omp parallel for schedule(static) if (parallel)
    for (long idx = 0; idx < total; ++idx) {
        const int s = static_cast<int>(idx / n_traj);
        const long i = idx % n_traj;
        auto records = trajectory_records(rates, t_f_s, seed, s, i);
        auto segments = merged_segments(records, t_f_s);
        Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
        for (const auto& seg : segments) {
            double detune = 0.0;
            for (std::size_t j = 0; j < ks.size(); ++j) {
                detune += 0.5 * ks[j] * seg.signs[j];
            }
            u = two_level_segment(omega2, detune, seg.t_end - seg.t_start) * u;
        }
        Eigen::Vector2cd fin = u * states[static_cast<std::size_t>(s)];
        Eigen::Vector2cd ideal = ideal_gate * states[static_cast<std::size_t>(s)];
        samples[static_cast<std::size_t>(idx)] = state_fidelity(ideal, fin);
    }
    return assemble_fidelity(std::move(samples), n_traj);
}

} // namespace

double PhaseGatePulse::total_integral() const {
    double sum = 0.0;
    for (const auto& seg : segments) sum += seg.bias_v * seg.duration_s;
    return sum;
}

double phase_angle(const PhaseGatePulse& pulse, const PhysicalConstants& c,
                   bool reduce_mod_2pi) {
    double phi = 2.0 * c.electron_charge * pulse.total_integral() / c.hbar;
    if (reduce_mod_2pi) {
        phi = std::fmod(phi, 2.0 * pi);
        if (phi < 0.0) phi += 2.0 * pi;
    }
    return phi;
}

Eigen::Matrix4d hamiltonian(const HubbardModel& model) {
    if (model.delta <= 0.0) throw std::invalid_argument("hamiltonian: delta must be > 0");
    double w = model.omega / model.delta;
    Eigen::Matrix4d h;
    // basis (|0>, |1>, |eps0>, |eps1>), units of delta
    h << 0, 0, w, w,
         0, 0, w, w,
         w, w, 1, 0,
         w, w, 0, 1;
    return h;
}

EigenSystem eigensystem(const HubbardModel& model) {
    if (model.delta <= 0.0) throw std::invalid_argument("eigensystem: delta must be > 0");
    if (model.omega < 0.0) throw std::invalid_argument("eigensystem: omega must be >= 0");
    double w = model.omega / model.delta;
    double s = std::sqrt(1.0 + 16.0 * w * w);
    // a = 4w/(S+1) = 1/a4; stays in [0,1) for all w, so psi3/psi4 are stable.
    double a = 4.0 * w / (s + 1.0);
    double norm34 = 1.0 / std::sqrt(2.0 + 2.0 * a * a);
    double r2 = 1.0 / std::sqrt(2.0);

    EigenSystem sys;
    sys.energies = {0.0, 1.0, (1.0 + s) / 2.0, (1.0 - s) / 2.0};
    sys.degenerate = (w == 0.0);
    sys.vectors.setZero();
    sys.vectors.col(0) << r2, -r2, 0, 0;
    sys.vectors.col(1) << 0, 0, r2, -r2;
    sys.vectors.col(2) << a * norm34, a * norm34, norm34, norm34;
    sys.vectors.col(3) << norm34, norm34, -a * norm34, -a * norm34;
    return sys;
}

GateDesign design_gate(int n, int m) {
    if (n < 2 || n % 2 != 0 || m < 1 || m >= n || std::gcd(n, m) != 1) {
        throw std::invalid_argument(
            "design_gate: require n even, n > m >= 1, gcd(n, m) = 1");
    }
    GateDesign d;
    d.n = n;
    d.m = m;
    double ratio = static_cast<double>(n) / static_cast<double>(m);
    d.omega = std::sqrt(ratio * ratio - 1.0) / 4.0;
    d.j = static_cast<int>((mod_inverse(m, n) * (n / 2)) % n);
    d.t_f = 2.0 * d.j * m * pi / n;
    d.gamma = pi * (n - m) / 2.0;
    d.kind = GateDesign::Kind::HalfPi;
    double nn = static_cast<double>(n) * n, mm = static_cast<double>(m) * m;
    d.max_transient_population = (nn - mm) / nn;
    d.integrated_population_scale = m * (nn - mm) / nn;
    return d;
}

Eigen::Matrix4cd propagate_noiseless(const HubbardModel& model, double t) {
    if (t < 0.0) throw std::invalid_argument("propagate_noiseless: t must be >= 0");
    EigenSystem sys = eigensystem(model);
    Eigen::Vector4cd phases;
    for (int k = 0; k < 4; ++k) {
        double e = sys.energies[static_cast<std::size_t>(k)] * model.delta;
        phases(k) = std::polar(1.0, -e * t);
    }
    return sys.vectors * phases.asDiagonal() * sys.vectors.adjoint();
}

Eigen::Matrix4cd propagate_noisy(const HubbardModel& model,
                                 const std::vector<std::array<double, 4>>& shifts,
                                 const std::vector<SwitchingRecord>& records, double t_f) {
    if (shifts.size() != records.size()) {
        throw std::invalid_argument("propagate_noisy: shifts/records size mismatch");
    }
    const Eigen::Matrix4d h_gate = hamiltonian(model) * model.delta;
    auto segments = merged_segments(records, t_f);

    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    for (const auto& seg : segments) {
        double dt = seg.t_end - seg.t_start;
        if (dt == 0.0) continue;
        h = h_gate;
        for (std::size_t j = 0; j < shifts.size(); ++j) {
            double sign = seg.signs[j];
            for (int b = 0; b < 4; ++b) {
                h(b, b) += sign * shifts[j][static_cast<std::size_t>(b)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
        Eigen::Vector4cd phases;
        for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * dt);
        u = (es.eigenvectors().cast<Cx>() * phases.asDiagonal() *
             es.eigenvectors().transpose().cast<Cx>() * u).eval();
    }
    return u;
}

Eigen::Matrix2cd ideal_logical_gate(const GateDesign& design) {
    double theta = design.kind == GateDesign::Kind::HalfPi ? design.gamma : 2.0 * design.gamma;
    Cx e = std::polar(1.0, theta);
    Eigen::Matrix2cd u;
    // P_- + e^{i theta} P_+ over (|0> -+ |1>)/sqrt(2)
    u << (1.0 + e) / 2.0, (e - 1.0) / 2.0,
         (e - 1.0) / 2.0, (1.0 + e) / 2.0;
    return u;
}

FidelityResult average_fidelity(const GateDesign& design, double delta_radps,
                                const std::vector<std::array<double, 4>>& shifts,
                                const std::vector<double>& rates, long n_traj_per_state,
                                std::uint64_t seed) {
    return fidelity_4qd(design, delta_radps, shifts, rates, n_traj_per_state, seed, true);
}

FidelityResult average_fidelity_serial(const GateDesign& design, double delta_radps,
                                       const std::vector<std::array<double, 4>>& shifts,
                                       const std::vector<double>& rates,
                                       long n_traj_per_state, std::uint64_t seed) {
    return fidelity_4qd(design, delta_radps, shifts, rates, n_traj_per_state, seed, false);
}

FidelityResult average_fidelity_2qd(double t_f_s, const std::vector<double>& ks,
                                    const std::vector<double>& rates, long n_traj_per_state,
                                    std::uint64_t seed) {
    return fidelity_2qd(t_f_s, ks, rates, n_traj_per_state, seed, true);
}

FidelityResult average_fidelity_2qd_serial(double t_f_s, const std::vector<double>& ks,
                                           const std::vector<double>& rates,
                                           long n_traj_per_state, std::uint64_t seed) {
    return fidelity_2qd(t_f_s, ks, rates, n_traj_per_state, seed, false);
}

PopulationTrace population_trace(const GateDesign& design, const Eigen::Vector4cd& initial,
                                 int n_points) {
    if (n_points < 2) throw std::invalid_argument("population_trace: need >= 2 points");
    HubbardModel model{1.0, design.omega};
    PopulationTrace out;
    out.times.reserve(static_cast<std::size_t>(n_points));
    out.populations.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        double t = design.t_f * static_cast<double>(i) / static_cast<double>(n_points - 1);
        Eigen::Vector4cd psi = propagate_noiseless(model, t) * initial;
        out.times.push_back(t);
        out.populations.push_back({std::norm(psi(0)), std::norm(psi(1)),
                                   std::norm(psi(2)), std::norm(psi(3))});
    }
    return out;
}

} // namespace quadq
