#include "greenran/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace greenran {

namespace {

// Normalized receiver noise. Gains are relative to the 50 m reference distance,
// so this places the reference-distance SNR at 1 W transmit power at 40 dB.
constexpr double kDefaultNoisePowerW = 1e-4;

// Keeps the channel stream independent from the topology stream for equal seeds.
constexpr std::uint64_t kChannelStreamTag = 0x9E3779B97F4A7C15ULL;

template <typename T>
void require_size(const std::vector<T>& values, int expected, const char* name) {
    if (static_cast<int>(values.size()) != expected) {
        throw ConfigError(std::string(name) + ": expected " + std::to_string(expected) +
                          " entries, got " + std::to_string(values.size()));
    }
}

}  // namespace

void SystemConfig::validate() const {
    if (num_rrh < 1) throw ConfigError("L must be >= 1");
    if (num_users < 1) throw ConfigError("K must be >= 1");
    require_size(antennas, num_rrh, "N_l");
    require_size(max_power_w, num_rrh, "P_max_l");
    require_size(fronthaul_power_w, num_rrh, "P_fronthaul_l");
    require_size(efficiency, num_rrh, "eta_l");
    require_size(noise_power_w, num_users, "noise_power_k");
    require_size(sinr_target, num_users, "gamma_k");
    for (int l = 0; l < num_rrh; ++l) {
        if (antennas[l] < 1) throw ConfigError("N_l must be >= 1");
        if (!(max_power_w[l] > 0.0)) throw ConfigError("P_max_l must be > 0");
        if (!(fronthaul_power_w[l] > 0.0)) throw ConfigError("P_fronthaul_l must be > 0");
        if (!(efficiency[l] > 0.0 && efficiency[l] <= 1.0)) throw ConfigError("eta_l must lie in (0, 1]");
    }
    for (int k = 0; k < num_users; ++k) {
        if (!(noise_power_w[k] > 0.0)) throw ConfigError("noise_power_k must be > 0");
        if (!(sinr_target[k] >= 0.0) || !std::isfinite(sinr_target[k])) {
            throw ConfigError("gamma_k must be finite and >= 0");
        }
    }
    if (!(region_halfwidth_m >= 0.0)) throw ConfigError("region_halfwidth_m must be >= 0");
    if (!(pathloss_exponent >= 0.0)) throw ConfigError("pathloss_exponent must be >= 0");
    if (!(pathloss_ref_m > 0.0)) throw ConfigError("pathloss_ref_m must be > 0");
}

int SystemConfig::total_antennas() const {
    int total = 0;
    for (int n : antennas) total += n;
    return total;
}

void SystemConfig::set_uniform_sinr_db(double db) {
    sinr_target.assign(static_cast<std::size_t>(num_users), db_to_linear(db));
}

SystemConfig make_uniform_config(int num_rrh, int num_users, int antennas_per_rrh) {
    SystemConfig cfg;
    cfg.num_rrh = num_rrh;
    cfg.num_users = num_users;
    const auto L = static_cast<std::size_t>(std::max(num_rrh, 0));
    const auto K = static_cast<std::size_t>(std::max(num_users, 0));
    cfg.antennas.assign(L, antennas_per_rrh);
    cfg.max_power_w.assign(L, 1.0);
    cfg.fronthaul_power_w.assign(L, 13.0);
    cfg.efficiency.assign(L, 0.25);
    cfg.noise_power_w.assign(K, kDefaultNoisePowerW);
    cfg.sinr_target.assign(K, 1.0);
    return cfg;
}

SystemConfig default_config() { return make_uniform_config(10, 6, 2); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Channel::Channel(int num_users, int num_rrh, const std::vector<int>& antennas)
    : num_users_(num_users), num_rrh_(num_rrh) {
    h_.reserve(static_cast<std::size_t>(num_users * num_rrh));
    for (int k = 0; k < num_users; ++k) {
        for (int l = 0; l < num_rrh; ++l) h_.emplace_back(Eigen::VectorXcd::Zero(antennas[l]));
    }
}

std::uint64_t Channel::digest() const {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](const void* data, std::size_t bytes) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < bytes; ++i) {
            hash ^= p[i];
            hash *= 0x100000001b3ULL;
        }
    };
    mix(&num_users_, sizeof num_users_);
    mix(&num_rrh_, sizeof num_rrh_);
    for (const auto& vec : h_) {
        mix(vec.data(), static_cast<std::size_t>(vec.size()) * sizeof(Complex));
    }
    return hash;
}

Beamformer::Beamformer(int num_rrh, int num_users, const std::vector<int>& antennas)
    : num_rrh_(num_rrh), num_users_(num_users) {
    v_.reserve(static_cast<std::size_t>(num_rrh * num_users));
    for (int l = 0; l < num_rrh; ++l) {
        for (int k = 0; k < num_users; ++k) v_.emplace_back(Eigen::VectorXcd::Zero(antennas[l]));
    }
}

Beamformer Beamformer::zeros(const SystemConfig& cfg) {
    return Beamformer(cfg.num_rrh, cfg.num_users, cfg.antennas);
}

Eigen::VectorXcd Beamformer::stacked(int l) const {
    Eigen::Index total = 0;
    for (int k = 0; k < num_users_; ++k) total += at(l, k).size();
    Eigen::VectorXcd out(total);
    Eigen::Index offset = 0;
    for (int k = 0; k < num_users_; ++k) {
        const auto& block = at(l, k);
        out.segment(offset, block.size()) = block;
        offset += block.size();
    }
    return out;
}

double Beamformer::rrh_norm_sq(int l) const {
    double sum = 0.0;
    for (int k = 0; k < num_users_; ++k) sum += at(l, k).squaredNorm();
    return sum;
}

double Beamformer::rrh_norm(int l) const { return std::sqrt(rrh_norm_sq(l)); }

double Beamformer::distance(const Beamformer& other) const {
    if (other.v_.size() != v_.size()) throw ConfigError("beamformer shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) sum += (v_[i] - other.v_[i]).squaredNorm();
    return std::sqrt(sum);
}

void Beamformer::scale_user(int k, Complex factor) {
    for (int l = 0; l < num_rrh_; ++l) at(l, k) *= factor;
}

Selection Selection::relaxed(Eigen::VectorXd z) { return Selection{std::move(z), SelectionMode::Relaxed}; }

Selection Selection::binary(Eigen::VectorXd z) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z[i] != 0.0 && z[i] != 1.0) throw ConfigError("binary selection entries must be 0 or 1");
    }
    return Selection{std::move(z), SelectionMode::Binary};
}

Selection Selection::from_active(int num_rrh, const std::vector<int>& active) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(num_rrh);
    for (int l : active) z[l] = 1.0;
    return Selection{std::move(z), SelectionMode::Binary};
}

std::vector<int> Selection::active_set() const {
    std::vector<int> out;
    for (Eigen::Index l = 0; l < z.size(); ++l) {
        if (z[l] >= 0.5) out.push_back(static_cast<int>(l));
    }
    return out;
}

std::string Selection::bitstring() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(z.size()));
    for (Eigen::Index l = 0; l < z.size(); ++l) out.push_back(z[l] >= 0.5 ? '1' : '0');
    return out;
}

Topology generate_topology(const SystemConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double w = cfg.region_halfwidth_m;
    std::uniform_real_distribution<double> coord(-w, w);
    auto draw = [&]() -> Point {
        if (w == 0.0) return {};
        const double x = coord(rng);
        const double y = coord(rng);
        return {x, y};
    };
    Topology topo;
    topo.rrh_positions.reserve(static_cast<std::size_t>(cfg.num_rrh));
    topo.user_positions.reserve(static_cast<std::size_t>(cfg.num_users));
    for (int l = 0; l < cfg.num_rrh; ++l) topo.rrh_positions.push_back(draw());
    for (int k = 0; k < cfg.num_users; ++k) topo.user_positions.push_back(draw());
    return topo;
}

double pathloss_gain(const SystemConfig& cfg, double distance_m) {
    const double d = std::max(distance_m, cfg.pathloss_ref_m);
    return std::pow(d / cfg.pathloss_ref_m, -cfg.pathloss_exponent);
}

Channel generate_channel(const SystemConfig& cfg, const Topology& topo, std::uint64_t seed) {
    if (static_cast<int>(topo.rrh_positions.size()) != cfg.num_rrh ||
        static_cast<int>(topo.user_positions.size()) != cfg.num_users) {
        throw ConfigError("topology does not match configuration");
    }
    std::mt19937_64 rng(seed ^ kChannelStreamTag);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Channel ch(cfg.num_users, cfg.num_rrh, cfg.antennas);
    for (int k = 0; k < cfg.num_users; ++k) {
        for (int l = 0; l < cfg.num_rrh; ++l) {
            const Point& u = topo.user_positions[k];
            const Point& r = topo.rrh_positions[l];
            const double gain = pathloss_gain(cfg, std::hypot(u.x - r.x, u.y - r.y));
            const double amplitude = std::sqrt(gain);
            auto& h = ch.at(k, l);
            for (Eigen::Index a = 0; a < h.size(); ++a) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                h[a] = amplitude * Complex(re, im);
            }
        }
    }
    return ch;
}

Complex effective_gain(const Channel& ch, const Beamformer& v, int k, int i) {
    Complex sum{0.0, 0.0};
    for (int l = 0; l < ch.num_rrh(); ++l) sum += ch.at(k, l).dot(v.at(l, i));  // dot conjugates lhs
    return sum;
}

double network_power(const SystemConfig& cfg, const Selection& z, const Beamformer& v) {
    double total = 0.0;
    for (int l = 0; l < cfg.num_rrh; ++l) {
        total += cfg.fronthaul_power_w[l] * z.z[l];
        total += v.rrh_norm_sq(l) / cfg.efficiency[l];
    }
    return total;
}

double sinr(const SystemConfig& cfg, const Channel& ch, const Beamformer& v, int k) {
    double interference = 0.0;
    for (int i = 0; i < cfg.num_users; ++i) {
        if (i != k) interference += std::norm(effective_gain(ch, v, k, i));
    }
    return std::norm(effective_gain(ch, v, k, k)) / (interference + cfg.noise_power_w[k]);
}

double FeasibilityReport::max_violation() const {
    double worst = 0.0;
    for (double x : sinr_violation) worst = std::max(worst, x);
    for (double x : power_violation) worst = std::max(worst, x);
    return worst;
}

FeasibilityReport check_feasibility(const SystemConfig& cfg, const Channel& ch, const Beamformer& v,
                                    const Selection& z, double tol) {
    FeasibilityReport report;
    report.feasible = true;
    for (int k = 0; k < cfg.num_users; ++k) {
        double interference = 0.0;
        for (int i = 0; i < cfg.num_users; ++i) {
            if (i != k) interference += std::norm(effective_gain(ch, v, k, i));
        }
        const double lhs = std::sqrt(interference + cfg.noise_power_w[k]);
        const double signal = effective_gain(ch, v, k, k).real();
        const double gamma = cfg.sinr_target[k];
        // gamma = 0 leaves only the sign condition on the real part.
        const double violation = gamma > 0.0 ? lhs - signal / std::sqrt(gamma) : -signal;
        report.sinr_violation.push_back(violation);
        report.sinr_ok.push_back(violation <= tol);
        report.feasible = report.feasible && violation <= tol;
    }
    for (int l = 0; l < cfg.num_rrh; ++l) {
        const double violation = v.rrh_norm(l) - z.z[l] * std::sqrt(cfg.max_power_w[l]);
        report.power_violation.push_back(violation);
        report.power_ok.push_back(violation <= tol);
        report.feasible = report.feasible && violation <= tol;
    }
    return report;
}

Beamformer phase_normalize(const Channel& ch, const Beamformer& v) {
    Beamformer out = v;
    for (int k = 0; k < v.num_users(); ++k) {
        const Complex g = effective_gain(ch, v, k, k);
        const double magnitude = std::abs(g);
        if (magnitude == 0.0) continue;
        out.scale_user(k, std::conj(g) / magnitude);
    }
    return out;
}

double sphere_residual(const Eigen::VectorXd& z) {
    // Same value as n/4 - ||z - 1/2||^2, written so binary points give exact zeros.
    return (z.array() * (1.0 - z.array())).sum();
}

}  // namespace greenran
