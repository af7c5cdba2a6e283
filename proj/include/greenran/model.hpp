#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace greenran {

using Complex = std::complex<double>;

/// Raised for malformed configurations or inconsistent shapes.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Physical and network constants of one Cloud-RAN instance.
///
/// Per-RRH vectors have length `num_rrh`, per-user vectors length `num_users`.
struct SystemConfig {
    int num_rrh = 10;
    int num_users = 6;
    std::vector<int> antennas;              // N_l
    std::vector<double> max_power_w;        // P_l
    std::vector<double> fronthaul_power_w;  // P_l^c
    std::vector<double> efficiency;         // eta_l in (0, 1]
    std::vector<double> noise_power_w;      // sigma_k^2
    std::vector<double> sinr_target;        // gamma_k, linear
    double region_halfwidth_m = 1000.0;
    double pathloss_exponent = 3.7;
    double pathloss_ref_m = 50.0;
    std::uint64_t seed = 0;

    /// Throws ConfigError if any field is out of range.
    void validate() const;

    int total_antennas() const;
    void set_uniform_sinr_db(double db);
};

/// The reference network: L = 10 two-antenna RRHs, K = 6 users, 13 W fronthaul, eta = 1/4.
SystemConfig default_config();

/// Uniform per-RRH/per-user config with the given dimensions and default constants.
SystemConfig make_uniform_config(int num_rrh, int num_users, int antennas_per_rrh);

double db_to_linear(double db);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Topology {
    std::vector<Point> rrh_positions;
    std::vector<Point> user_positions;
};

/// Channel vectors h_kl, stored user-major.
class Channel {
public:
    Channel() = default;
    Channel(int num_users, int num_rrh, const std::vector<int>& antennas);

    int num_users() const { return num_users_; }
    int num_rrh() const { return num_rrh_; }

    Eigen::VectorXcd& at(int k, int l) { return h_[static_cast<std::size_t>(k * num_rrh_ + l)]; }
    const Eigen::VectorXcd& at(int k, int l) const {
        return h_[static_cast<std::size_t>(k * num_rrh_ + l)];
    }

    /// 64-bit FNV-1a digest over the raw coefficient bytes.
    std::uint64_t digest() const;

private:
    int num_users_ = 0;
    int num_rrh_ = 0;
    std::vector<Eigen::VectorXcd> h_;
};

/// Beamforming vectors v_lk, stored RRH-major.
class Beamformer {
public:
    Beamformer() = default;
    Beamformer(int num_rrh, int num_users, const std::vector<int>& antennas);
    static Beamformer zeros(const SystemConfig& cfg);

    int num_rrh() const { return num_rrh_; }
    int num_users() const { return num_users_; }

    Eigen::VectorXcd& at(int l, int k) { return v_[static_cast<std::size_t>(l * num_users_ + k)]; }
    const Eigen::VectorXcd& at(int l, int k) const {
        return v_[static_cast<std::size_t>(l * num_users_ + k)];
    }

    /// Stacked per-RRH vector [v_l1; ...; v_lK].
    Eigen::VectorXcd stacked(int l) const;
    double rrh_norm_sq(int l) const;
    double rrh_norm(int l) const;

    /// Frobenius distance between two beamformers of the same shape.
    double distance(const Beamformer& other) const;

    /// Multiplies user k's beamformers on every RRH by `factor`.
    void scale_user(int k, Complex factor);

private:
    int num_rrh_ = 0;
    int num_users_ = 0;
    std::vector<Eigen::VectorXcd> v_;
};

enum class SelectionMode { Relaxed, Binary };

struct Selection {
    Eigen::VectorXd z;
    SelectionMode mode = SelectionMode::Relaxed;

    static Selection relaxed(Eigen::VectorXd z);
    /// Throws ConfigError unless every entry is exactly 0 or 1.
    static Selection binary(Eigen::VectorXd z);
    static Selection from_active(int num_rrh, const std::vector<int>& active);

    std::vector<int> active_set() const;
    std::string bitstring() const;
};

Topology generate_topology(const SystemConfig& cfg, std::uint64_t seed);
Channel generate_channel(const SystemConfig& cfg, const Topology& topo, std::uint64_t seed);

/// Large-scale gain (max(d, d_ref) / d_ref)^(-exponent).
double pathloss_gain(const SystemConfig& cfg, double distance_m);

/// h_k^H v_i summed over all RRHs.
Complex effective_gain(const Channel& ch, const Beamformer& v, int k, int i);

double network_power(const SystemConfig& cfg, const Selection& z, const Beamformer& v);
double sinr(const SystemConfig& cfg, const Channel& ch, const Beamformer& v, int k);

struct FeasibilityReport {
    std::vector<bool> sinr_ok;
    std::vector<bool> power_ok;
    std::vector<double> sinr_violation;
    std::vector<double> power_violation;
    bool feasible = false;

    double max_violation() const;
};

FeasibilityReport check_feasibility(const SystemConfig& cfg, const Channel& ch, const Beamformer& v,
                                    const Selection& z, double tol);

/// Rotates each user's beamformer so that h_k^H v_k is real and nonnegative.
Beamformer phase_normalize(const Channel& ch, const Beamformer& v);

/// L/4 - ||z - 1/2||^2. Nonnegative on the box, zero exactly on its vertices.
double sphere_residual(const Eigen::VectorXd& z);
inline double sphere_residual(const Selection& s) { return sphere_residual(s.z); }

}  // namespace greenran
