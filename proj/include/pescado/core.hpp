#pragma once

// Shared value types: radial grid, pulse, absorber, run configuration and the
// partial-wave container. Atomic units throughout.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pescado {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Raised for malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, int line, const std::string& what)
        : std::runtime_error(format(key, line, what)), key_(std::move(key)), line_(line) {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string s = "config";
        if (line > 0) s += " line " + std::to_string(line);
        if (!key.empty()) s += " [" + key + "]";
        return s + ": " + what;
    }
    std::string key_;
    int line_;
};

/// Raised when a numerical stage cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform grid r_i = i*h, i = 1..N, with Dirichlet walls at r = 0 and r = R = (N+1)h.
struct RadialGrid {
    int N = 0;
    double h = 0.0;

    RadialGrid() = default;
    RadialGrid(int n, double spacing);

    /// Builds the grid for box size R; R/h must be an integer.
    static RadialGrid from_box(double h, double R);

    double R() const { return (N + 1) * h; }
    /// Radius of 0-based row index i.
    double r(int i) const { return (i + 1) * h; }
    VectorXd radii() const;

    bool operator==(const RadialGrid& o) const { return N == o.N && h == o.h; }
};

/// sin^2-enveloped vector potential, polarized along z.
struct PulseParams {
    double E0 = 0.075;
    double omega = 0.114;
    int n_cycles = 10;

    double duration() const { return n_cycles * 2.0 * kPi / omega; }
};

struct CapParams {
    double gamma0 = 1e-4;
    double R_c = 60.0;
};

/// A(t) = (E0/omega) sin^2(pi t/T) cos(omega t) on [0, T], zero elsewhere.
double vector_potential(double t, const PulseParams& pulse);

/// gamma(r) = gamma0 (r - R_c)^2 beyond the onset, zero inside.
double cap_profile(double r, const CapParams& cap);

/// gamma(r_i) sampled on the grid.
VectorXd cap_on_grid(const RadialGrid& grid, const CapParams& cap);

/// Index of the first grid row with r > R_c (N when the absorber lies outside the box).
int cap_first_row(const RadialGrid& grid, const CapParams& cap);

struct EnergyGridSpec {
    double min = 0.01;
    double max = 1.5;
    double step = 1e-3;
};

struct SimulationConfig {
    RadialGrid grid = RadialGrid::from_box(0.2, 150.0);
    int L_max = 12;
    PulseParams pulse;
    CapParams cap;
    int steps_per_cycle = 1000;
    int krylov_dim = 20;
    int analysis_stride = 5;
    EnergyGridSpec energy;
    int theta_points = 721;
    double cutoff_c = 1e-12;
    bool restrict_re_positive = false;
    /// Project the grid's bound states out of the continuum waves. Without it
    /// slowly absorbed Rydberg states leak into dP/deps near threshold.
    bool project_bound = true;
    /// Use exp(-gamma dt/2) half steps instead of the exp(-gamma dt) factors.
    bool halved_cap = false;

    double dt() const { return 2.0 * kPi / pulse.omega / steps_per_cycle; }
    int total_steps() const { return pulse.n_cycles * steps_per_cycle; }

    /// Ratio between the absorber seen by the dynamics and gamma(r).
    ///
    /// Applying exp(-gamma dt) on both sides of the Hermitian factor is the
    /// symmetric splitting of H - 2i gamma; with halved factors it is H - i gamma.
    double cap_scale() const { return halved_cap ? 1.0 : 2.0; }

    /// The absorber that actually enters H_eff, i.e. gamma scaled by cap_scale().
    CapParams effective_cap() const { return {cap.gamma0 * cap_scale(), cap.R_c}; }

    /// Throws ConfigError on the first violated invariant.
    void validate() const;
};

/// Reduced radial partial waves f_l(r_i) stored column-wise, l = 0..L.
struct PartialWaveState {
    MatrixXcd data;
    int m = 0;
    double t = 0.0;
    double h = 0.0;

    PartialWaveState() = default;
    PartialWaveState(const RadialGrid& grid, int L_max, int m_ = 0)
        : data(MatrixXcd::Zero(grid.N, L_max + 1)), m(m_), h(grid.h) {}

    int N() const { return static_cast<int>(data.rows()); }
    int L_max() const { return static_cast<int>(data.cols()) - 1; }

    /// h * sum |f_l(r_i)|^2
    double norm_squared() const { return h * data.squaredNorm(); }

    /// h-weighted inner product <this|other>.
    cplx inner(const PartialWaveState& other) const;
};

}  // namespace pescado
