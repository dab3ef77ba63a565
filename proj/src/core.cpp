#include "pescado/core.hpp"

#include <cmath>

namespace pescado {

RadialGrid::RadialGrid(int n, double spacing) : N(n), h(spacing) {
    if (n < 2) throw ConfigError("grid", 0, "grid needs at least two interior points");
    if (!(spacing > 0.0)) throw ConfigError("grid.h", 0, "grid spacing must be positive");
}

RadialGrid RadialGrid::from_box(double h, double R) {
    if (!(h > 0.0)) throw ConfigError("grid.h", 0, "grid spacing must be positive");
    if (!(R > 2.0 * h)) throw ConfigError("grid.R", 0, "box must hold at least two points");
    const double cells = R / h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * cells)
        throw ConfigError("grid.R", 0, "R must be an integer multiple of h");
    return RadialGrid(static_cast<int>(rounded) - 1, h);
}

VectorXd RadialGrid::radii() const {
    VectorXd r(N);
    for (int i = 0; i < N; ++i) r[i] = this->r(i);
    return r;
}

double vector_potential(double t, const PulseParams& pulse) {
    const double T = pulse.duration();
    if (t <= 0.0 || t >= T) return 0.0;
    const double s = std::sin(kPi * t / T);
    return pulse.E0 / pulse.omega * s * s * std::cos(pulse.omega * t);
}

double cap_profile(double r, const CapParams& cap) {
    if (r <= cap.R_c) return 0.0;
    const double d = r - cap.R_c;
    return cap.gamma0 * d * d;
}

VectorXd cap_on_grid(const RadialGrid& grid, const CapParams& cap) {
    VectorXd g(grid.N);
    for (int i = 0; i < grid.N; ++i) g[i] = cap_profile(grid.r(i), cap);
    return g;
}

int cap_first_row(const RadialGrid& grid, const CapParams& cap) {
    for (int i = 0; i < grid.N; ++i)
        if (grid.r(i) > cap.R_c) return i;
    return grid.N;
}

void SimulationConfig::validate() const {
    auto require = [](bool ok, const char* key, const char* msg) {
        if (!ok) throw ConfigError(key, 0, msg);
    };
    require(grid.h > 0.0, "grid.h", "must be positive");
    require(grid.N >= 2, "grid.R", "box must hold at least two points");
    require(L_max >= 0, "grid.L_max", "must be non-negative");
    require(pulse.E0 >= 0.0, "pulse.E0", "must be non-negative");
    require(pulse.omega > 0.0, "pulse.omega", "must be positive");
    require(pulse.n_cycles >= 1, "pulse.n_cycles", "must be at least 1");
    require(cap.gamma0 >= 0.0, "cap.gamma0", "must be non-negative");
    require(cap.R_c > 0.0 && cap.R_c < grid.R(), "cap.R_c", "must satisfy 0 < R_c < R");
    require(steps_per_cycle >= 1, "propagation.steps_per_cycle", "must be positive");
    require(krylov_dim >= 2, "propagation.krylov_dim", "must be at least 2");
    require(analysis_stride >= 1, "analysis.stride", "must be at least 1");
    require(energy.min > 0.0, "energy.min", "must be positive");
    require(energy.max > energy.min, "energy.max", "must exceed energy.min");
    require(energy.step > 0.0, "energy.step", "must be positive");
    require(theta_points >= 2, "angles.theta_points", "must be at least 2");
    require(cutoff_c >= 0.0, "analysis.cutoff_c", "must be non-negative");
}

cplx PartialWaveState::inner(const PartialWaveState& other) const {
    cplx s = 0.0;
    for (Eigen::Index c = 0; c < data.cols(); ++c) s += data.col(c).dot(other.data.col(c));
    return h * s;
}

}  // namespace pescado
