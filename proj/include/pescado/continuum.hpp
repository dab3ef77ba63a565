#pragma once

// Energy-normalized hydrogen scattering waves on the radial grid, Coulomb
// phases and the m = 0 angular functions used to assemble spectra.

#include <vector>

#include "pescado/core.hpp"

namespace pescado {

struct EnergyGrid {
    VectorXd eps;
    VectorXd k;

    EnergyGrid() = default;
    explicit EnergyGrid(const EnergyGridSpec& spec);
    explicit EnergyGrid(VectorXd energies);

    int size() const { return static_cast<int>(eps.size()); }
};

/// arg Gamma(l + 1 + i/k) with k = sqrt(2 eps); continuous in eps.
double coulomb_phase(int ell, double eps);

struct CoulombFit {
    /// Amplitude of the raw Numerov solution in units of the regular function F_l.
    double amplitude = 0.0;
    /// |B/A| of the two-point fit u = A F + B G; zero for an exact regular solution.
    double irregular_ratio = 0.0;
};

/// Regular solution of u'' = [l(l+1)/r^2 - 2Z/r - k^2] u on the grid, scaled
/// so that u ~ sqrt(2/(pi k)) F_l(kr). For Z = 1 the asymptote is
/// sqrt(2/(pi k)) sin(kr + ln(2kr)/k - l pi/2 - sigma_l) with sigma_l from
/// coulomb_phase. Z = 0 gives the free Riccati-Bessel wave.
/// Throws NumericalError when the fit leaves an irregular part above 1e-6.
VectorXd coulomb_wave(int ell, double eps, const RadialGrid& grid, double charge = 1.0, CoulombFit* fit = nullptr);

/// max over interior points of the 3-point discrete residual of the radial
/// equation relative to |k^2 u|, in the 2-norm. O(h^2).
double coulomb_residual(const VectorXd& u, int ell, double eps, const RadialGrid& grid);

/// Residual at the top of the energy grid above which a grid counts as coarse.
inline constexpr double kCoulombResidualWarn = 0.02;

/// Per-l tables of psi_eps^l(r_i) (rows: energies) and sigma_l(eps).
///
/// With project_bound the negative-energy eigenvectors of the discrete
/// field-free block are projected out of every wave. The sampled Coulomb
/// waves are otherwise orthogonal to the grid's bound states only up to O(h^2).
class ContinuumBasis {
public:
    ContinuumBasis(const RadialGrid& grid, const EnergyGrid& energies, int L_max, bool project_bound = false);

    const RadialGrid& grid() const { return grid_; }
    const EnergyGrid& energies() const { return energies_; }
    int L_max() const { return L_max_; }

    /// N_eps x N real matrix for `ell`; built on first use.
    const MatrixXd& waves(int ell) const;
    /// sigma_l at every energy.
    const VectorXd& phases(int ell) const { return phases_[ell]; }

    /// Largest irregular-part ratio met while building the waves so far.
    double worst_fit() const { return worst_fit_; }
    bool project_bound() const { return project_bound_; }

private:
    RadialGrid grid_;
    EnergyGrid energies_;
    int L_max_;
    bool project_bound_;
    std::vector<VectorXd> phases_;
    mutable std::vector<MatrixXd> waves_;
    mutable std::vector<bool> built_;
    mutable double worst_fit_ = 0.0;
};

/// Y_{l,m}(theta, phi = 0) for each theta.
VectorXd legendre_spherical(int ell, int m, const VectorXd& theta);

/// Uniform grid of n points on [0, pi].
VectorXd uniform_theta(int n);

struct Quadrature {
    VectorXd nodes;
    VectorXd weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Quadrature gauss_legendre(int n);

}  // namespace pescado
