#pragma once

// Finite-difference velocity-gauge Hamiltonian in the partial-wave basis.
//
// Per l the field-free block is tridiagonal: a 3-point kinetic stencil plus the
// centrifugal and Coulomb terms on the diagonal, optionally with -i*gamma.
// The dipole term A(t) p_z couples neighbouring columns l <-> l+1 through the
// antisymmetric central first derivative, which keeps p_z exactly Hermitian.

#include <vector>

#include "pescado/core.hpp"

namespace pescado {

struct FieldFreeBlock {
    int ell = 0;
    double h = 0.0;
    /// Real diagonal: 1/h^2 + l(l+1)/(2r^2) - 1/r.
    VectorXd diag;
    /// Constant off-diagonal, -1/(2h^2).
    double offdiag = 0.0;
    /// gamma(r_i) when the absorber is included, empty otherwise.
    VectorXd cap;
    bool include_cap = false;

    int N() const { return static_cast<int>(diag.size()); }

    MatrixXcd dense() const;
    /// Real-symmetric matrix of the Hermitian part.
    MatrixXd dense_hermitian() const;

    /// y = H_l x for the Hermitian part (no absorber).
    void apply_hermitian(const Eigen::Ref<const VectorXcd>& x, Eigen::Ref<VectorXcd> y) const;
};

/// `cap` is the absorber to append (already scaled, see SimulationConfig::effective_cap).
FieldFreeBlock build_field_free_block(const RadialGrid& grid, int ell, const CapParams& cap, bool include_cap);

/// p_z coupling data for fixed m.
struct DipoleCoupling {
    int L_max = 0;
    int m = 0;
    double h = 0.0;
    /// coeff[l] = sqrt((l^2 - m^2)/((2l-1)(2l+1))) for l = 1..L, coeff[0] = 0.
    std::vector<double> coeff;
    VectorXd inv_r;

    DipoleCoupling() = default;
    DipoleCoupling(const RadialGrid& grid, int L_max, int m = 0);

    /// out += scale * (p_z x) in partial-wave form.
    void apply_pz(const MatrixXcd& x, MatrixXcd& out, cplx scale) const;

    /// Dense (N(L+1))^2 matrix of p_z, columns stacked l-major. Test sizes only.
    MatrixXcd dense_pz() const;
};

/// Time-dependent Hermitian Hamiltonian H(t) = sum_l H_l + A(t) p_z. The
/// absorber is not part of it; the propagator applies it separately.
class Hamiltonian {
public:
    Hamiltonian(const RadialGrid& grid, int L_max, const PulseParams& pulse, int m = 0);

    int N() const { return grid_.N; }
    int L_max() const { return L_max_; }
    const RadialGrid& grid() const { return grid_; }
    const PulseParams& pulse() const { return pulse_; }
    const FieldFreeBlock& block(int ell) const { return blocks_[ell]; }
    const DipoleCoupling& coupling() const { return coupling_; }

    /// out = H(t) x (x and out are N x (L+1)).
    void apply(const MatrixXcd& x, double t, MatrixXcd& out) const;

    /// out = (H0 + a p_z) x for an explicit vector-potential value.
    void apply_with_field(const MatrixXcd& x, double a, MatrixXcd& out) const;

    /// Dense matrix of H(t); test sizes only.
    MatrixXcd dense(double t) const;

private:
    RadialGrid grid_;
    int L_max_;
    PulseParams pulse_;
    std::vector<FieldFreeBlock> blocks_;
    DipoleCoupling coupling_;
};

/// H(t) applied to a state. Throws std::invalid_argument on shape mismatch.
MatrixXcd apply_effective_hamiltonian(const PartialWaveState& state, double t, const Hamiltonian& H);

struct GroundState {
    PartialWaveState state;
    double energy = 0.0;
};

/// Lowest eigenpair of the Hermitian l = 0 block, unit norm, positive, in column 0.
GroundState ground_state(const RadialGrid& grid, int L_max);

/// Lowest `count` eigenvalues of the Hermitian field-free block for `ell`.
VectorXd bound_energies(const RadialGrid& grid, int ell, int count);

}  // namespace pescado
