#pragma once

// Spectra from the absorbed flux.
//
// Everything here is expressed through two coefficient sets:
//   W_{ll'}(eps)  d2P/(deps dOmega_k) = Re sum_{ll'} i^{-(l-l')} e^{-i(s_l - s_l')} Y_l Y_l' W_{ll'}
//   Z_{ll'}       dP/dOmega           = Re sum_{ll'} Y_l Y_l' Z_{ll'}
// The before-pulse part of W is 2 C, of Z is 2 M; the after-pulse parts come
// from the eigen-expansion of Psi(T) and carry a factor -2i.
//
// The absorber passed in is always the one that acts in the dynamics
// (SimulationConfig::effective_cap).

#include <vector>

#include "pescado/continuum.hpp"
#include "pescado/core.hpp"

namespace pescado {

/// Time integrals of (psi|gamma|f_l)(psi|f_l')^* and (f_l'|gamma|f_l) over
/// the sampled states. Samples are buffered and folded in blocks.
class BeforeAccumulator {
public:
    BeforeAccumulator(const ContinuumBasis& basis, const CapParams& absorber, int batch = 32);

    void add(const PartialWaveState& state, double weight);
    /// Folds buffered samples in; accessors call it implicitly.
    void flush() const;

    /// C_{ll'}(eps_j) as an N_eps x (L+1)^2 matrix, column l + (L+1) l'.
    const MatrixXcd& C() const;
    /// M_{ll'} ((L+1) x (L+1), Hermitian).
    const MatrixXcd& M() const;
    /// 2 tr M: the norm that entered the absorber.
    double absorbed() const;
    int samples() const { return samples_; }
    const ContinuumBasis& basis() const { return basis_; }

private:
    const ContinuumBasis& basis_;
    VectorXd gamma_;
    int first_row_;
    int batch_;
    int samples_ = 0;
    mutable std::vector<MatrixXd> pending_;  // per l: N x 2B, columns (re | im)
    mutable std::vector<double> weights_;
    mutable MatrixXcd C_, M_;
};

struct BlockDiagnostics {
    /// max_n ||H phi_n - eps_n phi_n|| / ||phi_n||
    double eigen_residual = 0.0;
    /// max |(P^-1 P - I)_{ij}|
    double biorth_deviation = 0.0;
    double rcond = 0.0;
    bool pseudo_inverse = false;
    int truncated = 0;
    double max_imag = 0.0;
};

/// One l block of H_eff^(0): eigenvalues, right eigenvectors P (unit columns)
/// and P^-1, so that the left states are (P^-1)^dagger / h.
struct EigenBlock {
    int ell = 0;
    VectorXcd values;
    MatrixXcd P;
    MatrixXcd P_inv;
    BlockDiagnostics diag;

    /// Columns are the left states: h P_tilde^dagger P = I.
    MatrixXcd left_states(double h) const { return P_inv.adjoint() / h; }
};

EigenBlock eigendecompose_field_free(const RadialGrid& grid, const CapParams& absorber, int ell,
                                     double cond_limit = 1e12);

struct EffectiveBlockDecomposition {
    RadialGrid grid;
    CapParams absorber;
    std::vector<EigenBlock> blocks;
};

EffectiveBlockDecomposition eigendecompose_all(const RadialGrid& grid, const CapParams& absorber, int L_max,
                                               double cond_limit = 1e12);

struct AfterBlock {
    /// c_n = (phi_tilde_n | f_l(T))
    VectorXcd c;
    /// (psi_eps | gamma | phi_n), N_eps x N
    MatrixXcd g;
    /// (psi_eps | phi_n), N_eps x N
    MatrixXcd q;
    /// Indices n kept in the n-sum.
    std::vector<int> active;
};

struct AfterInputs {
    const EffectiveBlockDecomposition* decomp = nullptr;
    const ContinuumBasis* basis = nullptr;
    double cutoff_c = 1e-12;
    bool restrict_re_positive = false;
    std::vector<AfterBlock> blocks;

    /// Re-filters the n-sum: Im eps_n < -cutoff_c, and Re eps_n > 0 if requested.
    void select(double cutoff_c, bool restrict_re_positive);
};

AfterInputs build_after_inputs(const EffectiveBlockDecomposition& decomp, const PartialWaveState& psi_T,
                               const ContinuumBasis& basis, double cutoff_c, bool restrict_re_positive);

struct SpectralParts {
    MatrixXcd W;  // N_eps x (L+1)^2, column l + (L+1) l'
    MatrixXcd Z;  // (L+1) x (L+1)
};

SpectralParts before_parts(const BeforeAccumulator& acc);

enum class CoherentTerms { none, diagonal, full };

/// After-pulse coefficients. `terms` selects which W columns are filled
/// (diagonal is enough for dP/deps); Z is skipped when with_absorption is false.
SpectralParts after_parts(const AfterInputs& inputs, CoherentTerms terms = CoherentTerms::full,
                          bool with_absorption = true);

/// Local maxima of `spectrum` that dominate a +-0.4 omega window and exceed
/// floor_rel times the global maximum; returns their indices.
std::vector<int> ati_peaks(const VectorXd& eps, const VectorXd& spectrum, double omega, double floor_rel = 1e-4);

/// dP/deps = Re sum_l W_ll.
VectorXd energy_spectrum(const MatrixXcd& W, int L_max);

/// N_eps x N_theta doubly differential distribution.
MatrixXd doubly_differential(const MatrixXcd& W, const ContinuumBasis& basis, const VectorXd& theta);

/// dP/dOmega on the theta grid.
VectorXd absorption_angle(const MatrixXcd& Z, const VectorXd& theta);

/// Integral of dP/dOmega over the sphere: Re tr Z.
double absorption_total(const MatrixXcd& Z);

/// After-pulse dP/deps alone (diagonal path).
VectorXd after_energy_spectrum(const AfterInputs& inputs);
MatrixXd after_doubly_differential(const AfterInputs& inputs, const VectorXd& theta);
VectorXd after_absorption_angle(const AfterInputs& inputs, const VectorXd& theta);

/// Trapezoid rule on a uniform or non-uniform abscissa.
double trapezoid(const VectorXd& x, const VectorXd& y);

struct SpectraBundle {
    VectorXd eps, theta;
    VectorXd dPdE_before, dPdE_after, dPdE_total;
    MatrixXd d2P;  // total, N_eps x N_theta
    VectorXd dPdOmegaK_before, dPdOmegaK_after, dPdOmegaK_total;
    VectorXd dPdOmega_before, dPdOmega_after, dPdOmega_total;

    double absorbed_during_pulse = 0.0;
    double norm_T = 0.0;
    double ionization = 0.0;        // integral of dP/deps over the grid
    double absorption_before = 0.0;
    double absorption_after = 0.0;
    /// min dP/deps over max dP/deps; negative values flag spurious negative probabilities.
    double min_over_peak = 0.0;
    bool negative_probability = false;
};

/// Sums before and after parts and evaluates every output on `theta`.
SpectraBundle assemble(const SpectralParts& before, const SpectralParts& after, const ContinuumBasis& basis,
                       const VectorXd& theta, double norm_T);

/// Relative tolerance of the negative-probability check.
inline constexpr double kNegativeTolerance = 1e-4;

}  // namespace pescado
