#pragma once

// Split-operator time stepping: absorber factor, Krylov exponential of the
// Hermitian Hamiltonian at the midpoint, absorber factor.

#include <functional>
#include <string>

#include "pescado/core.hpp"
#include "pescado/hamiltonian.hpp"

namespace pescado {

/// Arnoldi basis and projected Hessenberg matrix for exp(-i H dt) v.
class KrylovWorkspace {
public:
    KrylovWorkspace(int N, int L_max, int k_dim);

    int k_dim() const { return k_dim_; }
    /// Dimension actually used by the last step (smaller after a happy breakdown).
    int last_dim() const { return last_dim_; }
    /// Basis vectors of the last step, h-weighted orthonormal columns.
    const MatrixXcd& basis() const { return basis_; }
    const MatrixXcd& hessenberg() const { return hess_; }

private:
    friend PartialWaveState hermitian_exp_step(const PartialWaveState&, double, double, KrylovWorkspace&,
                                               const Hamiltonian&);
    int N_, L_max_, k_dim_;
    int last_dim_ = 0;
    MatrixXcd basis_;  // (N(L+1)) x (k+1)
    MatrixXcd hess_;   // (k+1) x k
    MatrixXcd w_, scratch_;
};

/// Multiplies row i of every column by exp(-gamma(r_i) dt).
void cap_half_step(PartialWaveState& state, const VectorXd& cap_factor);

/// exp(-gamma(r_i) dt) on the grid.
VectorXd cap_half_factor(const RadialGrid& grid, const CapParams& cap, double dt);

/// Arnoldi approximation of exp(-i H(t_mid) dt) state. Throws NumericalError
/// for a zero input vector.
PartialWaveState hermitian_exp_step(const PartialWaveState& state, double t_mid, double dt,
                                    KrylovWorkspace& workspace, const Hamiltonian& H);

/// Called with the state after a full step, its time, and the trapezoid weight
/// of that sample on the run's sample grid.
using SampleHook = std::function<void(const PartialWaveState&, double t, double weight)>;

/// Called once per optical cycle (and on the last step) for progress reporting.
using ProgressHook = std::function<void(int step, double t, double norm)>;

struct PropagationOptions {
    int steps = 0;
    double dt = 0.0;
    int krylov_dim = 20;
    int sample_stride = 1;
    int progress_every = 0;
};

/// Runs `options.steps` split steps from state.t with half-step factors
/// exp(-absorber(r) dt/2), i.e. under H - i*absorber. The sample hook is invoked
/// at the start time and every sample_stride steps thereafter, always
/// including the final step; weights realize the trapezoid rule on those times.
PartialWaveState propagate(PartialWaveState state, const Hamiltonian& H, const CapParams& absorber,
                           const PropagationOptions& options, const SampleHook& sample = {},
                           const ProgressHook& progress = {});

/// Propagation through the full pulse as configured (n_cycles * steps_per_cycle steps).
PartialWaveState propagate_pulse(const PartialWaveState& initial, const SimulationConfig& config,
                                 const SampleHook& sample = {}, const ProgressHook& progress = {});

/// Field-free continuation with the absorber for `steps` steps of the configured dt.
PartialWaveState propagate_field_free(const PartialWaveState& initial, const SimulationConfig& config, int steps,
                                      const SampleHook& sample = {});

/// Binary checkpoint: header lines `key:value` (N, L, h, m, t, config_hash), a
/// blank line, then N x (L+1) complex values row-major as little-endian float64
/// (re, im) pairs.
void write_checkpoint(const std::string& path, const PartialWaveState& state, const std::string& config_hash);

struct Checkpoint {
    PartialWaveState state;
    std::string config_hash;
};

Checkpoint read_checkpoint(const std::string& path);

}  // namespace pescado
