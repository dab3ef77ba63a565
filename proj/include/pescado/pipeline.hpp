#pragma once

// Run orchestration shared by the command-line tool and the acceptance suite.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pescado/analysis.hpp"
#include "pescado/config.hpp"
#include "pescado/continuum.hpp"
#include "pescado/propagator.hpp"

namespace pescado {

/// Everything the pulse stage leaves behind.
struct PulseStage {
    std::shared_ptr<ContinuumBasis> basis;
    std::shared_ptr<BeforeAccumulator> acc;
    PartialWaveState psi;  // state at the partition time
    double norm_0 = 1.0;
    double ground_energy = 0.0;
    double seconds = 0.0;
};

/// Builds the continuum basis, propagates the ground state through the pulse
/// and accumulates the before-pulse integrals. Progress lines go to `log`.
PulseStage run_pulse(const SimulationConfig& config, std::ostream* log = nullptr);

/// Continues field-free for `steps` steps, still accumulating, and moves the
/// partition time accordingly.
void extend_partition(PulseStage& stage, const SimulationConfig& config, int steps);

struct AfterStage {
    std::shared_ptr<EffectiveBlockDecomposition> decomp;
    AfterInputs inputs;
    SpectralParts parts;
    /// Absorption total after the partition with the other Re eps > 0 setting.
    double absorption_after_alt = 0.0;
    double seconds_eigen = 0.0;
    double seconds_after = 0.0;
};

/// Eigendecomposition, after-pulse inputs and coefficients. The decomposition
/// can be shared between runs with identical grid and absorber.
AfterStage run_after(const SimulationConfig& config, const PulseStage& pulse,
                     std::shared_ptr<EffectiveBlockDecomposition> decomp = nullptr);

struct RunOptions {
    std::string out_dir;
    bool skip_after = false;
    std::string from_checkpoint;
    std::ostream* log = nullptr;
};

struct RunSummary {
    SpectraBundle spectra;
    double absorption_after_alt = 0.0;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
};

/// Full pipeline with on-disk outputs: psi_T.chk, accumulators.bin,
/// dPdE.csv, d2P.csv, dPdOmegaK.csv, dPdOmegaAbs.csv and manifest.json.
RunSummary cmd_run(const SimulationConfig& config, const RunOptions& options);

/// Runs every R_c into out_dir/rc<value>/ and writes the comparison tables.
std::vector<RunSummary> cmd_scan_rc(const SimulationConfig& base, const std::vector<double>& rc_list,
                                    const RunOptions& options);

struct ValidationItem {
    std::string name;
    /// "PASS", "FAIL" or "WARN"
    std::string status;
    std::string detail;
};

/// Fast property suite on the configured sizes; no propagation.
std::vector<ValidationItem> cmd_validate(const SimulationConfig& config);

/// Human-readable summary of a configuration and its derived sizes.
std::string describe(const SimulationConfig& config);

/// Before-pulse accumulators on disk (same header style as the checkpoint).
void write_accumulators(const std::string& path, const BeforeAccumulator& acc, double norm_0,
                        const std::string& config_hash);
struct StoredAccumulators {
    MatrixXcd C, M;
    double norm_0 = 1.0;
    std::string config_hash;
};
StoredAccumulators read_accumulators(const std::string& path);

std::string format_rc(double rc);

}  // namespace pescado
