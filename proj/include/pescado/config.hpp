#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pescado/core.hpp"

namespace pescado {

/// Parses `section.key = value` lines (`#` starts a comment). Keys not present
/// keep their defaults; the result is validated before it is returned.
///
/// Recognized keys:
///   grid.h, grid.R, grid.L_max
///   pulse.E0, pulse.omega, pulse.n_cycles
///   cap.gamma0, cap.R_c
///   propagation.steps_per_cycle, propagation.krylov_dim
///   analysis.stride, analysis.cutoff_c, analysis.restrict_re_positive,
///   analysis.project_bound
///   energy.min, energy.max, energy.step
///   angles.theta_points
///   split.halved_cap
SimulationConfig load_config(std::string_view text);

SimulationConfig load_config_file(const std::string& path);

/// Canonical text form; load_config(serialize_config(c)) == c.
std::string serialize_config(const SimulationConfig& config);

/// Lower-case hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 (hex) of the canonical serialization.
std::string config_hash(const SimulationConfig& config);

/// Named experiment presets: "400nm", "200nm", and "<preset>-rc<value>",
/// e.g. "400nm-rc60". The box grows to R = 200 when R_c >= 120.
SimulationConfig preset(const std::string& name);

std::vector<std::string> preset_names();

bool operator==(const SimulationConfig& a, const SimulationConfig& b);

}  // namespace pescado
