#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "yfl/experiments.hpp"
#include "yfl/keyvalue.hpp"
#include "yfl/yamabe_constant.hpp"

namespace yfl {

// Documented config keys. Values are plain text; lists are comma separated.
//
// background:  n, nodes, periods, kind, phi, R0, diff, background_dir
// flow:        mode, dt, T, stepper, monitor_stride, dealias, snapshot_every,
//              snapshot_times, u0, u0_file
// experiment:  limit, family, N, amplitude, amplitude_power, radius, kappa,
//              delta, C0, decrease_from, continuity_tol, volume_tol,
//              monotone_slack, tol_abs, tol_rel
// yamabe:      starts, start_amplitude, max_mode (plus dt, T, stepper)
// check:       checks, series, series_b, Y, kappa, vol, R0_min, sigma,
//              delta, psi, l1_variable, C0, monotone_from, alpha, beta,
//              column, tol_abs, tol_rel
// common:      seed, threads
const std::set<std::string>& background_keys();
const std::set<std::string>& flow_keys();
const std::set<std::string>& experiment_keys();
const std::set<std::string>& yamabe_keys();
const std::set<std::string>& check_keys();
const std::set<std::string>& common_keys();

/// Union of the key groups a subcommand accepts.
std::set<std::string> keys_for(const std::string& subcommand);

BackgroundSpec background_spec_from_config(const KeyValueConfig& c);
/// Builds the background, or loads it when background_dir is set.
BackgroundPtr background_from_config(const KeyValueConfig& c);
FlowConfig flow_from_config(const KeyValueConfig& c);
ExperimentSpec experiment_from_config(const KeyValueConfig& c);
YamabeEstimateConfig yamabe_from_config(const KeyValueConfig& c);
Tolerance tolerance_from_config(const KeyValueConfig& c);

/// Writes manifest.txt, R0.yfld, vol_weights.yfld and, for conformally flat
/// backgrounds, phi.yfld.
void save_background(const std::filesystem::path& dir, const Background& bg, const std::string& config_hash);
BackgroundPtr load_background(const std::filesystem::path& dir);

/// Hash of the canonical config text; stamped into every output.
std::string config_hash(const KeyValueConfig& c);

}  // namespace yfl
