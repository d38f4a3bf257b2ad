#pragma once

// Sectioned key = value scenario files and command-line overrides.
//
//   [scenario]  frame, scheme, user, threshold, seed, tick_s, ...
//   [field]     count, width_m, height_m, range_m, anchor_lat_deg, anchor_lon_deg
//   [wifi] [cellular]            scan_w, active_tx_w, active_rx_w, idle_w, throughput_Bps
//   [device]                     idle_w, suspended_w
//   [sensor.gps] [sensor.agps] [sensor.gsm] [sensor.zigbee]
//                                power_w, accuracy_m, fix_time_s
//   [energy]    scan_duration_s, decision_overhead_j, battery_capacity_mah, battery_voltage_v
//   [user.U1] .. [user.U4]       mean_rate_Bps, burstiness, uplink_fraction, pending_download_bytes
//   [threshold] B1 .. B4 (kb/s)
//   [sweep]     schemes, users, thresholds, seeds, parallel
//
// '#' and ';' start comments. Unknown sections or keys are errors.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locswitch/sim.hpp"

namespace locswitch {

struct FieldOverrides {
    std::optional<std::size_t> count;
    std::optional<double> width_m;
    std::optional<double> height_m;
    std::optional<double> range_m;
    std::optional<double> anchor_lat_deg;
    std::optional<double> anchor_lon_deg;
};

struct SweepSpec {
    /// Empty means the frame's five default schemes.
    std::vector<SwitchScheme> schemes;
    std::vector<UserClass> users{kAllUsers.begin(), kAllUsers.end()};
    std::vector<ThresholdId> thresholds{kAllThresholds.begin(), kAllThresholds.end()};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8};
    unsigned parallel = 1;
};

struct RunConfig {
    Frame frame = Frame::Outdoor;
    SwitchScheme scheme = SwitchScheme::GprsNonSwitching;
    UserClass user = UserClass::U1;
    ThresholdId threshold = ThresholdId::B1;
    std::uint64_t seed = 1;
    double tick_s = 1.0;
    double measure_interval_s = 30.0;
    double max_sim_time_s = 2'000'000.0;
    /// Defaults to the capacity implied by [energy].
    std::optional<double> battery_j;
    double v_user_mps = 1.0;
    double scan_period_s = 30.0;
    double wifi_dwell_s = 300.0;
    Termination termination = Termination::Depletion;
    std::optional<double> bytes_goal;
    double earth_radius_km = 6371.0;
    std::optional<std::filesystem::path> ap_log;
    std::optional<std::filesystem::path> trace;
    FieldOverrides field;
    PowerProfiles profiles = default_profiles();
    std::array<UserProfile, 4> users = default_users();
    std::array<Threshold, 4> thresholds = default_thresholds();
    SweepSpec sweep;
    /// Relative file paths in the config resolve against this directory.
    std::filesystem::path base_dir;
};

/// Sets one key. `where` prefixes error messages ("line 12" or "--set").
void apply_setting(RunConfig& config, std::string_view section, std::string_view key,
                   std::string_view value, const std::string& where);

/// "section.key=value"; the section may itself contain dots (sensor.gps.power_w).
void apply_override(RunConfig& config, std::string_view assignment);

/// Throws ConfigError with a "line N: " prefix.
RunConfig parse_config(const std::string& content, const std::filesystem::path& base_dir = {});
/// Throws ConfigError naming the path when it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// The scenario for `frame` with every setting applied and any referenced
/// AP log or trace loaded. Scheme, user, threshold and seed are the config's.
Scenario base_scenario(const RunConfig& config, Frame frame);

/// A copy of `base` with one grid cell's coordinates substituted.
Scenario grid_scenario(const Scenario& base, const RunConfig& config, SwitchScheme scheme,
                       UserClass user, ThresholdId threshold, std::uint64_t seed);

}  // namespace locswitch
