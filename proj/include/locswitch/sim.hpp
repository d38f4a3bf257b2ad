#pragma once

// Fixed-tick simulator. Each tick: take a rate sample on the measurement grid,
// let the scheme act (decide, locate, scan, connect), integrate radio and
// device power over the tick, drain the battery, move the user. Battery
// depletion inside a tick is pro-rated so the run ends at the exact instant.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locswitch/ap_registry.hpp"
#include "locswitch/energy.hpp"
#include "locswitch/switching.hpp"
#include "locswitch/workload.hpp"

namespace locswitch {

enum class Termination { Depletion, BytesGoal };
enum class StopReason { BatteryDepleted, BytesGoalReached, MaxSimTime };

std::string_view to_string(Termination t) noexcept;
std::optional<Termination> parse_termination(std::string_view s) noexcept;
std::string_view to_string(StopReason r) noexcept;

struct Scenario {
    Frame frame = Frame::Outdoor;
    /// Used as-is when present; otherwise generated from `field` and `seed`.
    std::optional<ApLog> ap_log;
    FieldSpec field = default_field(Frame::Outdoor);
    UserProfile user = default_user(UserClass::U1);
    Threshold threshold = default_threshold(ThresholdId::B1);
    SwitchScheme scheme = SwitchScheme::GprsNonSwitching;
    double v_user_mps = 1.0;
    PowerProfiles profiles = default_profiles();
    double battery_j = default_profiles().battery_capacity_j();
    std::uint64_t seed = 1;
    double tick_s = 1.0;
    double measure_interval_s = 30.0;
    double max_sim_time_s = 2'000'000.0;
    Termination termination = Termination::Depletion;
    /// Bytes-goal target; defaults to the user's pending download.
    std::optional<double> bytes_goal;
    double scan_period_s = 30.0;
    /// Time spent on a Wi-Fi AP before the user moves on to a new spot.
    double wifi_dwell_s = 300.0;
    EarthModel earth;
    std::optional<RateTrace> replay_trace;
    bool record_events = false;

    /// Throws ConfigError (or its SchemeFrameMismatch subclass).
    void validate() const;
};

/// The scenario every grid cell starts from: default constants in `frame`.
Scenario default_scenario(Frame frame);

struct MobilityState {
    Position true_position;
    std::optional<Position> target;
    double speed_mps = 1.0;

    /// Moves speed * dt toward the target without overshooting it.
    void advance(double dt_s, const EarthModel& earth);
};

struct SimReport {
    EnergyLedger ledger;
    double bytes_tx = 0.0;
    double bytes_rx = 0.0;
    std::uint64_t scan_count = 0;
    std::uint64_t switch_count = 0;
    std::uint64_t decision_count = 0;
    /// Simulated time at which the run stopped (battery empty in the default mode).
    double depletion_time_s = 0.0;
    double efficiency_Bpj = 0.0;
    StopReason stop = StopReason::BatteryDepleted;
    double battery_remaining_j = 0.0;
    /// Largest |sum(ledger) - battery drain| / drain seen at any tick boundary.
    double max_conservation_error = 0.0;
    std::vector<SchemeEvent> events;

    double bytes_total() const noexcept { return bytes_tx + bytes_rx; }

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Throws ConfigError before simulating when the scenario is invalid.
SimReport run(const Scenario& scenario);

struct SweepResult {
    std::optional<SimReport> report;
    std::string error;  ///< set when the scenario failed validation

    friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Runs independent scenarios on up to `parallelism` threads. Results come
/// back in input order and match standalone runs bit for bit.
std::vector<SweepResult> sweep(const std::vector<Scenario>& scenarios, unsigned parallelism);

struct GridCell {
    Frame frame = Frame::Outdoor;
    SwitchScheme scheme = SwitchScheme::GprsNonSwitching;
    UserClass user = UserClass::U1;
    ThresholdId threshold = ThresholdId::B1;
    std::uint64_t seed = 1;
    SimReport report;
};

/// Per user: mean efficiency of Wi-Fi non-switching over mean efficiency of
/// GPRS non-switching, across all thresholds and seeds present. Users with
/// neither scheme are skipped; a user with only one throws MissingCell.
std::map<UserClass, double> efficiency_ratio(std::span<const GridCell> cells);

}  // namespace locswitch
