#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "locswitch/frame.hpp"

namespace locswitch {

/// Power draw of one radio in each of its states, plus the application-level
/// throughput it sustains while active.
struct RadioPowerProfile {
    std::string name;
    double scan_w = 0.0;
    double active_tx_w = 0.0;
    double active_rx_w = 0.0;
    double idle_w = 0.0;
    double throughput_Bps = 0.0;

    /// Throws ConfigError on a negative power, scan cheaper than idle, or a
    /// non-positive throughput.
    void validate() const;
};

struct LocationSensorProfile {
    std::string name;
    double power_w = 0.0;
    double accuracy_m = 0.0;  ///< radius of the position error disk
    double fix_time_s = 1.0;
    std::optional<Frame> frame;  ///< restricts the sensor to one frame when set

    void validate() const;
    double fix_energy_j() const noexcept { return power_w * fix_time_s; }
};

struct DeviceBaseProfile {
    double idle_w = 0.2688;
    double suspended_w = 0.0686;
};

/// Every power constant the simulator uses. default_profiles() fills it with
/// the measured figures; scenario files may override any field.
struct PowerProfiles {
    RadioPowerProfile wifi;
    RadioPowerProfile cellular;
    RadioPowerProfile bluetooth;
    DeviceBaseProfile device;
    LocationSensorProfile gps;
    LocationSensorProfile agps;
    LocationSensorProfile gsm;
    LocationSensorProfile zigbee;
    double scan_duration_s = 2.0;
    double decision_overhead_j = 0.05;
    double battery_capacity_mah = 1500.0;
    double battery_voltage_v = 3.7;

    /// mAh x V x 3.6 J/mWh.
    double battery_capacity_j() const noexcept {
        return battery_capacity_mah * battery_voltage_v * 3.6;
    }

    /// Energy of one Wi-Fi scan; also the price of one association.
    double scan_energy_j() const noexcept { return wifi.scan_w * scan_duration_s; }

    void validate() const;
};

PowerProfiles default_profiles();

/// Average cellular draw in the active state, read from "250-300 mAh" as a
/// 275 mA current at 3.7 V. Kept for reference; transfers are priced with the
/// separate uplink/downlink figures of the cellular profile.
inline constexpr double kCellularActiveAverageW = 0.275 * 3.7;

enum class Component : std::size_t {
    Wifi = 0,
    Cellular,
    LocationSensor,
    DeviceBase,
    SystemOverhead,
};

inline constexpr std::size_t kComponentCount = 5;
inline constexpr std::array<Component, kComponentCount> kAllComponents{
    Component::Wifi, Component::Cellular, Component::LocationSensor, Component::DeviceBase,
    Component::SystemOverhead};

std::string_view to_string(Component c) noexcept;

/// Joules consumed per component over a run.
class EnergyLedger {
public:
    /// Adds power_w * dt_s. Throws NegativeDuration for dt_s < 0.
    void accrue(Component c, double power_w, double dt_s);

    /// Adds a lump of energy (a scan, a position fix).
    void add(Component c, double joules);

    double operator[](Component c) const noexcept { return joules_[static_cast<std::size_t>(c)]; }
    double total() const noexcept;

    /// Every entry multiplied by `factor` (used to pro-rate the final tick).
    EnergyLedger scaled(double factor) const noexcept;

    EnergyLedger& operator+=(const EnergyLedger& other) noexcept;

    friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;

private:
    std::array<double, kComponentCount> joules_{};
};

struct DrainResult {
    bool depleted = false;
    /// Share of the requested energy that fit before the battery emptied;
    /// 1 when not depleted.
    double fraction = 1.0;
};

/// Linear joule reservoir; no rate or temperature effects.
class Battery {
public:
    explicit Battery(double capacity_j);

    DrainResult drain(double joules);

    double capacity_j() const noexcept { return capacity_j_; }
    double remaining_j() const noexcept { return remaining_j_; }
    double drained_j() const noexcept { return capacity_j_ - remaining_j_; }

private:
    double capacity_j_;
    double remaining_j_;
};

/// Bytes per joule. Throws ZeroEnergy when joules == 0.
double efficiency(double bytes_transferred, double joules);

}  // namespace locswitch
