#include "locswitch/energy.hpp"

#include <cmath>

#include "locswitch/errors.hpp"

namespace locswitch {

void RadioPowerProfile::validate() const {
    const auto bad = [&](const char* what) {
        throw ConfigError("radio profile '" + name + "': " + what);
    };
    if (!(scan_w >= 0 && active_tx_w >= 0 && active_rx_w >= 0 && idle_w >= 0)) {
        bad("powers must be non-negative");
    }
    if (scan_w < idle_w) bad("scan power must not be below idle power");
    if (!(throughput_Bps > 0)) bad("throughput must be positive");
}

void LocationSensorProfile::validate() const {
    if (!(power_w >= 0 && accuracy_m >= 0)) {
        throw ConfigError("sensor '" + name + "': power and accuracy must be non-negative");
    }
    if (!(fix_time_s > 0)) throw ConfigError("sensor '" + name + "': fix time must be positive");
}

void PowerProfiles::validate() const {
    wifi.validate();
    cellular.validate();
    bluetooth.validate();
    for (const auto* s : {&gps, &agps, &gsm, &zigbee}) s->validate();
    if (!(device.idle_w >= 0 && device.suspended_w >= 0)) {
        throw ConfigError("device base powers must be non-negative");
    }
    if (!(scan_duration_s > 0)) throw ConfigError("scan duration must be positive");
    if (!(decision_overhead_j >= 0)) throw ConfigError("decision overhead must be non-negative");
    if (!(battery_capacity_mah > 0 && battery_voltage_v > 0)) {
        throw ConfigError("battery capacity and voltage must be positive");
    }
}

PowerProfiles default_profiles() {
    PowerProfiles p;
    // Wi-Fi: 1.4260 W scan, 0.890 W active, 0.256 W idle. Receive is priced
    // at 85% of transmit since sending costs more than receiving.
    p.wifi = {"wifi", 1.4260, 0.890, 0.890 * 0.85, 0.256, 600'000.0};
    // EDGE: uplink/downlink figures, 3 mA idle at 3.7 V.
    p.cellular = {"cellular", 0.0111, 1.2, 0.9, 0.0111, 20'000.0};
    p.bluetooth = {"bluetooth", 0.12, 0.12, 0.12, 0.01, 90'000.0};
    p.device = {0.2688, 0.0686};
    p.gps = {"gps", 0.400, 10.0, 10.0, Frame::Outdoor};
    p.agps = {"agps", 0.200, 10.0, 10.0, Frame::Outdoor};
    p.gsm = {"gsm", 0.060, 400.0, 2.0, std::nullopt};
    p.zigbee = {"zigbee", 0.001, 5.0, 1.0, Frame::Indoor};
    return p;
}

std::string_view to_string(Component c) noexcept {
    switch (c) {
        case Component::Wifi: return "wifi";
        case Component::Cellular: return "cellular";
        case Component::LocationSensor: return "location_sensor";
        case Component::DeviceBase: return "device_base";
        case Component::SystemOverhead: return "system_overhead";
    }
    return "unknown";
}

void EnergyLedger::accrue(Component c, double power_w, double dt_s) {
    if (dt_s < 0) throw NegativeDuration(dt_s);
    if (power_w < 0) throw std::invalid_argument("power must be non-negative");
    joules_[static_cast<std::size_t>(c)] += power_w * dt_s;
}

void EnergyLedger::add(Component c, double joules) {
    if (joules < 0) throw std::invalid_argument("energy must be non-negative");
    joules_[static_cast<std::size_t>(c)] += joules;
}

double EnergyLedger::total() const noexcept {
    double sum = 0.0;
    for (double j : joules_) sum += j;
    return sum;
}

EnergyLedger EnergyLedger::scaled(double factor) const noexcept {
    EnergyLedger out = *this;
    for (double& j : out.joules_) j *= factor;
    return out;
}

EnergyLedger& EnergyLedger::operator+=(const EnergyLedger& other) noexcept {
    for (std::size_t i = 0; i < kComponentCount; ++i) joules_[i] += other.joules_[i];
    return *this;
}

Battery::Battery(double capacity_j) : capacity_j_(capacity_j), remaining_j_(capacity_j) {
    if (!(capacity_j > 0) || !std::isfinite(capacity_j)) {
        throw ConfigError("battery capacity must be positive");
    }
}

DrainResult Battery::drain(double joules) {
    if (joules < 0) throw std::invalid_argument("drain must be non-negative");
    if (joules == 0.0) return {};
    if (joules >= remaining_j_) {
        const double fraction = remaining_j_ / joules;
        remaining_j_ = 0.0;
        return {true, fraction};
    }
    remaining_j_ -= joules;
    return {};
}

double efficiency(double bytes_transferred, double joules) {
    if (joules == 0.0) throw ZeroEnergy();
    return bytes_transferred / joules;
}

}  // namespace locswitch
