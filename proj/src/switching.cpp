#include "locswitch/switching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "locswitch/errors.hpp"
#include "locswitch/text.hpp"

namespace locswitch {

namespace {

constexpr double kTimeEps = 1e-6;

void note(std::vector<SchemeEvent>* events, double t, std::string what) {
    if (events != nullptr) events->push_back({t, std::move(what)});
}

}  // namespace

std::string_view to_string(SwitchScheme s) noexcept {
    switch (s) {
        case SwitchScheme::AGpsSwitching: return "agps-switching";
        case SwitchScheme::GsmSwitching: return "gsm-switching";
        case SwitchScheme::ZigBeeSwitching: return "zigbee-switching";
        case SwitchScheme::ScanningSwitching: return "scanning-switching";
        case SwitchScheme::GprsNonSwitching: return "gprs-non-switching";
        case SwitchScheme::WifiNonSwitching: return "wifi-non-switching";
    }
    return "unknown";
}

std::optional<SwitchScheme> parse_scheme(std::string_view s) noexcept {
    for (auto scheme : kAllSchemes) {
        if (to_string(scheme) == s) return scheme;
    }
    return std::nullopt;
}

std::string scheme_names() {
    std::string out;
    for (auto s : kAllSchemes) {
        if (!out.empty()) out += ", ";
        out += to_string(s);
    }
    return out;
}

bool is_switching(SwitchScheme s) noexcept {
    return s != SwitchScheme::GprsNonSwitching && s != SwitchScheme::WifiNonSwitching;
}

bool is_location_assisted(SwitchScheme s) noexcept {
    return s == SwitchScheme::AGpsSwitching || s == SwitchScheme::GsmSwitching ||
           s == SwitchScheme::ZigBeeSwitching;
}

bool valid_in(SwitchScheme s, Frame f) noexcept {
    if (s == SwitchScheme::AGpsSwitching) return f == Frame::Outdoor;
    if (s == SwitchScheme::ZigBeeSwitching) return f == Frame::Indoor;
    return true;
}

void check_scheme_frame(SwitchScheme s, Frame f) {
    if (!valid_in(s, f)) {
        throw SchemeFrameMismatch(std::string(to_string(s)) + " cannot run in the " +
                                  std::string(to_string(f)) + " frame");
    }
}

std::vector<SwitchScheme> default_grid_schemes(Frame f) {
    const auto located =
        f == Frame::Outdoor ? SwitchScheme::AGpsSwitching : SwitchScheme::ZigBeeSwitching;
    return {located, SwitchScheme::GsmSwitching, SwitchScheme::ScanningSwitching,
            SwitchScheme::GprsNonSwitching, SwitchScheme::WifiNonSwitching};
}

const LocationSensorProfile& sensor_for(SwitchScheme s, const PowerProfiles& profiles) {
    switch (s) {
        case SwitchScheme::AGpsSwitching: return profiles.agps;
        case SwitchScheme::GsmSwitching: return profiles.gsm;
        case SwitchScheme::ZigBeeSwitching: return profiles.zigbee;
        default: break;
    }
    throw std::invalid_argument(std::string(to_string(s)) + " uses no location sensor");
}

bool decide(double rate_Bps, const Threshold& threshold) noexcept {
    return rate_Bps >= threshold.bytes_per_second();
}

LocationFix locate(const LocationSensorProfile& sensor, const Position& truth, Xoshiro256& rng,
                   const EarthModel& earth) {
    if (sensor.frame && *sensor.frame != frame_of(truth)) {
        throw FrameMismatch("sensor '" + sensor.name + "' does not work " +
                            std::string(to_string(frame_of(truth))) + "s");
    }
    const double r = sensor.accuracy_m * std::sqrt(rng.uniform01());
    const double theta = 2.0 * std::numbers::pi * rng.uniform01();
    LocationFix fix{truth, sensor.fix_energy_j()};
    if (r > 0.0) fix.estimated = offset_by(truth, r * std::cos(theta), r * std::sin(theta), earth);
    return fix;
}

SwitchPlan plan_switch(const ApLog& log, const LocationSensorProfile& sensor,
                       const Position& truth, double v_user_mps, Xoshiro256& rng,
                       const EarthModel& earth) {
    if (!(v_user_mps > 0)) throw NonPositiveSpeed(v_user_mps);
    if (log.empty()) throw EmptyLog();
    // Step 1: position fix.
    const auto fix = locate(sensor, truth, rng, earth);
    // Steps 2 and 3: nearest logged AP to the estimate, and its distance.
    const auto nearest = nearest_ap(log, fix.estimated, earth);
    // Step 4: walking time.
    SwitchPlan plan;
    plan.target_index = nearest.index;
    plan.distance_m = nearest.distance_m;
    plan.t_switch_s = time_to_switch(nearest.distance_m, v_user_mps);
    plan.estimated_user_position = fix.estimated;
    const double sure_margin = std::max(0.0, log[nearest.index].range_m - sensor.accuracy_m);
    plan.scan_delay_s = time_to_switch(std::max(0.0, nearest.distance_m - sure_margin), v_user_mps);
    plan.fix_energy_j = fix.energy_j;
    return plan;
}

SchemeController::SchemeController(SchemeConfig config, const ApLog& log,
                                   const PowerProfiles& profiles)
    : config_(config), log_(log), profiles_(profiles) {
    check_scheme_frame(config_.scheme, log.frame());
    if (!(config_.v_user_mps > 0)) throw NonPositiveSpeed(config_.v_user_mps);
    if (!(config_.scan_period_s > 0)) throw ConfigError("scan period must be positive");
    if (is_switching(config_.scheme) && log.empty()) throw EmptyLog();
}

SchemeStep SchemeController::step(double t_s, std::optional<double> measured_rate_Bps,
                                  const Position& user, Xoshiro256& location_rng,
                                  std::vector<SchemeEvent>* events) {
    SchemeStep out;
    if (config_.scheme == SwitchScheme::GprsNonSwitching) return out;
    if (config_.scheme == SwitchScheme::WifiNonSwitching) {
        out.link = Link::Wifi;
        out.wifi_radio_on = true;
        return out;
    }

    if (phase_ == SeekPhase::OnCellular && measured_rate_Bps) {
        out.lumps.add(Component::SystemOverhead, profiles_.decision_overhead_j);
        if (decide(*measured_rate_Bps, config_.threshold)) {
            trigger(t_s, user, location_rng, out, events);
        }
    }
    if ((phase_ == SeekPhase::AwaitingScan || phase_ == SeekPhase::Scanning) &&
        t_s + kTimeEps >= next_scan_s_) {
        scan(t_s, user, out, events);
    }

    out.link = phase_ == SeekPhase::Connected ? Link::Wifi : Link::Cellular;
    out.wifi_radio_on = phase_ == SeekPhase::Connected || phase_ == SeekPhase::Scanning;
    if (phase_ == SeekPhase::AwaitingScan || phase_ == SeekPhase::Scanning) {
        out.walk_target = log_[seek_target_].location;
    }
    return out;
}

void SchemeController::trigger(double t_s, const Position& user, Xoshiro256& rng,
                               SchemeStep& out, std::vector<SchemeEvent>* events) {
    // The user heads for the nearest AP whatever the scheme believes.
    seek_target_ = nearest_ap(log_, user, config_.earth).index;
    if (config_.scheme == SwitchScheme::ScanningSwitching) {
        phase_ = SeekPhase::Scanning;
        next_scan_s_ = t_s;
        note(events, t_s, "trigger scanning");
        return;
    }
    const auto& sensor = sensor_for(config_.scheme, profiles_);
    auto plan = plan_switch(log_, sensor, user, config_.v_user_mps, rng, config_.earth);
    out.lumps.add(Component::LocationSensor, plan.fix_energy_j);
    phase_ = SeekPhase::AwaitingScan;
    next_scan_s_ = t_s + plan.scan_delay_s;
    note(events, t_s,
         "trigger plan target=" + log_[plan.target_index].networks.front() +
             " d_m=" + text::format_fixed(plan.distance_m, 3) +
             " t_switch_s=" + text::format_fixed(plan.t_switch_s, 3) +
             " scan_in_s=" + text::format_fixed(plan.scan_delay_s, 3));
    last_plan_ = std::move(plan);
}

void SchemeController::scan(double t_s, const Position& user, SchemeStep& out,
                            std::vector<SchemeEvent>* events) {
    ++out.scans;
    out.lumps.add(Component::Wifi, profiles_.scan_energy_j());
    const auto found = covering_ap(log_, user, config_.earth);
    if (found) {
        // Association is priced as one more scan.
        out.lumps.add(Component::Wifi, profiles_.scan_energy_j());
        ++out.switches;
        phase_ = SeekPhase::Connected;
        connected_since_ = t_s;
        note(events, t_s, "scan connect " + log_[found->index].networks.front());
        return;
    }
    phase_ = SeekPhase::Scanning;
    next_scan_s_ = t_s + config_.scan_period_s;
    note(events, t_s, "scan miss");
}

void SchemeController::leave_coverage(double t_s, std::vector<SchemeEvent>* events) {
    if (phase_ != SeekPhase::Connected) return;
    phase_ = SeekPhase::OnCellular;
    connected_since_.reset();
    note(events, t_s, "leave coverage");
}

}  // namespace locswitch
