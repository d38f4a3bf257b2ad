#include "locswitch/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "locswitch/errors.hpp"

namespace locswitch {

std::string_view to_string(Termination t) noexcept {
    return t == Termination::Depletion ? "depletion" : "bytes-goal";
}

std::optional<Termination> parse_termination(std::string_view s) noexcept {
    if (s == "depletion") return Termination::Depletion;
    if (s == "bytes-goal") return Termination::BytesGoal;
    return std::nullopt;
}

std::string_view to_string(StopReason r) noexcept {
    switch (r) {
        case StopReason::BatteryDepleted: return "battery-depleted";
        case StopReason::BytesGoalReached: return "bytes-goal-reached";
        case StopReason::MaxSimTime: return "max-sim-time";
    }
    return "unknown";
}

namespace {

bool positive_finite(double v) { return v > 0 && std::isfinite(v); }

std::uint64_t ticks_per_measurement(const Scenario& sc) {
    const double ratio = sc.measure_interval_s / sc.tick_s;
    const double rounded = std::round(ratio);
    if (rounded < 1 || std::abs(ratio - rounded) > 1e-9 * ratio) {
        throw ConfigError("measure_interval_s must be a whole multiple of tick_s");
    }
    return static_cast<std::uint64_t>(rounded);
}

/// Rectangle in local meters where users are placed at the start of each
/// session. For a generated field it is the field itself; for a loaded log it
/// is the bounding box of the APs padded by their range.
class PlacementRegion {
public:
    PlacementRegion(const Scenario& sc, const ApLog& log) : earth_(sc.earth) {
        if (!sc.ap_log) {
            spec_ = sc.field;
            return;
        }
        spec_.frame = log.frame();
        if (log.empty()) {
            spec_.width_m = spec_.height_m = 1.0;
            return;
        }
        double pad = 0.0;
        for (const auto& e : log.entries()) pad = std::max(pad, e.range_m);
        std::vector<PlanarPoint> local;
        if (log.frame() == Frame::Outdoor) {
            double lat0 = std::numeric_limits<double>::max();
            double lon0 = lat0;
            for (const auto& e : log.entries()) {
                const auto& g = std::get<GeoPoint>(e.location);
                lat0 = std::min(lat0, g.lat);
                lon0 = std::min(lon0, g.lon);
            }
            spec_.anchor_lat_deg = rad_to_deg(lat0);
            spec_.anchor_lon_deg = rad_to_deg(lon0);
            const LocalTangent tangent({lat0, lon0}, earth_);
            for (const auto& e : log.entries()) {
                local.push_back(tangent.to_local(std::get<GeoPoint>(e.location)));
            }
        } else {
            for (const auto& e : log.entries()) local.push_back(std::get<PlanarPoint>(e.location));
        }
        double x0 = local[0].x, x1 = x0, y0 = local[0].y, y1 = y0;
        for (const auto& p : local) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        origin_ = {x0 - pad, y0 - pad};
        spec_.width_m = x1 - x0 + 2 * pad;
        spec_.height_m = y1 - y0 + 2 * pad;
    }

    /// A uniformly drawn spot outside every AP's range. Gives up after a fixed
    /// number of draws (fully covered fields) and keeps the last draw.
    Position sample_uncovered(Xoshiro256& rng, const ApLog& log) const {
        constexpr int kMaxDraws = 10'000;
        Position p;
        for (int i = 0; i < kMaxDraws; ++i) {
            const PlanarPoint local{origin_.x + spec_.width_m * rng.uniform01(),
                                    origin_.y + spec_.height_m * rng.uniform01()};
            p = spec_.to_position(local, earth_);
            if (!covering_ap(log, p, earth_)) break;
        }
        return p;
    }

private:
    FieldSpec spec_;
    PlanarPoint origin_{};
    EarthModel earth_;
};

double link_power(const RadioPowerProfile& radio, double active_share, double uplink) {
    return radio.active_tx_w * active_share * uplink +
           radio.active_rx_w * active_share * (1.0 - uplink) +
           radio.idle_w * (1.0 - active_share);
}

}  // namespace

void Scenario::validate() const {
    if (!positive_finite(tick_s)) throw ConfigError("tick_s must be positive");
    if (!positive_finite(measure_interval_s)) {
        throw ConfigError("measure_interval_s must be positive");
    }
    ticks_per_measurement(*this);
    if (!positive_finite(v_user_mps)) throw ConfigError("v_user_mps must be positive");
    if (!positive_finite(battery_j)) throw ConfigError("battery_j must be positive");
    if (!positive_finite(max_sim_time_s)) throw ConfigError("max_sim_time_s must be positive");
    if (!positive_finite(scan_period_s)) throw ConfigError("scan_period_s must be positive");
    if (!(wifi_dwell_s >= 0)) throw ConfigError("wifi_dwell_s must be non-negative");
    if (!positive_finite(earth.radius_km)) throw ConfigError("earth radius must be positive");
    check_scheme_frame(scheme, frame);
    profiles.validate();
    user.validate();
    if (!(threshold.kbps >= 0)) throw ConfigError("threshold must be non-negative");
    if (ap_log) {
        if (ap_log->frame() != frame) {
            throw ConfigError("access-point log frame differs from the scenario frame");
        }
        if (is_switching(scheme) && ap_log->empty()) {
            throw ConfigError("switching schemes need a non-empty access-point log");
        }
    } else {
        if (field.frame != frame) throw ConfigError("field frame differs from the scenario frame");
        field.validate();
        if (is_switching(scheme) && field.count == 0) {
            throw ConfigError("switching schemes need at least one access point");
        }
    }
    if (termination == Termination::BytesGoal) {
        const double goal = bytes_goal.value_or(static_cast<double>(user.pending_download_bytes));
        if (!positive_finite(goal)) throw ConfigError("bytes-goal termination needs a positive goal");
    }
    if (replay_trace && replay_trace->samples_Bps.empty()) {
        throw ConfigError("replay trace has no samples");
    }
    if (replay_trace && replay_trace->samples_Bps.size() > 1 &&
        std::abs(replay_trace->interval_s - measure_interval_s) > 1e-9 * measure_interval_s) {
        throw ConfigError("replay trace spacing differs from measure_interval_s");
    }
}

Scenario default_scenario(Frame frame) {
    Scenario sc;
    sc.frame = frame;
    sc.field = default_field(frame);
    return sc;
}

void MobilityState::advance(double dt_s, const EarthModel& earth) {
    if (!target) return;
    true_position = step_toward(true_position, *target, speed_mps * dt_s, earth);
}

SimReport run(const Scenario& sc) {
    sc.validate();
    const ApLog log = sc.ap_log ? *sc.ap_log : generate_field(sc.seed, sc.field, sc.earth);
    const PlacementRegion region(sc, log);

    RateSource demand = sc.replay_trace ? RateSource(*sc.replay_trace) : RateSource(sc.user, sc.seed);
    auto location_rng = make_stream(sc.seed, Stream::Location);
    auto mobility_rng = make_stream(sc.seed, Stream::Mobility);

    MobilityState mobility{region.sample_uncovered(mobility_rng, log), std::nullopt, sc.v_user_mps};
    SchemeController controller(
        {sc.scheme, sc.threshold, sc.v_user_mps, sc.scan_period_s, sc.earth}, log, sc.profiles);
    Battery battery(sc.battery_j);

    const auto& prof = sc.profiles;
    const std::uint64_t measure_every = ticks_per_measurement(sc);
    const double dt = sc.tick_s;
    const double uplink = sc.user.uplink_fraction;
    const double goal = sc.termination == Termination::BytesGoal
                            ? sc.bytes_goal.value_or(static_cast<double>(sc.user.pending_download_bytes))
                            : std::numeric_limits<double>::infinity();

    SimReport report;
    auto* events = sc.record_events ? &report.events : nullptr;
    double rate = 0.0;

    for (std::uint64_t n = 0;; ++n) {
        const double t = static_cast<double>(n) * dt;
        if (t >= sc.max_sim_time_s) {
            report.stop = StopReason::MaxSimTime;
            report.depletion_time_s = t;
            break;
        }
        std::optional<double> measured;
        if (n % measure_every == 0) {
            rate = demand.next_Bps();
            measured = rate;
        }
        const bool armed = controller.phase() == SeekPhase::OnCellular;
        auto act = controller.step(t, measured, mobility.true_position, location_rng, events);
        if (measured && armed && is_switching(sc.scheme)) ++report.decision_count;

        EnergyLedger tick = act.lumps;
        tick.accrue(Component::DeviceBase, prof.device.idle_w, dt);
        const auto& radio = act.link == Link::Wifi ? prof.wifi : prof.cellular;
        const double carried = std::min(rate, radio.throughput_Bps);
        const double active_share = carried / radio.throughput_Bps;
        if (act.link == Link::Wifi) {
            tick.accrue(Component::Wifi, link_power(radio, active_share, uplink), dt);
            tick.accrue(Component::Cellular, prof.cellular.idle_w, dt);
        } else {
            tick.accrue(Component::Cellular, link_power(radio, active_share, uplink), dt);
            if (act.wifi_radio_on) tick.accrue(Component::Wifi, prof.wifi.idle_w, dt);
        }
        const double tick_bytes = carried * dt;

        double share = 1.0;
        StopReason stop = StopReason::MaxSimTime;
        bool stopping = false;
        const double goal_left = goal - report.bytes_total();
        if (tick_bytes > 0 && tick_bytes >= goal_left) {
            share = std::max(0.0, goal_left / tick_bytes);
            stop = StopReason::BytesGoalReached;
            stopping = true;
        }
        const auto drained = battery.drain(tick.total() * share);
        if (drained.depleted) {
            share *= drained.fraction;
            stop = StopReason::BatteryDepleted;
            stopping = true;
        }

        report.ledger += tick.scaled(share);
        report.bytes_tx += tick_bytes * share * uplink;
        report.bytes_rx += tick_bytes * share * (1.0 - uplink);
        report.scan_count += static_cast<std::uint64_t>(act.scans);
        report.switch_count += static_cast<std::uint64_t>(act.switches);
        const double t_end = t + share * dt;

        const double drain_j = battery.drained_j();
        const double err = std::abs(report.ledger.total() - drain_j) / std::max(drain_j, 1e-300);
        report.max_conservation_error = std::max(report.max_conservation_error, drain_j > 0 ? err : 0.0);

        mobility.target = act.walk_target;
        mobility.advance(share * dt, sc.earth);

        if (stopping) {
            report.stop = stop;
            report.depletion_time_s = t_end;
            break;
        }
        if (controller.phase() == SeekPhase::Connected &&
            t_end - *controller.connected_since() >= sc.wifi_dwell_s - 1e-9) {
            controller.leave_coverage(t_end, events);
            mobility.true_position = region.sample_uncovered(mobility_rng, log);
            mobility.target.reset();
        }
    }

    report.battery_remaining_j = battery.remaining_j();
    const double used = report.ledger.total();
    report.efficiency_Bpj = used > 0 ? efficiency(report.bytes_total(), used) : 0.0;
    return report;
}

std::vector<SweepResult> sweep(const std::vector<Scenario>& scenarios, unsigned parallelism) {
    std::vector<SweepResult> results(scenarios.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            try {
                results[i].report = run(scenarios[i]);
            } catch (const Error& e) {
                results[i].error = e.what();
            }
        }
    };
    const unsigned threads =
        std::max(1U, std::min<unsigned>(parallelism, static_cast<unsigned>(scenarios.size())));
    if (threads <= 1) {
        worker();
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

std::map<UserClass, double> efficiency_ratio(std::span<const GridCell> cells) {
    struct Sums {
        double wifi = 0, gprs = 0;
        int n_wifi = 0, n_gprs = 0;
    };
    std::map<UserClass, Sums> by_user;
    for (const auto& c : cells) {
        if (c.scheme == SwitchScheme::WifiNonSwitching) {
            by_user[c.user].wifi += c.report.efficiency_Bpj;
            ++by_user[c.user].n_wifi;
        } else if (c.scheme == SwitchScheme::GprsNonSwitching) {
            by_user[c.user].gprs += c.report.efficiency_Bpj;
            ++by_user[c.user].n_gprs;
        }
    }
    std::map<UserClass, double> ratio;
    for (const auto& [user, s] : by_user) {
        if (s.n_wifi == 0 || s.n_gprs == 0) {
            throw MissingCell("user " + std::string(to_string(user)) +
                              " lacks a " + (s.n_wifi == 0 ? "wifi" : "gprs") +
                              "-non-switching cell");
        }
        const double gprs = s.gprs / s.n_gprs;
        if (gprs == 0.0) throw ZeroEnergy();
        ratio[user] = (s.wifi / s.n_wifi) / gprs;
    }
    return ratio;
}

}  // namespace locswitch
