#include "locswitch/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "locswitch/errors.hpp"
#include "locswitch/text.hpp"

namespace locswitch {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ConfigError(where + ": " + msg);
}

double to_double(std::string_view v, const std::string& where, std::string_view key) {
    const auto d = text::parse_double(v);
    if (!d) fail(where, "'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    return *d;
}

std::uint64_t to_u64(std::string_view v, const std::string& where, std::string_view key) {
    const auto n = text::parse_u64(v);
    if (!n) {
        fail(where, "'" + std::string(key) + "' expects a non-negative integer, got '" +
                        std::string(v) + "'");
    }
    return *n;
}

SwitchScheme to_scheme(std::string_view v, const std::string& where) {
    const auto s = parse_scheme(v);
    if (!s) fail(where, "unknown scheme '" + std::string(v) + "'; valid schemes: " + scheme_names());
    return *s;
}

UserClass to_user(std::string_view v, const std::string& where) {
    const auto u = parse_user(v);
    if (!u) fail(where, "unknown user '" + std::string(v) + "'; valid users: U1, U2, U3, U4");
    return *u;
}

ThresholdId to_threshold(std::string_view v, const std::string& where) {
    const auto b = parse_threshold(v);
    if (!b) fail(where, "unknown threshold '" + std::string(v) + "'; valid thresholds: B1, B2, B3, B4");
    return *b;
}

Frame to_frame(std::string_view v, const std::string& where) {
    const auto f = parse_frame(v);
    if (!f) fail(where, "unknown frame '" + std::string(v) + "'; valid frames: outdoor, indoor");
    return *f;
}

template <typename T, typename Parse>
std::vector<T> to_list(std::string_view v, Parse parse) {
    std::vector<T> out;
    for (auto item : text::split(v, ',')) {
        item = text::trim(item);
        if (!item.empty()) out.push_back(parse(item));
    }
    return out;
}

using Setter = std::function<void(RunConfig&, std::string_view, const std::string&)>;
using KeyTable = std::map<std::string, Setter, std::less<>>;

template <typename Member>
Setter number(Member member) {
    return [member](RunConfig& c, std::string_view v, const std::string& where) {
        c.*member = to_double(v, where, "value");
    };
}

KeyTable scenario_keys() {
    KeyTable t;
    t["frame"] = [](RunConfig& c, std::string_view v, const std::string& w) { c.frame = to_frame(v, w); };
    t["scheme"] = [](RunConfig& c, std::string_view v, const std::string& w) { c.scheme = to_scheme(v, w); };
    t["user"] = [](RunConfig& c, std::string_view v, const std::string& w) { c.user = to_user(v, w); };
    t["threshold"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.threshold = to_threshold(v, w);
    };
    t["seed"] = [](RunConfig& c, std::string_view v, const std::string& w) { c.seed = to_u64(v, w, "seed"); };
    t["tick_s"] = number(&RunConfig::tick_s);
    t["measure_interval_s"] = number(&RunConfig::measure_interval_s);
    t["max_sim_time_s"] = number(&RunConfig::max_sim_time_s);
    t["battery_j"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.battery_j = to_double(v, w, "battery_j");
    };
    t["v_user_mps"] = number(&RunConfig::v_user_mps);
    t["scan_period_s"] = number(&RunConfig::scan_period_s);
    t["wifi_dwell_s"] = number(&RunConfig::wifi_dwell_s);
    t["termination"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        const auto term = parse_termination(v);
        if (!term) fail(w, "unknown termination '" + std::string(v) + "'; valid: depletion, bytes-goal");
        c.termination = *term;
    };
    t["bytes_goal"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.bytes_goal = to_double(v, w, "bytes_goal");
    };
    t["earth_radius_km"] = number(&RunConfig::earth_radius_km);
    t["ap_log"] = [](RunConfig& c, std::string_view v, const std::string&) {
        c.ap_log = std::filesystem::path(std::string(v));
    };
    t["trace"] = [](RunConfig& c, std::string_view v, const std::string&) {
        c.trace = std::filesystem::path(std::string(v));
    };
    return t;
}

KeyTable field_keys() {
    KeyTable t;
    t["count"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.field.count = static_cast<std::size_t>(to_u64(v, w, "count"));
    };
    const auto opt = [](std::optional<double> FieldOverrides::*member) -> Setter {
        return [member](RunConfig& c, std::string_view v, const std::string& w) {
            c.field.*member = to_double(v, w, "value");
        };
    };
    t["width_m"] = opt(&FieldOverrides::width_m);
    t["height_m"] = opt(&FieldOverrides::height_m);
    t["range_m"] = opt(&FieldOverrides::range_m);
    t["anchor_lat_deg"] = opt(&FieldOverrides::anchor_lat_deg);
    t["anchor_lon_deg"] = opt(&FieldOverrides::anchor_lon_deg);
    return t;
}

KeyTable radio_keys(RadioPowerProfile PowerProfiles::*radio) {
    KeyTable t;
    const auto field = [radio](double RadioPowerProfile::*member) -> Setter {
        return [radio, member](RunConfig& c, std::string_view v, const std::string& w) {
            (c.profiles.*radio).*member = to_double(v, w, "value");
        };
    };
    t["scan_w"] = field(&RadioPowerProfile::scan_w);
    t["active_tx_w"] = field(&RadioPowerProfile::active_tx_w);
    t["active_rx_w"] = field(&RadioPowerProfile::active_rx_w);
    t["idle_w"] = field(&RadioPowerProfile::idle_w);
    t["throughput_Bps"] = field(&RadioPowerProfile::throughput_Bps);
    return t;
}

KeyTable sensor_keys(LocationSensorProfile PowerProfiles::*sensor) {
    KeyTable t;
    const auto field = [sensor](double LocationSensorProfile::*member) -> Setter {
        return [sensor, member](RunConfig& c, std::string_view v, const std::string& w) {
            (c.profiles.*sensor).*member = to_double(v, w, "value");
        };
    };
    t["power_w"] = field(&LocationSensorProfile::power_w);
    t["accuracy_m"] = field(&LocationSensorProfile::accuracy_m);
    t["fix_time_s"] = field(&LocationSensorProfile::fix_time_s);
    return t;
}

KeyTable device_keys() {
    KeyTable t;
    t["idle_w"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.profiles.device.idle_w = to_double(v, w, "idle_w");
    };
    t["suspended_w"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.profiles.device.suspended_w = to_double(v, w, "suspended_w");
    };
    return t;
}

KeyTable energy_keys() {
    KeyTable t;
    const auto field = [](double PowerProfiles::*member) -> Setter {
        return [member](RunConfig& c, std::string_view v, const std::string& w) {
            c.profiles.*member = to_double(v, w, "value");
        };
    };
    t["scan_duration_s"] = field(&PowerProfiles::scan_duration_s);
    t["decision_overhead_j"] = field(&PowerProfiles::decision_overhead_j);
    t["battery_capacity_mah"] = field(&PowerProfiles::battery_capacity_mah);
    t["battery_voltage_v"] = field(&PowerProfiles::battery_voltage_v);
    return t;
}

KeyTable user_keys(UserClass u) {
    const auto i = static_cast<std::size_t>(u);
    KeyTable t;
    const auto field = [i](double UserProfile::*member) -> Setter {
        return [i, member](RunConfig& c, std::string_view v, const std::string& w) {
            c.users[i].*member = to_double(v, w, "value");
        };
    };
    t["mean_rate_Bps"] = field(&UserProfile::mean_rate_Bps);
    t["burstiness"] = field(&UserProfile::burstiness);
    t["uplink_fraction"] = field(&UserProfile::uplink_fraction);
    t["pending_download_bytes"] = [i](RunConfig& c, std::string_view v, const std::string& w) {
        c.users[i].pending_download_bytes = to_u64(v, w, "pending_download_bytes");
    };
    return t;
}

KeyTable threshold_keys() {
    KeyTable t;
    for (const auto b : kAllThresholds) {
        const auto i = static_cast<std::size_t>(b);
        t[std::string(to_string(b))] = [i](RunConfig& c, std::string_view v, const std::string& w) {
            c.thresholds[i].kbps = to_double(v, w, "threshold");
        };
    }
    return t;
}

KeyTable sweep_keys() {
    KeyTable t;
    t["schemes"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.sweep.schemes = to_list<SwitchScheme>(v, [&](std::string_view s) { return to_scheme(s, w); });
    };
    t["users"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.sweep.users = to_list<UserClass>(v, [&](std::string_view s) { return to_user(s, w); });
    };
    t["thresholds"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.sweep.thresholds =
            to_list<ThresholdId>(v, [&](std::string_view s) { return to_threshold(s, w); });
    };
    t["seeds"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        c.sweep.seeds = to_list<std::uint64_t>(v, [&](std::string_view s) { return to_u64(s, w, "seeds"); });
    };
    t["parallel"] = [](RunConfig& c, std::string_view v, const std::string& w) {
        const auto n = to_u64(v, w, "parallel");
        if (n == 0) fail(w, "'parallel' must be at least 1");
        c.sweep.parallel = static_cast<unsigned>(n);
    };
    return t;
}

const std::map<std::string, KeyTable, std::less<>>& sections() {
    static const auto table = [] {
        std::map<std::string, KeyTable, std::less<>> s;
        s["scenario"] = scenario_keys();
        s["field"] = field_keys();
        s["wifi"] = radio_keys(&PowerProfiles::wifi);
        s["cellular"] = radio_keys(&PowerProfiles::cellular);
        s["device"] = device_keys();
        s["sensor.gps"] = sensor_keys(&PowerProfiles::gps);
        s["sensor.agps"] = sensor_keys(&PowerProfiles::agps);
        s["sensor.gsm"] = sensor_keys(&PowerProfiles::gsm);
        s["sensor.zigbee"] = sensor_keys(&PowerProfiles::zigbee);
        s["energy"] = energy_keys();
        for (const auto u : kAllUsers) s["user." + std::string(to_string(u))] = user_keys(u);
        s["threshold"] = threshold_keys();
        s["sweep"] = sweep_keys();
        return s;
    }();
    return table;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

std::string strip_comment(std::string_view line) {
    const auto pos = line.find_first_of("#;");
    return std::string(text::trim(line.substr(0, pos)));
}

}  // namespace

void apply_setting(RunConfig& config, std::string_view section, std::string_view key,
                   std::string_view value, const std::string& where) {
    const auto& all = sections();
    const auto s = all.find(section);
    if (s == all.end()) fail(where, "unknown section [" + std::string(section) + "]");
    const auto k = s->second.find(key);
    if (k == s->second.end()) {
        fail(where, "unknown key '" + std::string(key) + "' in [" + std::string(section) + "]");
    }
    k->second(config, text::trim(value), where);
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const std::string where = "--set " + std::string(assignment);
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) fail(where, "expected section.key=value");
    const auto path = text::trim(assignment.substr(0, eq));
    const auto dot = path.rfind('.');
    if (dot == std::string_view::npos) fail(where, "expected section.key=value");
    apply_setting(config, path.substr(0, dot), path.substr(dot + 1), assignment.substr(eq + 1), where);
}

RunConfig parse_config(const std::string& content, const std::filesystem::path& base_dir) {
    RunConfig config;
    config.base_dir = base_dir;
    std::istringstream in(content);
    std::string raw;
    std::string section;
    for (std::size_t n = 1; std::getline(in, raw); ++n) {
        const std::string where = "line " + std::to_string(n);
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto line = strip_comment(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(where, "unterminated section header");
            section = std::string(text::trim(std::string_view(line).substr(1, line.size() - 2)));
            if (!sections().contains(section)) fail(where, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(where, "expected key = value");
        if (section.empty()) fail(where, "key outside of any section");
        const std::string_view view(line);
        apply_setting(config, section, text::trim(view.substr(0, eq)), view.substr(eq + 1), where);
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str(), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

Scenario base_scenario(const RunConfig& config, Frame frame) {
    Scenario sc = default_scenario(frame);
    auto& f = sc.field;
    if (config.field.count) f.count = *config.field.count;
    if (config.field.width_m) f.width_m = *config.field.width_m;
    if (config.field.height_m) f.height_m = *config.field.height_m;
    if (config.field.range_m) f.range_m = *config.field.range_m;
    if (config.field.anchor_lat_deg) f.anchor_lat_deg = *config.field.anchor_lat_deg;
    if (config.field.anchor_lon_deg) f.anchor_lon_deg = *config.field.anchor_lon_deg;
    sc.profiles = config.profiles;
    sc.battery_j = config.battery_j.value_or(config.profiles.battery_capacity_j());
    sc.tick_s = config.tick_s;
    sc.measure_interval_s = config.measure_interval_s;
    sc.max_sim_time_s = config.max_sim_time_s;
    sc.v_user_mps = config.v_user_mps;
    sc.scan_period_s = config.scan_period_s;
    sc.wifi_dwell_s = config.wifi_dwell_s;
    sc.termination = config.termination;
    sc.bytes_goal = config.bytes_goal;
    sc.earth.radius_km = config.earth_radius_km;
    if (config.ap_log) sc.ap_log = load_log(resolve(*config.ap_log, config.base_dir), frame);
    if (config.trace) sc.replay_trace = load_trace(resolve(*config.trace, config.base_dir));
    return grid_scenario(sc, config, config.scheme, config.user, config.threshold, config.seed);
}

Scenario grid_scenario(const Scenario& base, const RunConfig& config, SwitchScheme scheme,
                       UserClass user, ThresholdId threshold, std::uint64_t seed) {
    Scenario sc = base;
    sc.scheme = scheme;
    sc.user = config.users[static_cast<std::size_t>(user)];
    sc.threshold = config.thresholds[static_cast<std::size_t>(threshold)];
    sc.seed = seed;
    return sc;
}

}  // namespace locswitch
