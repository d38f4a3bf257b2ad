#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "locswitch/errors.hpp"
#include "locswitch/sim.hpp"
#include "locswitch/switching.hpp"

using namespace locswitch;

namespace {

ApLog planar_log(std::initializer_list<PlanarPoint> aps, double range = 100.0) {
    ApLog log(Frame::Indoor);
    int i = 0;
    for (const auto& p : aps) log.add({double(i), {"ap-" + std::to_string(i)}, p, range}), ++i;
    return log;
}

LocationSensorProfile perfect_sensor(std::optional<Frame> frame = std::nullopt) {
    return {"perfect", 0.1, 0.0, 1.0, frame};
}

struct Episode {
    int scans = 0;
    int ticks = 0;
    bool connected = false;
};

// Drives one controller from a trigger at t = 0 until it connects, walking the
// user one tick at a time the way the simulator does.
Episode walk_episode(SwitchScheme scheme, const ApLog& log, const PowerProfiles& profiles,
                     Position user, std::uint64_t seed) {
    SchemeController c({scheme, default_threshold(ThresholdId::B1), 1.0, 30.0, {}}, log, profiles);
    auto rng = make_stream(seed, Stream::Location);
    Episode ep;
    for (int t = 0; t < 20'000 && !ep.connected; ++t) {
        const auto measured = t % 30 == 0 ? std::optional<double>(10'000.0) : std::nullopt;
        const auto s = c.step(t, measured, user, rng);
        ep.scans += s.scans;
        ep.connected = c.phase() == SeekPhase::Connected;
        if (s.walk_target && !ep.connected) user = step_toward(user, *s.walk_target, 1.0);
        ep.ticks = t;
    }
    return ep;
}

}  // namespace

TEST_CASE("scheme names and frames") {
    for (const auto s : kAllSchemes) CHECK(parse_scheme(to_string(s)) == s);
    CHECK_FALSE(parse_scheme("wifi"));
    const auto names = scheme_names();
    for (const auto s : kAllSchemes) CHECK(names.find(to_string(s)) != std::string::npos);

    CHECK(valid_in(SwitchScheme::AGpsSwitching, Frame::Outdoor));
    CHECK_FALSE(valid_in(SwitchScheme::AGpsSwitching, Frame::Indoor));
    CHECK(valid_in(SwitchScheme::ZigBeeSwitching, Frame::Indoor));
    CHECK_FALSE(valid_in(SwitchScheme::ZigBeeSwitching, Frame::Outdoor));
    CHECK_THROWS_AS(check_scheme_frame(SwitchScheme::ZigBeeSwitching, Frame::Outdoor), SchemeFrameMismatch);

    const auto outdoor = default_grid_schemes(Frame::Outdoor);
    const auto indoor = default_grid_schemes(Frame::Indoor);
    CHECK(outdoor.size() == 5);
    CHECK(indoor.size() == 5);
    CHECK(std::count(indoor.begin(), indoor.end(), SwitchScheme::ZigBeeSwitching) == 1);
    CHECK(std::count(outdoor.begin(), outdoor.end(), SwitchScheme::AGpsSwitching) == 1);
}

TEST_CASE("decide is rate >= threshold in bytes per second") {
    const auto b1 = default_threshold(ThresholdId::B1);
    const auto b4 = default_threshold(ThresholdId::B4);
    CHECK(decide(5.0 * 125.0, b1));
    CHECK_FALSE(decide(0.0, b1));
    CHECK(decide(60'000.0, b4));
    CHECK_FALSE(decide(std::nextafter(625.0, 0.0), b1));

    std::mt19937_64 gen(17);
    for (int i = 0; i < 10'000; ++i) {
        const double num = static_cast<double>(gen() % 100'000);
        const double den = static_cast<double>(gen() % 64 + 1);
        const double kbps = static_cast<double>(gen() % 40);
        const double rate = num / den;
        REQUIRE(decide(rate, {ThresholdId::B1, kbps}) == (rate >= kbps * 125.0));
    }
}

TEST_CASE("raising the threshold never adds triggers on a fixed trace") {
    const auto trace = generate_trace(default_user(UserClass::U2), 24 * 3600, 30, 9);
    int last = std::numeric_limits<int>::max();
    for (double kbps = 0; kbps <= 600; kbps += 5) {
        int n = 0;
        for (const double r : trace.samples_Bps) n += decide(r, {ThresholdId::B1, kbps}) ? 1 : 0;
        REQUIRE(n <= last);
        last = n;
    }
}

TEST_CASE("locate error disk") {
    const auto p = default_profiles();
    auto rng = make_stream(1, Stream::Location);

    const Position truth = PlanarPoint{100, 200};
    CHECK(locate(perfect_sensor(), truth, rng).estimated == truth);

    for (int i = 0; i < 1000; ++i) {
        const auto fix = locate(p.zigbee, truth, rng);
        REQUIRE(distance_m(fix.estimated, truth) <= 5.0 + 1e-9);
        REQUIRE(fix.energy_j == p.zigbee.power_w * p.zigbee.fix_time_s);
    }

    // Uniform disk of radius a: E[r] = 2a/3.
    const Position outdoor = GeoPoint{deg_to_rad(30), deg_to_rad(120)};
    double sum = 0;
    for (int i = 0; i < 10'000; ++i) sum += distance_m(locate(p.gsm, outdoor, rng).estimated, outdoor);
    CHECK(sum / 10'000 == doctest::Approx(2.0 / 3.0 * 400.0).epsilon(0.03));

    CHECK_THROWS_AS(locate(p.zigbee, outdoor, rng), FrameMismatch);
    CHECK_THROWS_AS(locate(p.agps, truth, rng), FrameMismatch);
    CHECK_NOTHROW(locate(p.gsm, truth, rng));
}

TEST_CASE("plan_switch follows the four steps") {
    auto rng = make_stream(2, Stream::Location);
    const auto log = planar_log({{100, 0}});
    const auto plan = plan_switch(log, perfect_sensor(), PlanarPoint{0, 0}, 1.0, rng);
    CHECK(plan.target_index == 0);
    CHECK(plan.distance_m == 100.0);
    CHECK(plan.t_switch_s == 100.0);
    CHECK(plan.t_switch_s == plan.distance_m / 1.0);

    const auto at = plan_switch(log, perfect_sensor(), PlanarPoint{100, 0}, 1.0, rng);
    CHECK(at.t_switch_s == 0.0);
    CHECK(at.scan_delay_s == 0.0);

    CHECK_THROWS_AS(plan_switch(ApLog(Frame::Indoor), perfect_sensor(), PlanarPoint{}, 1.0, rng), EmptyLog);
    CHECK_THROWS_AS(plan_switch(log, perfect_sensor(), PlanarPoint{}, 0.0, rng), NonPositiveSpeed);
}

TEST_CASE("scan delay keeps the coverage margin the sensor can guarantee") {
    auto rng = make_stream(4, Stream::Location);
    const auto log = planar_log({{300, 0}});
    const auto exact = plan_switch(log, perfect_sensor(), PlanarPoint{0, 0}, 1.0, rng);
    CHECK(exact.scan_delay_s == 200.0);
    const auto p = default_profiles();
    for (int i = 0; i < 100; ++i) {
        const auto gsm = plan_switch(log, p.gsm, PlanarPoint{0, 0}, 1.0, rng);
        // A sensor coarser than the range gets no margin: the delay is plain d / v.
        REQUIRE(gsm.scan_delay_s == gsm.t_switch_s);
    }
}

TEST_CASE("zero-accuracy planning picks the true nearest AP") {
    auto rng = make_stream(5, Stream::Location);
    for (int i = 0; i < 200; ++i) {
        const auto log = generate_field(rng.next(), 40, 2000, 340, 100);
        const Position user = PlanarPoint{rng.uniform(0, 2000), rng.uniform(0, 340)};
        const auto plan = plan_switch(log, perfect_sensor(), user, 1.0, rng);
        REQUIRE(plan.target_index == nearest_ap(log, user).index);
    }
}

TEST_CASE("wrong-AP frequency under GSM error matches a direct simulation") {
    // APs 300 m east and 500 m west of the user.
    const auto log = planar_log({{300, 0}, {-500, 0}});
    const auto gsm = default_profiles().gsm;
    auto rng = make_stream(6, Stream::Location);
    constexpr int kDraws = 10'000;
    int wrong = 0;
    for (int i = 0; i < kDraws; ++i) {
        wrong += plan_switch(log, gsm, PlanarPoint{0, 0}, 1.0, rng).target_index == 1 ? 1 : 0;
    }

    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr int kOracleDraws = 100'000;
    int oracle_wrong = 0;
    for (int i = 0; i < kOracleDraws; ++i) {
        const double r = 400.0 * std::sqrt(u(gen));
        const double th = 2.0 * std::numbers::pi * u(gen);
        const double x = r * std::cos(th), y = r * std::sin(th);
        oracle_wrong += std::hypot(x + 500, y) < std::hypot(x - 300, y) ? 1 : 0;
    }
    const double p = double(wrong) / kDraws;
    const double q = double(oracle_wrong) / kOracleDraws;
    CHECK(q > 0.05);
    CHECK(std::abs(p - q) <= 0.02);
}

TEST_CASE("scanning walk needs the closed-form number of scans") {
    const auto log = planar_log({{300, 0}});
    const auto ep = walk_episode(SwitchScheme::ScanningSwitching, log, default_profiles(), PlanarPoint{0, 0}, 1);
    CHECK(ep.connected);
    CHECK(ep.scans == static_cast<int>(std::ceil((300.0 - 100.0) / (1.0 * 30.0))) + 1);
    CHECK(ep.scans == 8);
}

TEST_CASE("A-GPS switching scans once per switch") {
    const auto profiles = default_profiles();
    const LocalTangent tangent({deg_to_rad(30), deg_to_rad(120)}, {});
    ApLog log(Frame::Outdoor);
    log.add({0, {"ap"}, tangent.to_geo({0, 300}), 100});
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto ep = walk_episode(SwitchScheme::AGpsSwitching, log, profiles, tangent.to_geo({0, 0}), seed);
        REQUIRE(ep.connected);
        REQUIRE(ep.scans == 1);
    }
}

TEST_CASE("scan counts: A-GPS <= GSM <= scanning per switch episode") {
    const auto profiles = default_profiles();
    const auto spec = default_field(Frame::Outdoor);
    bool strict = false;
    for (std::uint64_t seed = 1; seed <= 32; ++seed) {
        const auto log = generate_field(seed, spec);
        auto rng = make_stream(seed, Stream::Mobility);
        Position start;
        do {
            start = spec.to_position({rng.uniform(0, spec.width_m), rng.uniform(0, spec.height_m)});
        } while (covering_ap(log, start));
        const auto a = walk_episode(SwitchScheme::AGpsSwitching, log, profiles, start, seed);
        const auto g = walk_episode(SwitchScheme::GsmSwitching, log, profiles, start, seed);
        const auto s = walk_episode(SwitchScheme::ScanningSwitching, log, profiles, start, seed);
        INFO("seed " << seed);
        REQUIRE(a.connected);
        REQUIRE(g.connected);
        REQUIRE(s.connected);
        CHECK(a.scans <= g.scans);
        CHECK(g.scans <= s.scans);
        strict |= a.scans < g.scans || g.scans < s.scans;
    }
    CHECK(strict);
}

TEST_CASE("controller radio states") {
    const auto profiles = default_profiles();
    const auto log = planar_log({{500, 0}});
    auto rng = make_stream(1, Stream::Location);
    const Position user = PlanarPoint{0, 0};
    const auto cfg = [](SwitchScheme s) {
        return SchemeConfig{s, default_threshold(ThresholdId::B1), 1.0, 30.0, {}};
    };

    SchemeController gprs(cfg(SwitchScheme::GprsNonSwitching), log, profiles);
    auto s = gprs.step(0, 1e5, user, rng);
    CHECK(s.link == Link::Cellular);
    CHECK_FALSE(s.wifi_radio_on);
    CHECK(s.lumps.total() == 0.0);

    SchemeController wifi(cfg(SwitchScheme::WifiNonSwitching), log, profiles);
    s = wifi.step(0, 0.0, user, rng);
    CHECK(s.link == Link::Wifi);
    CHECK(s.scans == 0);

    SchemeController zig(cfg(SwitchScheme::ZigBeeSwitching), log, profiles);
    s = zig.step(0, 100.0, user, rng);  // below B1: one decision, no trigger
    CHECK(s.lumps[Component::SystemOverhead] == profiles.decision_overhead_j);
    CHECK(zig.phase() == SeekPhase::OnCellular);
    s = zig.step(30, 1e4, user, rng);
    CHECK(zig.phase() == SeekPhase::AwaitingScan);
    CHECK_FALSE(s.wifi_radio_on);  // radio stays off during the walk
    CHECK(s.lumps[Component::LocationSensor] == profiles.zigbee.fix_energy_j());
    REQUIRE(s.walk_target);
    s = zig.step(31, std::nullopt, user, rng);
    CHECK(s.lumps.total() == 0.0);

    CHECK_THROWS_AS(SchemeController(cfg(SwitchScheme::AGpsSwitching), log, profiles), SchemeFrameMismatch);
    CHECK_THROWS_AS(SchemeController(cfg(SwitchScheme::ZigBeeSwitching), ApLog(Frame::Indoor), profiles),
                    EmptyLog);
}

TEST_CASE("failed verification falls back to periodic scanning") {
    const auto log = planar_log({{300, 0}});
    const auto profiles = default_profiles();
    int fallbacks = 0, single = 0;
    for (std::uint64_t seed = 1; seed <= 64; ++seed) {
        const auto ep = walk_episode(SwitchScheme::GsmSwitching, log, profiles, PlanarPoint{0, 0}, seed);
        REQUIRE(ep.connected);
        // Never worse than scanning from the trigger.
        REQUIRE(ep.scans <= 8);
        (ep.scans > 1 ? fallbacks : single) += 1;
    }
    CHECK(fallbacks > 0);
    CHECK(single > 0);

    SchemeController c({SwitchScheme::GsmSwitching, default_threshold(ThresholdId::B1), 1.0, 30.0, {}},
                       log, profiles);
    auto rng = make_stream(1, Stream::Location);
    std::vector<SchemeEvent> events;
    // Stand still: an early verification scan misses and periodic scans follow.
    for (int t = 0; t < 2000; ++t) c.step(t, t == 0 ? std::optional<double>(1e4) : std::nullopt, PlanarPoint{0, 0}, rng, &events);
    CHECK(c.phase() == SeekPhase::Scanning);
    REQUIRE(events.size() >= 3);
    CHECK(events[1].what == "scan miss");
    CHECK(events[2].t_s - events[1].t_s == 30.0);
}
