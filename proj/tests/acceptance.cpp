// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "locswitch/config.hpp"
#include "locswitch/errors.hpp"
#include "locswitch/geo.hpp"
#include "locswitch/report.hpp"
#include "locswitch/rng.hpp"
#include "locswitch/sim.hpp"
#include "locswitch/text.hpp"

namespace fs = std::filesystem;
using namespace locswitch;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr double kHaversineRelTol = 1e-6;
constexpr double kPolesRelTol = 1e-12;
constexpr double kConservationRelTol = 1e-9;
constexpr double kU1Closeness = 0.05;
constexpr double kIdleDepletionS = 19980.0 / 0.2688;
constexpr double kFullSweepBudgetS = 300.0;
constexpr double kCellSetBudgetS = 60.0;
constexpr int kSeeds = 8;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int digits = 4) { return text::format_fixed(v, digits); }

unsigned workers() { return std::max(1U, std::thread::hardware_concurrency()); }

/// All default grid cells of one frame, keyed for lookups.
class Grid {
public:
    explicit Grid(Frame frame) : frame_(frame) {
        const auto t0 = Clock::now();
        const Scenario base = default_scenario(frame);
        std::vector<Scenario> scenarios;
        for (const auto s : default_grid_schemes(frame)) {
            for (const auto u : kAllUsers) {
                for (const auto b : kAllThresholds) {
                    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
                        Scenario sc = base;
                        sc.scheme = s;
                        sc.user = default_user(u);
                        sc.threshold = default_threshold(b);
                        sc.seed = seed;
                        keys_.push_back({s, u, b, seed});
                        scenarios.push_back(sc);
                    }
                }
            }
        }
        const auto results = sweep(scenarios, workers());
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (!results[i].report) {
                errors_.push_back(results[i].error);
                continue;
            }
            const auto& k = keys_[i];
            reports_[k] = *results[i].report;
            cells_.push_back({frame, k.scheme, k.user, k.threshold, k.seed, *results[i].report});
            max_conservation_ = std::max(max_conservation_, results[i].report->max_conservation_error);
        }
        elapsed_s_ = seconds_since(t0);
    }

    const SimReport& at(SwitchScheme s, UserClass u, ThresholdId b, std::uint64_t seed) const {
        return reports_.at({s, u, b, seed});
    }
    double eff(SwitchScheme s, UserClass u, ThresholdId b, std::uint64_t seed) const {
        return at(s, u, b, seed).efficiency_Bpj;
    }
    std::uint64_t total_scans(SwitchScheme s, std::optional<UserClass> user = std::nullopt) const {
        std::uint64_t n = 0;
        for (const auto& [k, r] : reports_) {
            if (k.scheme == s && (!user || k.user == *user)) n += r.scan_count;
        }
        return n;
    }
    std::vector<GridCell> cells_for_seed(std::uint64_t seed) const {
        std::vector<GridCell> out;
        for (const auto& c : cells_) {
            if (c.seed == seed) out.push_back(c);
        }
        return out;
    }
    Frame frame() const { return frame_; }
    const std::vector<std::string>& errors() const { return errors_; }
    double max_conservation() const { return max_conservation_; }
    double elapsed_s() const { return elapsed_s_; }

private:
    struct Key {
        SwitchScheme scheme;
        UserClass user;
        ThresholdId threshold;
        std::uint64_t seed;
        auto operator<=>(const Key&) const = default;
    };
    Frame frame_;
    std::vector<Key> keys_;
    std::map<Key, SimReport> reports_;
    std::vector<GridCell> cells_;
    std::vector<std::string> errors_;
    double max_conservation_ = 0.0;
    double elapsed_s_ = 0.0;
};

// ---------------------------------------------------------------------------

Verdict battery_identity() {
    const double j = default_profiles().battery_capacity_j();
    const bool pass = j == 19980.0 && 1500.0 * 3.7 * 3.6 == 19980.0 &&
                      default_scenario(Frame::Outdoor).battery_j == 19980.0;
    return {pass, "capacity " + text::format_double(j) + " J"};
}

double cosine_law_km(const GeoPoint& a, const GeoPoint& b, double r_km) {
    const double c = std::sin(a.lat) * std::sin(b.lat) + std::cos(a.lat) * std::cos(b.lat) * std::cos(a.lon - b.lon);
    return std::acos(std::clamp(c, -1.0, 1.0)) * r_km;
}

Verdict haversine_oracle() {
    constexpr double r = 6371.0;
    auto rng = make_stream(2026, Stream::Field);
    double worst = 0.0;
    int compared = 0;
    for (int i = 0; i < 10'000; ++i) {
        const GeoPoint a{std::asin(rng.uniform(-1, 1)), rng.uniform(-std::numbers::pi, std::numbers::pi)};
        const GeoPoint b{std::asin(rng.uniform(-1, 1)), rng.uniform(-std::numbers::pi, std::numbers::pi)};
        const double oracle = cosine_law_km(a, b, r);
        // The cosine law is ill-conditioned for tiny and near-antipodal arcs.
        if (oracle < 1.0 || oracle > std::numbers::pi * r - 1.0) continue;
        ++compared;
        worst = std::max(worst, std::abs(haversine_distance(a, b) - oracle) / oracle);
    }
    const double poles = haversine_distance({std::numbers::pi / 2, 0}, {-std::numbers::pi / 2, 0});
    const double poles_err = std::abs(poles - std::numbers::pi * r) / (std::numbers::pi * r);
    const bool pass = worst <= kHaversineRelTol && poles_err <= kPolesRelTol && compared >= 9'900;
    return {pass, std::to_string(compared) + " pairs, worst rel err " + text::format_double(worst) +
                      ", poles rel err " + text::format_double(poles_err)};
}

Verdict eq1_exactness() {
    bool pass = time_to_switch(100.0, 1.0) == 100.0;
    int checked = 0;
    for (double d = 0; d <= 5000; d += 12.5) {
        for (const double v : {0.25, 0.5, 1.0, 1.4, 2.0, 3.0}) {
            pass &= time_to_switch(d, v) == d / v;
            ++checked;
        }
    }
    bool threw = false;
    try {
        time_to_switch(10, 0);
    } catch (const NonPositiveSpeed&) {
        threw = true;
    }
    return {pass && threw, std::to_string(checked) + " grid points, t(100 m, 1 m/s) = 100 s"};
}

Verdict idle_depletion(double& conservation) {
    Scenario sc = default_scenario(Frame::Indoor);
    sc.user.mean_rate_Bps = 0.0;
    sc.profiles.cellular.idle_w = 0.0;
    sc.profiles.cellular.scan_w = 0.0;
    const auto r = run(sc);
    conservation = std::max(conservation, r.max_conservation_error);
    const double err = std::abs(r.depletion_time_s - kIdleDepletionS);
    return {r.stop == StopReason::BatteryDepleted && err <= sc.tick_s,
            "depleted at " + num(r.depletion_time_s, 3) + " s, expected " + num(kIdleDepletionS, 3) + " s"};
}

Verdict u4_ordering(const Grid& g, SwitchScheme best, std::vector<SwitchScheme> chain, double budget_s) {
    // chain: Wi-Fi, then switching schemes in decreasing efficiency.
    int held = 0;
    std::string worst;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        bool ok = true;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const double hi = g.eff(chain[i], UserClass::U4, ThresholdId::B4, seed);
            const double lo = g.eff(chain[i + 1], UserClass::U4, ThresholdId::B4, seed);
            ok &= hi > lo;
            min_margin = std::min(min_margin, hi / lo);
        }
        for (const auto s : default_grid_schemes(g.frame())) {
            if (is_switching(s) && s != best) {
                ok &= g.eff(best, UserClass::U4, ThresholdId::B4, seed) > g.eff(s, UserClass::U4, ThresholdId::B4, seed);
            }
        }
        held += ok ? 1 : 0;
    }
    std::string names;
    for (const auto s : chain) names += (names.empty() ? "" : " > ") + std::string(to_string(s));
    return {held == kSeeds && g.elapsed_s() < budget_s,
            names + " on " + std::to_string(held) + "/" + std::to_string(kSeeds) + " seeds, min step ratio " +
                num(min_margin) + ", grid time " + num(g.elapsed_s(), 2) + " s"};
}

Verdict u1_closeness(const Grid& g) {
    double worst_switching = 0.0, worst_gprs = 0.0;
    for (const auto b : kAllThresholds) {
        for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0, best = 0.0;
            for (const auto s : default_grid_schemes(g.frame())) {
                const double e = g.eff(s, UserClass::U1, b, seed);
                best = std::max(best, e);
                if (is_switching(s)) {
                    lo = std::min(lo, e);
                    hi = std::max(hi, e);
                }
            }
            worst_switching = std::max(worst_switching, (hi - lo) / hi);
            const double gprs = g.eff(SwitchScheme::GprsNonSwitching, UserClass::U1, b, seed);
            worst_gprs = std::max(worst_gprs, (best - gprs) / best);
        }
    }
    return {worst_switching <= kU1Closeness && worst_gprs <= kU1Closeness,
            "switching spread " + num(100 * worst_switching, 3) + "%, GPRS gap to best " +
                num(100 * worst_gprs, 3) + "% (limit 5%)"};
}

Verdict fig9_trend(const Grid& g) {
    int held = 0;
    std::string shown;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const auto cells = g.cells_for_seed(seed);
        const auto r = efficiency_ratio(cells);
        const double r1 = r.at(UserClass::U1), r2 = r.at(UserClass::U2), r3 = r.at(UserClass::U3),
                     r4 = r.at(UserClass::U4);
        const bool ok = r1 < 1.0 && 1.0 < r2 && r2 < r3 && r3 < r4 && r4 / r3 >= r2 / r1;
        held += ok ? 1 : 0;
        if (seed == 1) {
            shown = "seed 1: " + num(r1, 3) + " / " + num(r2, 3) + " / " + num(r3, 3) + " / " + num(r4, 3) +
                    ", r4/r3 " + num(r4 / r3, 3) + " vs r2/r1 " + num(r2 / r1, 3);
        }
    }
    return {held == kSeeds, std::to_string(held) + "/" + std::to_string(kSeeds) + " seeds; " + shown};
}

Verdict scan_dominance(const Grid& g, std::vector<SwitchScheme> chain) {
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        pass &= g.total_scans(chain[i]) <= g.total_scans(chain[i + 1]);
        for (const auto u : {UserClass::U3, UserClass::U4}) {
            pass &= g.total_scans(chain[i], u) < g.total_scans(chain[i + 1], u);
        }
    }
    for (const auto s : chain) {
        detail += (detail.empty() ? "" : " <= ") + std::string(to_string(s)) + " " + std::to_string(g.total_scans(s));
    }
    return {pass, detail};
}

Verdict combine(std::initializer_list<std::pair<const char*, Verdict>> parts) {
    Verdict v{true, ""};
    for (const auto& [name, part] : parts) {
        v.pass &= part.pass;
        v.detail += std::string(v.detail.empty() ? "" : "; ") + name + (part.pass ? " ok" : " FAILED") + " (" +
                    part.detail + ")";
    }
    return v;
}

Verdict nearest_equivalence() {
    auto rng = make_stream(77, Stream::Field);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const Frame f = i % 2 == 0 ? Frame::Outdoor : Frame::Indoor;
        FieldSpec spec = default_field(f);
        spec.count = 1 + rng.next() % 60;
        const auto log = generate_field(rng.next(), spec);
        const Position q = spec.to_position({rng.uniform(0, spec.width_m), rng.uniform(0, spec.height_m)});
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < log.size(); ++k) {
            const double d = distance_m(q, log[k].location);
            if (d < best_d) {
                best = k;
                best_d = d;
            }
        }
        mismatches += nearest_ap(log, q).index == best ? 0 : 1;
    }
    return {mismatches == 0, "1000 instances, " + std::to_string(mismatches) + " mismatches"};
}

int shell(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("'") + LOCSWITCH_CLI + "' " + args + " >'" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict determinism(const fs::path& root) {
    const auto t0 = Clock::now();
    const std::string grid = "sweep --frame outdoor --set sweep.seeds=1,2 --set sweep.users=U2,U4 ";
    const auto a = root / "det_a", b = root / "det_b", c = root / "det_c";
    const int ra = shell(grid + "--parallel 1 --out-dir '" + a.string() + "'", root / "det_a.log");
    const int rb = shell(grid + "--parallel 1 --out-dir '" + b.string() + "'", root / "det_b.log");
    const int rc = shell(grid + "--parallel 8 --out-dir '" + c.string() + "'", root / "det_c.log");
    const auto ca = slurp(a / "results.csv");
    const bool pass = ra == 0 && rb == 0 && rc == 0 && !ca.empty() && ca == slurp(b / "results.csv") &&
                      ca == slurp(c / "results.csv");
    return {pass, "rerun and parallel 1 vs 8 results.csv " + std::string(pass ? "identical" : "differ") + " (" +
                      std::to_string(std::count(ca.begin(), ca.end(), '\n') - 1) + " rows, " +
                      num(seconds_since(t0), 2) + " s)"};
}

Verdict full_sweep(const fs::path& root) {
    const auto dir = root / "full";
    const auto t0 = Clock::now();
    const int rc = shell("sweep --frame both --parallel " + std::to_string(workers()) + " --out-dir '" +
                             dir.string() + "'",
                         root / "full.log");
    const double elapsed = seconds_since(t0);
    bool pass = rc == 0 && elapsed < kFullSweepBudgetS;
    std::string detail = "exit " + std::to_string(rc) + ", " + num(elapsed, 2) + " s";
    for (const char* frame : {"outdoor", "indoor"}) {
        const auto csv = slurp(dir / frame / "results.csv");
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        bool well_formed = line == csv_header();
        const auto columns = std::count(line.begin(), line.end(), ',');
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            well_formed &= std::count(line.begin(), line.end(), ',') == columns;
            well_formed &= line.back() == ',';  // empty error column
        }
        well_formed &= rows == 5 * 4 * 4 * kSeeds;
        for (const auto u : kAllUsers) {
            well_formed &= fs::exists(dir / frame / ("fig8_" + std::string(to_string(u)) + ".dat"));
        }
        const auto fig9 = slurp(dir / frame / "fig9.dat");
        well_formed &= std::count(fig9.begin(), fig9.end(), '\n') == 5;
        pass &= well_formed;
        detail += std::string(", ") + frame + " " + std::to_string(rows) + " rows" + (well_formed ? "" : " MALFORMED");
    }
    return {pass, detail};
}

}  // namespace

int main() {
    const auto root = fs::temp_directory_path() / "locswitch_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    double conservation = 0.0;
    std::map<int, std::pair<std::string, Verdict>> results;

    results[1] = {"battery identity", battery_identity()};
    results[2] = {"haversine oracle", haversine_oracle()};
    results[3] = {"time-to-switch exactness", eq1_exactness()};
    results[5] = {"idle depletion", idle_depletion(conservation)};

    const Grid outdoor(Frame::Outdoor);
    const Grid indoor(Frame::Indoor);
    conservation = std::max({conservation, outdoor.max_conservation(), indoor.max_conservation()});
    const bool grids_ok = outdoor.errors().empty() && indoor.errors().empty();

    using S = SwitchScheme;
    results[6] = {"U4 outdoor scheme ordering",
                  u4_ordering(outdoor, S::AGpsSwitching,
                              {S::WifiNonSwitching, S::AGpsSwitching, S::GsmSwitching, S::ScanningSwitching},
                              kCellSetBudgetS)};
    results[7] = {"U1 closeness", u1_closeness(outdoor)};
    results[8] = {"Wi-Fi/GPRS ratio trend", fig9_trend(outdoor)};
    results[9] = {"scan-count dominance",
                  scan_dominance(outdoor, {S::AGpsSwitching, S::GsmSwitching, S::ScanningSwitching})};
    results[10] = {"indoor parity",
                   combine({{"ordering", u4_ordering(indoor, S::ZigBeeSwitching,
                                                     {S::WifiNonSwitching, S::ZigBeeSwitching, S::ScanningSwitching},
                                                     kCellSetBudgetS)},
                            {"U1 closeness", u1_closeness(indoor)},
                            {"ratio trend", fig9_trend(indoor)},
                            {"scans", scan_dominance(indoor, {S::ZigBeeSwitching, S::ScanningSwitching})}})};
    results[11] = {"determinism and parallelism", determinism(root)};
    results[12] = {"nearest_ap brute-force equivalence", nearest_equivalence()};
    results[13] = {"full default sweep", full_sweep(root)};
    results[4] = {"ledger conservation",
                  {grids_ok && conservation <= kConservationRelTol,
                   "max relative error " + text::format_double(conservation) + " over " + "idle run and " +
                       std::to_string(2 * 5 * 4 * 4 * kSeeds) + " grid runs" +
                       (grids_ok ? "" : ", grid errors: " + outdoor.errors().front())}};

    int failed = 0;
    for (const auto& [id, entry] : results) {
        const auto& [title, v] = entry;
        std::printf("[%s] criterion %2d  %-36s %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), v.detail.c_str());
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    fs::remove_all(root);
    return failed;
}
