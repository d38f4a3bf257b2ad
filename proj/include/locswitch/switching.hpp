#pragma once

// Rate monitor -> threshold decision engine -> switching module, and the
// comparison schemes that share the same controller interface.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locswitch/ap_registry.hpp"
#include "locswitch/energy.hpp"
#include "locswitch/rng.hpp"
#include "locswitch/workload.hpp"

namespace locswitch {

enum class SwitchScheme {
    AGpsSwitching,
    GsmSwitching,
    ZigBeeSwitching,
    ScanningSwitching,
    GprsNonSwitching,
    WifiNonSwitching,
};

inline constexpr std::array<SwitchScheme, 6> kAllSchemes{
    SwitchScheme::AGpsSwitching,    SwitchScheme::GsmSwitching,
    SwitchScheme::ZigBeeSwitching,  SwitchScheme::ScanningSwitching,
    SwitchScheme::GprsNonSwitching, SwitchScheme::WifiNonSwitching};

std::string_view to_string(SwitchScheme s) noexcept;
std::optional<SwitchScheme> parse_scheme(std::string_view s) noexcept;
/// "agps-switching, gsm-switching, ..." for error messages.
std::string scheme_names();

bool is_switching(SwitchScheme s) noexcept;
bool is_location_assisted(SwitchScheme s) noexcept;
/// A-GPS is outdoor only, ZigBee indoor only; the rest work in both frames.
bool valid_in(SwitchScheme s, Frame f) noexcept;
/// Throws SchemeFrameMismatch.
void check_scheme_frame(SwitchScheme s, Frame f);

/// The five schemes compared in each frame.
std::vector<SwitchScheme> default_grid_schemes(Frame f);

const LocationSensorProfile& sensor_for(SwitchScheme s, const PowerProfiles& profiles);

/// Switching is wanted iff the measured rate reaches the threshold.
bool decide(double rate_Bps, const Threshold& threshold) noexcept;

struct LocationFix {
    Position estimated;
    double energy_j = 0.0;
};

/// Position estimate uniformly distributed over the sensor's accuracy disk.
/// Throws FrameMismatch when the sensor cannot operate in the truth's frame.
LocationFix locate(const LocationSensorProfile& sensor, const Position& truth, Xoshiro256& rng,
                   const EarthModel& earth = {});

struct SwitchPlan {
    std::size_t target_index = 0;
    double distance_m = 0.0;  ///< estimated user position to target AP
    double t_switch_s = 0.0;  ///< distance_m / v_user
    Position estimated_user_position;
    /// When to run the single verification scan: the walking time until the
    /// user is inside the target's range with certainty given the sensor
    /// accuracy, i.e. (d - max(0, range - accuracy)) / v, floored at zero.
    /// Equals t_switch_s for sensors coarser than the AP range.
    double scan_delay_s = 0.0;
    double fix_energy_j = 0.0;
};

/// Locate, pick the nearest logged AP to the estimate, measure the distance,
/// derive the walking time. Throws EmptyLog and NonPositiveSpeed.
SwitchPlan plan_switch(const ApLog& log, const LocationSensorProfile& sensor,
                       const Position& truth, double v_user_mps, Xoshiro256& rng,
                       const EarthModel& earth = {});

enum class Link { Cellular, Wifi };

enum class SeekPhase {
    OnCellular,    ///< decision engine armed
    AwaitingScan,  ///< location-assisted walk, Wi-Fi radio off
    Scanning,      ///< periodic scans, Wi-Fi radio idling in between
    Connected,     ///< traffic on Wi-Fi, engine quiescent
};

struct SchemeEvent {
    double t_s = 0.0;
    std::string what;

    friend bool operator==(const SchemeEvent&, const SchemeEvent&) = default;
};

/// What the scheme wants for the coming tick.
struct SchemeStep {
    Link link = Link::Cellular;
    bool wifi_radio_on = false;
    std::optional<Position> walk_target;
    EnergyLedger lumps;  ///< scans, association, position fixes, decisions
    int scans = 0;
    int switches = 0;
};

struct SchemeConfig {
    SwitchScheme scheme = SwitchScheme::AGpsSwitching;
    Threshold threshold;
    double v_user_mps = 1.0;
    double scan_period_s = 30.0;
    EarthModel earth;
};

/// Per-run state machine of one scheme. The simulator calls step() at every
/// tick boundary, passing the freshly measured rate on measurement ticks.
class SchemeController {
public:
    SchemeController(SchemeConfig config, const ApLog& log, const PowerProfiles& profiles);

    SchemeStep step(double t_s, std::optional<double> measured_rate_Bps, const Position& user,
                    Xoshiro256& location_rng, std::vector<SchemeEvent>* events = nullptr);

    /// The user moved away from the connected AP; re-arms the decision engine.
    void leave_coverage(double t_s, std::vector<SchemeEvent>* events = nullptr);

    SeekPhase phase() const noexcept { return phase_; }
    std::optional<double> connected_since() const noexcept { return connected_since_; }
    const std::optional<SwitchPlan>& last_plan() const noexcept { return last_plan_; }

private:
    void trigger(double t_s, const Position& user, Xoshiro256& rng, SchemeStep& out,
                 std::vector<SchemeEvent>* events);
    void scan(double t_s, const Position& user, SchemeStep& out, std::vector<SchemeEvent>* events);

    SchemeConfig config_;
    const ApLog& log_;
    const PowerProfiles& profiles_;
    SeekPhase phase_ = SeekPhase::OnCellular;
    double next_scan_s_ = 0.0;
    std::size_t seek_target_ = 0;
    std::optional<double> connected_since_;
    std::optional<SwitchPlan> last_plan_;
};

}  // namespace locswitch
