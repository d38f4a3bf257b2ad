#pragma once

// User classes, switching thresholds and seeded data-rate traces.
//
// Units: rates are bytes/second internally. Thresholds are quoted in
// kilobits/second and converted with 1 kb/s = 125 B/s before any comparison;
// trace rates follow the kilobyte/second convention (1 kB/s = 1000 B/s).

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locswitch/rng.hpp"

namespace locswitch {

enum class UserClass { U1 = 0, U2, U3, U4 };
inline constexpr std::array<UserClass, 4> kAllUsers{UserClass::U1, UserClass::U2, UserClass::U3,
                                                    UserClass::U4};

std::string_view to_string(UserClass u) noexcept;
std::optional<UserClass> parse_user(std::string_view s) noexcept;

struct UserProfile {
    UserClass id = UserClass::U1;
    std::string demand;
    double mean_rate_Bps = 0.0;
    /// Coefficient of variation of the latent rate process.
    double burstiness = 0.0;
    /// Share of the traffic that is uplink.
    double uplink_fraction = 0.5;
    std::uint64_t pending_download_bytes = 0;

    void validate() const;
};

/// U1 text only, U2 adds web, U3 adds video, U4 adds a 50 MiB download.
std::array<UserProfile, 4> default_users();
UserProfile default_user(UserClass u);

enum class ThresholdId { B1 = 0, B2, B3, B4 };
inline constexpr std::array<ThresholdId, 4> kAllThresholds{ThresholdId::B1, ThresholdId::B2,
                                                           ThresholdId::B3, ThresholdId::B4};

std::string_view to_string(ThresholdId b) noexcept;
std::optional<ThresholdId> parse_threshold(std::string_view s) noexcept;

struct Threshold {
    ThresholdId id = ThresholdId::B1;
    double kbps = 5.0;

    double bytes_per_second() const noexcept { return kbps * 125.0; }
};

/// B1..B4 = 5, 10, 15, 20 kb/s.
std::array<Threshold, 4> default_thresholds();
Threshold default_threshold(ThresholdId b);

inline constexpr double kMaxRateBps = 60'000.0;

struct RateTrace {
    double interval_s = 30.0;
    std::vector<double> samples_Bps;

    friend bool operator==(const RateTrace&, const RateTrace&) = default;
};

/// Mean-reverting rate process: a Gaussian AR(1) latent state around the
/// profile mean, with stationary standard deviation mean * burstiness,
/// observed through a clamp to [0, 60 kB/s].
class RateProcess {
public:
    static constexpr double kPersistence = 0.5;

    RateProcess(const UserProfile& profile, Xoshiro256 rng);

    double next_Bps();

private:
    double mean_;
    double sigma_;
    double state_;
    bool started_ = false;
    Xoshiro256 rng_;
};

/// floor(duration / interval) samples from the Trace stream of `seed`.
RateTrace generate_trace(const UserProfile& profile, double duration_s, double interval_s,
                         std::uint64_t seed);

/// Sequential source of per-interval rates: either a live RateProcess or a
/// recorded trace replayed cyclically.
class RateSource {
public:
    RateSource(const UserProfile& profile, std::uint64_t seed);
    explicit RateSource(RateTrace recorded);

    double next_Bps();

private:
    std::optional<RateProcess> process_;
    RateTrace recorded_;
    std::size_t cursor_ = 0;
};

/// Two columns per line: t_s and rate_Bps. '#' starts a comment.
std::string format_trace(const RateTrace& trace);
RateTrace parse_trace(const std::string& content);
RateTrace load_trace(const std::filesystem::path& path);
void save_trace(const RateTrace& trace, const std::filesystem::path& path);

}  // namespace locswitch
