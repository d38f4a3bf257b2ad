#include "locswitch/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "locswitch/errors.hpp"
#include "locswitch/text.hpp"

namespace locswitch {

std::string_view to_string(UserClass u) noexcept {
    constexpr std::array<std::string_view, 4> names{"U1", "U2", "U3", "U4"};
    return names[static_cast<std::size_t>(u)];
}

std::optional<UserClass> parse_user(std::string_view s) noexcept {
    for (auto u : kAllUsers) {
        if (to_string(u) == s) return u;
    }
    return std::nullopt;
}

std::string_view to_string(ThresholdId b) noexcept {
    constexpr std::array<std::string_view, 4> names{"B1", "B2", "B3", "B4"};
    return names[static_cast<std::size_t>(b)];
}

std::optional<ThresholdId> parse_threshold(std::string_view s) noexcept {
    for (auto b : kAllThresholds) {
        if (to_string(b) == s) return b;
    }
    return std::nullopt;
}

void UserProfile::validate() const {
    if (!(mean_rate_Bps >= 0) || !std::isfinite(mean_rate_Bps)) {
        throw ConfigError("user mean rate must be non-negative");
    }
    if (!(burstiness >= 0)) throw ConfigError("user burstiness must be non-negative");
    if (!(uplink_fraction >= 0 && uplink_fraction <= 1)) {
        throw ConfigError("uplink fraction must lie in [0, 1]");
    }
}

std::array<UserProfile, 4> default_users() {
    // Means are calibration constants: U1 stays under every threshold, U2-U4
    // sit above B4 with increasing demand.
    return {{
        {UserClass::U1, "text messages", 500.0, 0.05, 0.5, 0},
        {UserClass::U2, "text messages, web browsing", 8'000.0, 0.4, 0.2, 0},
        {UserClass::U3, "text messages, video streaming", 15'000.0, 0.4, 0.05, 0},
        {UserClass::U4, "text messages, file download", 45'000.0, 0.3, 0.05, 50ULL << 20},
    }};
}

UserProfile default_user(UserClass u) { return default_users()[static_cast<std::size_t>(u)]; }

std::array<Threshold, 4> default_thresholds() {
    return {{{ThresholdId::B1, 5.0},
             {ThresholdId::B2, 10.0},
             {ThresholdId::B3, 15.0},
             {ThresholdId::B4, 20.0}}};
}

Threshold default_threshold(ThresholdId b) {
    return default_thresholds()[static_cast<std::size_t>(b)];
}

RateProcess::RateProcess(const UserProfile& profile, Xoshiro256 rng)
    : mean_(profile.mean_rate_Bps),
      sigma_(profile.mean_rate_Bps * profile.burstiness),
      state_(profile.mean_rate_Bps),
      rng_(rng) {}

double RateProcess::next_Bps() {
    if (!started_) {
        state_ = mean_ + sigma_ * rng_.normal();
        started_ = true;
    } else {
        const double innovation = sigma_ * std::sqrt(1.0 - kPersistence * kPersistence);
        state_ = mean_ + kPersistence * (state_ - mean_) + innovation * rng_.normal();
    }
    return std::clamp(state_, 0.0, kMaxRateBps);
}

RateTrace generate_trace(const UserProfile& profile, double duration_s, double interval_s,
                         std::uint64_t seed) {
    if (!(interval_s > 0)) throw std::invalid_argument("trace interval must be positive");
    if (duration_s < 0) throw NegativeDuration(duration_s);
    RateTrace trace;
    trace.interval_s = interval_s;
    const auto n = static_cast<std::size_t>(std::floor(duration_s / interval_s + 1e-9));
    RateProcess process(profile, make_stream(seed, Stream::Trace));
    trace.samples_Bps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) trace.samples_Bps.push_back(process.next_Bps());
    return trace;
}

RateSource::RateSource(const UserProfile& profile, std::uint64_t seed)
    : process_(std::in_place, profile, make_stream(seed, Stream::Trace)) {}

RateSource::RateSource(RateTrace recorded) : recorded_(std::move(recorded)) {
    if (recorded_.samples_Bps.empty()) throw ConfigError("recorded trace has no samples");
}

double RateSource::next_Bps() {
    if (process_) return process_->next_Bps();
    const double v = recorded_.samples_Bps[cursor_];
    cursor_ = (cursor_ + 1) % recorded_.samples_Bps.size();
    return v;
}

std::string format_trace(const RateTrace& trace) {
    std::string out = "# t_s\trate_Bps\n";
    for (std::size_t i = 0; i < trace.samples_Bps.size(); ++i) {
        out += text::format_double(static_cast<double>(i) * trace.interval_s);
        out += '\t';
        out += text::format_double(trace.samples_Bps[i]);
        out += '\n';
    }
    return out;
}

RateTrace parse_trace(const std::string& content) {
    std::vector<double> times;
    RateTrace trace;
    std::istringstream in(content);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::istringstream cols{std::string(line)};
        std::string t_s, rate_s, extra;
        cols >> t_s >> rate_s;
        if (rate_s.empty() || (cols >> extra)) throw ParseError(lineno, "expected two columns");
        const auto t = text::parse_double(t_s);
        const auto r = text::parse_double(rate_s);
        if (!t || !r) throw ParseError(lineno, "bad number");
        if (*r < 0) throw ParseError(lineno, "rate must be non-negative");
        if (!times.empty() && !(*t > times.back())) {
            throw ParseError(lineno, "timestamps must increase");
        }
        times.push_back(*t);
        trace.samples_Bps.push_back(*r);
    }
    if (times.size() >= 2) {
        trace.interval_s = times[1] - times[0];
        for (std::size_t i = 2; i < times.size(); ++i) {
            const double gap = times[i] - times[i - 1];
            if (std::abs(gap - trace.interval_s) > 1e-6 * trace.interval_s) {
                throw ConfigError("trace samples are not evenly spaced");
            }
        }
    }
    return trace;
}

RateTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open trace '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

void save_trace(const RateTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write trace '" + path.string() + "'");
    out << format_trace(trace);
}

}  // namespace locswitch
