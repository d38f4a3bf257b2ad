#pragma once

// The access-point log: one record per discovered Wi-Fi network, carrying the
// AP location and how far its signal reaches. Nearest-AP and coverage queries
// run against it.
//
// On-disk format (UTF-8, LF, '.' decimal separator), one entry per line:
//
//     timestamp_s <TAB> net1,net2 <TAB> frame <TAB> coord1 <TAB> coord2 <TAB> range_m
//
// frame is "outdoor" (coord1 = latitude, coord2 = longitude, radians) or
// "indoor" (coord1 = x, coord2 = y, meters). Lines starting with '#' are
// comments, except the directive "# frame: <frame>" which declares the log's
// frame so that an empty log keeps it.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "locswitch/frame.hpp"
#include "locswitch/geo.hpp"

namespace locswitch {

struct ApLogEntry {
    double timestamp_s = 0.0;
    std::vector<std::string> networks;
    Position location;
    double range_m = 0.0;

    friend bool operator==(const ApLogEntry&, const ApLogEntry&) = default;
};

/// Immutable once built; entries all share the log's frame.
class ApLog {
public:
    explicit ApLog(Frame frame) : frame_(frame) {}
    ApLog(Frame frame, std::vector<ApLogEntry> entries);

    /// Throws FrameMismatch for an entry in the wrong frame and
    /// std::invalid_argument for an empty network set or non-positive range.
    void add(ApLogEntry entry);

    Frame frame() const noexcept { return frame_; }
    const std::vector<ApLogEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const ApLogEntry& operator[](std::size_t i) const { return entries_[i]; }

    friend bool operator==(const ApLog&, const ApLog&) = default;

private:
    Frame frame_;
    std::vector<ApLogEntry> entries_;
};

struct NearestAp {
    std::size_t index = 0;
    double distance_m = 0.0;
};

/// Entry closest to `user`. Ties go to the earlier timestamp, then the
/// lexicographically smaller first network id. Throws EmptyLog.
NearestAp nearest_ap(const ApLog& log, const Position& user, const EarthModel& earth = {});

/// distance(user, entry) <= range, boundary inclusive.
bool in_coverage(const ApLogEntry& entry, const Position& user, const EarthModel& earth = {});

/// What a Wi-Fi scan at `user` would find: the nearest entry whose range
/// covers the user, if any.
std::optional<NearestAp> covering_ap(const ApLog& log, const Position& user,
                                     const EarthModel& earth = {});

/// Rectangle in which APs are deployed. Outdoor fields are laid out in local
/// meters and mapped onto the sphere around the south-west corner anchor.
struct FieldSpec {
    Frame frame = Frame::Indoor;
    std::size_t count = 40;
    double width_m = 2000.0;
    double height_m = 340.0;
    double range_m = 100.0;
    double anchor_lat_deg = 30.0;
    double anchor_lon_deg = 120.0;

    void validate() const;
    /// Local rectangle coordinates to a frame position.
    Position to_position(const PlanarPoint& local, const EarthModel& earth = {}) const;
};

FieldSpec default_field(Frame frame);

/// Uniformly random APs strictly inside a width x height rectangle (indoor
/// frame), drawn from the Field stream of `seed`.
ApLog generate_field(std::uint64_t seed, std::size_t count, double width_m, double height_m,
                     double range_m);

ApLog generate_field(std::uint64_t seed, const FieldSpec& spec, const EarthModel& earth = {});

std::string format_log(const ApLog& log);
/// `fallback` is the frame of a log that declares none and has no entries.
ApLog parse_log(const std::string& content, Frame fallback = Frame::Indoor);

ApLog load_log(const std::filesystem::path& path, Frame fallback = Frame::Indoor);
void save_log(const ApLog& log, const std::filesystem::path& path);

}  // namespace locswitch
