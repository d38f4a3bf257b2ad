#pragma once

#include <optional>
#include <string_view>

#include "locswitch/geo.hpp"

namespace locswitch {

/// Coordinate system of a scenario: spherical outdoors, planar indoors.
enum class Frame { Outdoor, Indoor };

std::string_view to_string(Frame f) noexcept;
std::optional<Frame> parse_frame(std::string_view s) noexcept;

inline Frame frame_of(const Position& p) noexcept {
    return std::holds_alternative<GeoPoint>(p) ? Frame::Outdoor : Frame::Indoor;
}

}  // namespace locswitch
