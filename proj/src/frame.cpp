#include "locswitch/frame.hpp"

namespace locswitch {

std::string_view to_string(Frame f) noexcept {
    return f == Frame::Outdoor ? "outdoor" : "indoor";
}

std::optional<Frame> parse_frame(std::string_view s) noexcept {
    if (s == "outdoor") return Frame::Outdoor;
    if (s == "indoor") return Frame::Indoor;
    return std::nullopt;
}

}  // namespace locswitch
