#include "locswitch/ap_registry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "locswitch/errors.hpp"
#include "locswitch/rng.hpp"
#include "locswitch/text.hpp"

namespace locswitch {

namespace {

void check_entry(const ApLogEntry& e) {
    if (e.networks.empty()) throw std::invalid_argument("log entry needs at least one network");
    if (!(e.range_m > 0) || !std::isfinite(e.range_m)) {
        throw std::invalid_argument("log entry range must be positive");
    }
    if (!is_valid(e.location)) throw std::invalid_argument("log entry location is invalid");
}

bool precedes(const ApLogEntry& a, const ApLogEntry& b) {
    if (a.timestamp_s != b.timestamp_s) return a.timestamp_s < b.timestamp_s;
    return a.networks.front() < b.networks.front();
}

std::string format_entry(const ApLogEntry& e) {
    std::string line = text::format_double(e.timestamp_s);
    line += '\t';
    for (std::size_t i = 0; i < e.networks.size(); ++i) {
        if (i > 0) line += ',';
        line += e.networks[i];
    }
    line += '\t';
    if (const auto* g = std::get_if<GeoPoint>(&e.location)) {
        line += "outdoor\t" + text::format_double(g->lat) + '\t' + text::format_double(g->lon);
    } else {
        const auto& p = std::get<PlanarPoint>(e.location);
        line += "indoor\t" + text::format_double(p.x) + '\t' + text::format_double(p.y);
    }
    line += '\t';
    line += text::format_double(e.range_m);
    return line;
}

}  // namespace

ApLog::ApLog(Frame frame, std::vector<ApLogEntry> entries) : frame_(frame) {
    entries_.reserve(entries.size());
    for (auto& e : entries) add(std::move(e));
}

void ApLog::add(ApLogEntry entry) {
    check_entry(entry);
    if (frame_of(entry.location) != frame_) {
        throw FrameMismatch("entry frame differs from the " + std::string(to_string(frame_)) +
                            " log");
    }
    entries_.push_back(std::move(entry));
}

NearestAp nearest_ap(const ApLog& log, const Position& user, const EarthModel& earth) {
    if (log.empty()) throw EmptyLog();
    if (frame_of(user) != log.frame()) throw FrameMismatch("user position is not in the log frame");
    NearestAp best{0, distance_m(user, log[0].location, earth)};
    for (std::size_t i = 1; i < log.size(); ++i) {
        const double d = distance_m(user, log[i].location, earth);
        if (d < best.distance_m || (d == best.distance_m && precedes(log[i], log[best.index]))) {
            best = {i, d};
        }
    }
    return best;
}

bool in_coverage(const ApLogEntry& entry, const Position& user, const EarthModel& earth) {
    return distance_m(user, entry.location, earth) <= entry.range_m;
}

std::optional<NearestAp> covering_ap(const ApLog& log, const Position& user,
                                     const EarthModel& earth) {
    std::optional<NearestAp> best;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const double d = distance_m(user, log[i].location, earth);
        if (d > log[i].range_m) continue;
        if (!best || d < best->distance_m ||
            (d == best->distance_m && precedes(log[i], log[best->index]))) {
            best = NearestAp{i, d};
        }
    }
    return best;
}

void FieldSpec::validate() const {
    if (!(width_m > 0) || !(height_m > 0) || !std::isfinite(width_m) || !std::isfinite(height_m)) {
        throw ConfigError("field rectangle dimensions must be positive");
    }
    if (!(range_m > 0) || !std::isfinite(range_m)) throw ConfigError("AP range must be positive");
    if (frame == Frame::Outdoor && !(std::abs(anchor_lat_deg) < 85.0)) {
        throw ConfigError("field anchor latitude must lie within (-85, 85) degrees");
    }
}

Position FieldSpec::to_position(const PlanarPoint& local, const EarthModel& earth) const {
    if (frame == Frame::Indoor) return local;
    const LocalTangent tangent(GeoPoint{deg_to_rad(anchor_lat_deg), deg_to_rad(anchor_lon_deg)},
                               earth);
    return tangent.to_geo(local);
}

FieldSpec default_field(Frame frame) {
    FieldSpec spec;
    spec.frame = frame;
    if (frame == Frame::Outdoor) {
        spec.count = 12;
        spec.width_m = 3000.0;
        spec.height_m = 3000.0;
    }
    return spec;
}

ApLog generate_field(std::uint64_t seed, std::size_t count, double width_m, double height_m,
                     double range_m) {
    FieldSpec spec;
    spec.frame = Frame::Indoor;
    spec.count = count;
    spec.width_m = width_m;
    spec.height_m = height_m;
    spec.range_m = range_m;
    return generate_field(seed, spec);
}

ApLog generate_field(std::uint64_t seed, const FieldSpec& spec, const EarthModel& earth) {
    spec.validate();
    auto rng = make_stream(seed, Stream::Field);
    ApLog log(spec.frame);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const double x = spec.width_m * rng.uniform_open01();
        const double y = spec.height_m * rng.uniform_open01();
        char id[32];
        std::snprintf(id, sizeof id, "ap-%03zu", i);
        log.add(ApLogEntry{static_cast<double>(i), {id}, spec.to_position({x, y}, earth),
                           spec.range_m});
    }
    return log;
}

std::string format_log(const ApLog& log) {
    std::string out = "# locswitch access-point log\n# frame: ";
    out += to_string(log.frame());
    out += '\n';
    for (const auto& e : log.entries()) {
        out += format_entry(e);
        out += '\n';
    }
    return out;
}

ApLog parse_log(const std::string& content, Frame fallback) {
    std::optional<Frame> declared;
    std::vector<std::pair<std::size_t, ApLogEntry>> rows;
    std::istringstream in(content);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = text::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            constexpr std::string_view directive = "frame:";
            auto body = text::trim(line.substr(1));
            if (body.starts_with(directive)) {
                const auto f = parse_frame(text::trim(body.substr(directive.size())));
                if (!f) throw ParseError(lineno, "unknown frame in directive");
                if (declared && *declared != *f) throw FrameMismatch("conflicting frame directives");
                declared = f;
            }
            continue;
        }
        const auto fields = text::split(line, '\t');
        if (fields.size() != 6) throw ParseError(lineno, "expected 6 tab-separated fields");
        const auto ts = text::parse_double(fields[0]);
        if (!ts) throw ParseError(lineno, "bad timestamp");
        ApLogEntry e;
        e.timestamp_s = *ts;
        for (auto net : text::split(fields[1], ',')) {
            net = text::trim(net);
            if (net.empty()) throw ParseError(lineno, "empty network identifier");
            e.networks.emplace_back(net);
        }
        const auto frame = parse_frame(text::trim(fields[2]));
        if (!frame) throw ParseError(lineno, "frame must be 'outdoor' or 'indoor'");
        const auto c1 = text::parse_double(fields[3]);
        const auto c2 = text::parse_double(fields[4]);
        const auto range = text::parse_double(fields[5]);
        if (!c1 || !c2) throw ParseError(lineno, "bad coordinate");
        if (!range || !(*range > 0) || !std::isfinite(*range)) {
            throw ParseError(lineno, "range must be a positive number");
        }
        e.range_m = *range;
        if (*frame == Frame::Outdoor) {
            e.location = GeoPoint{*c1, *c2};
        } else {
            e.location = PlanarPoint{*c1, *c2};
        }
        if (!is_valid(e.location)) throw ParseError(lineno, "coordinates out of range");
        if (!rows.empty() && frame_of(rows.front().second.location) != *frame) {
            throw FrameMismatch("line " + std::to_string(lineno) + ": log mixes frames");
        }
        rows.emplace_back(lineno, std::move(e));
    }
    Frame frame = declared.value_or(fallback);
    if (!rows.empty()) {
        const Frame data_frame = frame_of(rows.front().second.location);
        if (declared && *declared != data_frame) {
            throw FrameMismatch("entries do not match the declared frame");
        }
        frame = data_frame;
    }
    ApLog log(frame);
    for (auto& [ln, e] : rows) log.add(std::move(e));
    return log;
}

ApLog load_log(const std::filesystem::path& path, Frame fallback) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open access-point log '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_log(buf.str(), fallback);
}

void save_log(const ApLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write access-point log '" + path.string() + "'");
    out << format_log(log);
    if (!out) throw Error("failed writing access-point log '" + path.string() + "'");
}

}  // namespace locswitch
