#include "locswitch/report.hpp"

#include <sstream>

#include "locswitch/text.hpp"

namespace locswitch {

namespace {

using text::format_double;

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string u64(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::string csv_header() {
    return "frame,scheme,user,threshold,seed,wifi_j,cellular_j,location_sensor_j,device_base_j,"
           "system_overhead_j,total_j,bytes_tx,bytes_rx,bytes_total,scans,switches,"
           "depletion_time_s,efficiency_Bpj,termination,error";
}

std::string csv_row(const CellResult& cell) {
    std::string row;
    const auto put = [&row](const std::string& field) {
        if (!row.empty()) row += ',';
        row += field;
    };
    put(std::string(to_string(cell.frame)));
    put(std::string(to_string(cell.scheme)));
    put(std::string(to_string(cell.user)));
    put(std::string(to_string(cell.threshold)));
    put(u64(cell.seed));
    if (cell.report) {
        const auto& r = *cell.report;
        for (const auto c : kAllComponents) put(format_double(r.ledger[c]));
        put(format_double(r.ledger.total()));
        put(format_double(r.bytes_tx));
        put(format_double(r.bytes_rx));
        put(format_double(r.bytes_total()));
        put(u64(r.scan_count));
        put(u64(r.switch_count));
        put(format_double(r.depletion_time_s));
        put(format_double(r.efficiency_Bpj));
        put(std::string(to_string(r.stop)));
        row += ',';
    } else {
        row += std::string(14, ',');
        put(csv_escape(cell.error));
    }
    return row;
}

std::string format_csv(std::span<const CellResult> cells) {
    std::string out = csv_header() + '\n';
    for (const auto& c : cells) out += csv_row(c) + '\n';
    return out;
}

std::vector<GridCell> grid_cells(std::span<const CellResult> cells) {
    std::vector<GridCell> out;
    for (const auto& c : cells) {
        if (c.report) out.push_back({c.frame, c.scheme, c.user, c.threshold, c.seed, *c.report});
    }
    return out;
}

std::string format_fig8(std::span<const CellResult> cells, UserClass user,
                        std::span<const Threshold> thresholds) {
    std::vector<SwitchScheme> schemes;
    for (const auto s : kAllSchemes) {
        for (const auto& c : cells) {
            if (c.scheme == s && c.user == user) {
                schemes.push_back(s);
                break;
            }
        }
    }
    std::string out = "# user " + std::string(to_string(user)) +
                      ": mean energy efficiency (bytes/J) by threshold and scheme\n# threshold kbps";
    for (const auto s : schemes) out += ' ' + std::string(to_string(s));
    out += '\n';
    for (const auto& b : thresholds) {
        out += std::string(to_string(b.id)) + ' ' + format_double(b.kbps);
        for (const auto s : schemes) {
            double sum = 0.0;
            int n = 0;
            for (const auto& c : cells) {
                if (c.scheme == s && c.user == user && c.threshold == b.id && c.report) {
                    sum += c.report->efficiency_Bpj;
                    ++n;
                }
            }
            out += ' ' + (n > 0 ? format_double(sum / n) : std::string("NaN"));
        }
        out += '\n';
    }
    return out;
}

std::string format_fig9(const std::map<UserClass, double>& ratios) {
    std::string out = "# index user wifi_over_gprs_efficiency\n";
    for (const auto& [user, ratio] : ratios) {
        out += std::to_string(static_cast<int>(user) + 1) + ' ' + std::string(to_string(user)) + ' ' +
               format_double(ratio) + '\n';
    }
    return out;
}

std::string format_summary(const CellResult& cell, const Scenario& scenario,
                           const SummaryOptions& options) {
    const std::string bold = options.color ? "\x1b[1m" : "";
    const std::string red = options.color ? "\x1b[31m" : "";
    const std::string reset = options.color ? "\x1b[0m" : "";
    std::ostringstream out;
    out << bold << to_string(cell.scheme) << reset << "  frame " << to_string(cell.frame) << "  user "
        << to_string(cell.user) << "  threshold " << to_string(cell.threshold);
    if (options.paper_units) out << " (" << format_double(scenario.threshold.kbps) << " kb/s)";
    out << "  seed " << cell.seed << '\n';
    if (!cell.report) {
        out << red << "error: " << cell.error << reset << '\n';
        return out.str();
    }
    const auto& r = *cell.report;
    const auto mah = [&](double j) { return j / (options.battery_voltage_v * 3.6); };
    out << "energy by component (J)";
    if (options.paper_units) out << "  [mAh at " << format_double(options.battery_voltage_v) << " V]";
    out << '\n';
    for (const auto c : kAllComponents) {
        out << "  " << to_string(c) << std::string(18 - to_string(c).size(), ' ')
            << text::format_fixed(r.ledger[c], 3);
        if (options.paper_units) out << "  [" << text::format_fixed(mah(r.ledger[c]), 3) << "]";
        out << '\n';
    }
    out << "  total             " << text::format_fixed(r.ledger.total(), 3);
    if (options.paper_units) out << "  [" << text::format_fixed(mah(r.ledger.total()), 3) << "]";
    out << '\n';
    out << "bytes               " << text::format_fixed(r.bytes_total(), 0) << " (tx "
        << text::format_fixed(r.bytes_tx, 0) << ", rx " << text::format_fixed(r.bytes_rx, 0) << ")\n";
    out << "scans               " << r.scan_count << '\n';
    out << "switches            " << r.switch_count << '\n';
    out << "run time (s)        " << text::format_fixed(r.depletion_time_s, 3) << " ("
        << to_string(r.stop) << ")\n";
    out << bold << "efficiency (B/J)    " << text::format_fixed(r.efficiency_Bpj, 3) << reset << '\n';
    return out.str();
}

std::string format_events(std::span<const SchemeEvent> events) {
    std::string out = "# t_s\tevent\n";
    for (const auto& e : events) out += format_double(e.t_s) + '\t' + e.what + '\n';
    return out;
}

}  // namespace locswitch
