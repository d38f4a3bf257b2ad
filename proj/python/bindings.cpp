#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "locswitch/config.hpp"
#include "locswitch/errors.hpp"
#include "locswitch/report.hpp"

namespace py = pybind11;
using namespace locswitch;

namespace {

RunConfig make_config(const std::string& config_path, const std::map<std::string, std::string>& overrides) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [key, value] : overrides) apply_override(cfg, key + "=" + value);
    return cfg;
}

py::dict report_dict(const SimReport& r) {
    py::dict ledger;
    for (const auto c : kAllComponents) ledger[py::str(std::string(to_string(c)))] = r.ledger[c];
    py::dict d;
    d["ledger"] = ledger;
    d["total_j"] = r.ledger.total();
    d["bytes_tx"] = r.bytes_tx;
    d["bytes_rx"] = r.bytes_rx;
    d["bytes_total"] = r.bytes_total();
    d["scans"] = r.scan_count;
    d["switches"] = r.switch_count;
    d["decisions"] = r.decision_count;
    d["depletion_time_s"] = r.depletion_time_s;
    d["efficiency_Bpj"] = r.efficiency_Bpj;
    d["stop"] = std::string(to_string(r.stop));
    d["battery_remaining_j"] = r.battery_remaining_j;
    d["max_conservation_error"] = r.max_conservation_error;
    py::list events;
    for (const auto& e : r.events) events.append(py::make_tuple(e.t_s, e.what));
    d["events"] = events;
    return d;
}

template <typename T, typename Parse>
T parse_or_throw(const std::string& s, Parse parse, const char* what) {
    const auto v = parse(s);
    if (!v) throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
    return *v;
}

}  // namespace

PYBIND11_MODULE(_locswitch, m) {
    m.doc() = "Location-assisted Wi-Fi switching energy simulator";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<FrameMismatch>(m, "FrameMismatch", base.ptr());
    py::register_exception<NonPositiveSpeed>(m, "NonPositiveSpeed", base.ptr());
    py::register_exception<EmptyLog>(m, "EmptyLog", base.ptr());
    py::register_exception<MissingCell>(m, "MissingCell", base.ptr());

    m.def("haversine_distance",
          [](double lat1, double lon1, double lat2, double lon2, double radius_km) {
              return haversine_distance({lat1, lon1}, {lat2, lon2}, {radius_km});
          },
          py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"), py::arg("radius_km") = 6371.0,
          "Great-circle distance in km between two (lat, lon) points given in radians.");
    m.def("time_to_switch", &time_to_switch, py::arg("distance_m"), py::arg("speed_mps"));
    m.def("battery_capacity_j", [] { return default_profiles().battery_capacity_j(); });
    m.def("scheme_names", [] {
        std::vector<std::string> names;
        for (const auto s : kAllSchemes) names.emplace_back(to_string(s));
        return names;
    });

    m.def("generate_field",
          [](std::uint64_t seed, std::size_t count, double width_m, double height_m, double range_m,
             const std::string& frame) {
              FieldSpec spec = default_field(parse_or_throw<Frame>(frame, parse_frame, "frame"));
              spec.count = count;
              spec.width_m = width_m;
              spec.height_m = height_m;
              spec.range_m = range_m;
              spec.validate();
              return format_log(generate_field(seed, spec));
          },
          py::arg("seed"), py::arg("count") = 40, py::arg("width_m") = 2000.0, py::arg("height_m") = 340.0,
          py::arg("range_m") = 100.0, py::arg("frame") = "indoor",
          "Random AP field, returned in the log file format.");

    m.def("nearest_ap",
          [](const std::string& log_text, double c1, double c2) {
              const auto log = parse_log(log_text);
              const Position q = log.frame() == Frame::Outdoor ? Position{GeoPoint{c1, c2}} : Position{PlanarPoint{c1, c2}};
              const auto n = nearest_ap(log, q);
              return py::make_tuple(n.index, log[n.index].networks.front(), n.distance_m);
          },
          py::arg("log_text"), py::arg("coord1"), py::arg("coord2"),
          "(index, network id, distance_m) of the logged AP nearest to the query point.");

    m.def("generate_trace",
          [](const std::string& user, double duration_s, double interval_s, std::uint64_t seed) {
              const auto u = parse_or_throw<UserClass>(user, parse_user, "user");
              return generate_trace(default_user(u), duration_s, interval_s, seed).samples_Bps;
          },
          py::arg("user"), py::arg("duration_s"), py::arg("interval_s") = 30.0, py::arg("seed") = 1);

    m.def("run",
          [](const std::string& scheme, const std::string& user, const std::string& threshold,
             std::uint64_t seed, const std::string& frame, const std::string& config,
             const std::map<std::string, std::string>& overrides, bool events) {
              RunConfig cfg = make_config(config, overrides);
              apply_setting(cfg, "scenario", "scheme", scheme, "scheme");
              apply_setting(cfg, "scenario", "user", user, "user");
              apply_setting(cfg, "scenario", "threshold", threshold, "threshold");
              cfg.seed = seed;
              Scenario sc = base_scenario(cfg, parse_or_throw<Frame>(frame, parse_frame, "frame"));
              sc.record_events = events;
              SimReport r;
              {
                  py::gil_scoped_release release;
                  r = locswitch::run(sc);
              }
              return report_dict(r);
          },
          py::arg("scheme") = "gprs-non-switching", py::arg("user") = "U1", py::arg("threshold") = "B1",
          py::arg("seed") = 1, py::arg("frame") = "outdoor", py::arg("config") = "",
          py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("events") = false,
          "Simulate one scenario. `overrides` maps 'section.key' to a value string.");

    m.def("sweep",
          [](const std::string& frame_name, std::vector<std::string> schemes, std::vector<std::string> users,
             std::vector<std::string> thresholds, std::vector<std::uint64_t> seeds, unsigned parallel,
             const std::string& config, const std::map<std::string, std::string>& overrides) {
              RunConfig cfg = make_config(config, overrides);
              const Frame frame = parse_or_throw<Frame>(frame_name, parse_frame, "frame");
              const Scenario base = base_scenario(cfg, frame);
              std::vector<SwitchScheme> scheme_ids;
              if (schemes.empty()) {
                  scheme_ids = default_grid_schemes(frame);
              } else {
                  for (const auto& s : schemes) scheme_ids.push_back(parse_or_throw<SwitchScheme>(s, parse_scheme, "scheme"));
              }
              std::vector<CellResult> cells;
              std::vector<Scenario> scenarios;
              for (const auto s : scheme_ids) {
                  for (const auto& un : users) {
                      const auto u = parse_or_throw<UserClass>(un, parse_user, "user");
                      for (const auto& bn : thresholds) {
                          const auto b = parse_or_throw<ThresholdId>(bn, parse_threshold, "threshold");
                          for (const auto seed : seeds) {
                              cells.push_back({frame, s, u, b, seed, std::nullopt, {}});
                              scenarios.push_back(grid_scenario(base, cfg, s, u, b, seed));
                          }
                      }
                  }
              }
              std::vector<SweepResult> results;
              {
                  py::gil_scoped_release release;
                  results = locswitch::sweep(scenarios, parallel);
              }
              py::list rows;
              for (std::size_t i = 0; i < cells.size(); ++i) {
                  py::dict row = results[i].report ? report_dict(*results[i].report) : py::dict();
                  row["frame"] = std::string(to_string(frame));
                  row["scheme"] = std::string(to_string(cells[i].scheme));
                  row["user"] = std::string(to_string(cells[i].user));
                  row["threshold"] = std::string(to_string(cells[i].threshold));
                  row["seed"] = cells[i].seed;
                  row["error"] = results[i].error;
                  rows.append(row);
              }
              return rows;
          },
          py::arg("frame") = "outdoor", py::arg("schemes") = std::vector<std::string>{},
          py::arg("users") = std::vector<std::string>{"U1", "U2", "U3", "U4"},
          py::arg("thresholds") = std::vector<std::string>{"B1", "B2", "B3", "B4"},
          py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8}, py::arg("parallel") = 1,
          py::arg("config") = "", py::arg("overrides") = std::map<std::string, std::string>{},
          "Simulate a grid; one dict per cell in scheme, user, threshold, seed order.");

    m.def("efficiency_ratio",
          [](const py::list& rows) {
              std::vector<GridCell> cells;
              for (const auto& item : rows) {
                  const auto row = item.cast<py::dict>();
                  if (!row.contains("efficiency_Bpj")) continue;
                  GridCell c;
                  c.scheme = parse_or_throw<SwitchScheme>(row["scheme"].cast<std::string>(), parse_scheme, "scheme");
                  c.user = parse_or_throw<UserClass>(row["user"].cast<std::string>(), parse_user, "user");
                  c.report.efficiency_Bpj = row["efficiency_Bpj"].cast<double>();
                  cells.push_back(c);
              }
              std::map<std::string, double> out;
              for (const auto& [u, r] : efficiency_ratio(cells)) out[std::string(to_string(u))] = r;
              return out;
          },
          py::arg("rows"), "Per-user Wi-Fi over GPRS efficiency ratio from sweep() rows.");
}
