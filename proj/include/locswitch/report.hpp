#pragma once

// Output writers: results CSV, gnuplot data files, human summary, event trace.
// All numbers are written with '.' decimals and no grouping, using the
// shortest form that reads back to the same double.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locswitch/sim.hpp"

namespace locswitch {

/// One row of results.csv: a grid cell and either its report or its error.
struct CellResult {
    Frame frame = Frame::Outdoor;
    SwitchScheme scheme = SwitchScheme::GprsNonSwitching;
    UserClass user = UserClass::U1;
    ThresholdId threshold = ThresholdId::B1;
    std::uint64_t seed = 1;
    std::optional<SimReport> report;
    std::string error;
};

/// frame,scheme,user,threshold,seed,wifi_j,cellular_j,location_sensor_j,
/// device_base_j,system_overhead_j,total_j,bytes_tx,bytes_rx,bytes_total,
/// scans,switches,depletion_time_s,efficiency_Bpj,termination,error
std::string csv_header();
std::string csv_row(const CellResult& cell);
std::string format_csv(std::span<const CellResult> cells);

/// Successful cells only, in the shape efficiency_ratio() takes.
std::vector<GridCell> grid_cells(std::span<const CellResult> cells);

/// Threshold rows by scheme columns of mean efficiency (B/J) for one user.
/// Cells that are absent or failed print as NaN.
std::string format_fig8(std::span<const CellResult> cells, UserClass user,
                        std::span<const Threshold> thresholds);

/// One line per user: index, user, Wi-Fi/GPRS efficiency ratio.
std::string format_fig9(const std::map<UserClass, double>& ratios);

struct SummaryOptions {
    bool color = false;
    /// Also show thresholds in kb/s and energy as battery mAh.
    bool paper_units = false;
    double battery_voltage_v = 3.7;
};

std::string format_summary(const CellResult& cell, const Scenario& scenario,
                           const SummaryOptions& options);

/// "t_s<TAB>event" lines.
std::string format_events(std::span<const SchemeEvent> events);

}  // namespace locswitch
