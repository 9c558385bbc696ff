#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dirac11/config.hpp"
#include "dirac11/monitors.hpp"

namespace d11 {

// Built-in scenarios as config text, in listing order.
const std::vector<std::pair<std::string, std::string>>& builtin_presets();
std::optional<std::string> preset_text(const std::string& name);

Grid scenario_grid(const ScenarioConfig& c);
Connection scenario_connection(const ScenarioConfig& c);
Target scenario_target(const ScenarioConfig& c);

// Initial data of the config on grid g; `delta` > 0 adds a seeded perturbation of that size.
Field<Spinor> spinor_initial(const ScenarioConfig& c, const Grid& g, double delta = 0.0);
TwistedSpinorField twisted_initial(const ScenarioConfig& c, const Grid& g);
DWState dwm_initial(const ScenarioConfig& c, const Grid& g, double delta = 0.0);

// Runs the configured model for `steps` steps on grid g (defaults: the config's).
// Throws InstabilityError.
RunHistory simulate(const ScenarioConfig& c);
RunHistory simulate(const ScenarioConfig& c, const Grid& g, int steps);

struct MonitorSummary {
    std::string name;
    MonitorKind kind = MonitorKind::conserved;
    // Relative drift, space-time residual norm, audit margin or fitted rate.
    double statistic = 0.0;
    std::optional<double> fine_statistic;
    std::optional<Order> order;
    std::optional<EnvelopeFit> fit;
    std::optional<AuditResult> audit;
    // "PASS", "FAIL" or "-" when no verdict applies.
    std::string verdict = "-";
};

// Conserved and residual monitors get a verdict only with a refinement pair (order >= 1.5 or exact).
MonitorSummary summarize(const Series& coarse, const RunHistory& h, const Series* fine = nullptr,
                         const RunHistory* hf = nullptr);

struct ScenarioOutput {
    RunHistory history;
    std::vector<Series> series;
    std::vector<MonitorSummary> summary;
    std::string csv;
    std::string report;
};

ScenarioOutput run_scenario(const ScenarioConfig& c);

// Shortest round-trip representation; empty for NaN.
std::string format_number(double v);
std::string format_csv(const RunHistory& h, const std::vector<Series>& series, int every);
std::string format_report(const ScenarioConfig& c, const ScenarioOutput& out);

// Output directory: config dir (or the scenario name) under $DIRAC11_OUTPUT_ROOT when set
// and the directory is relative.
std::filesystem::path output_directory(const ScenarioConfig& c);

// Runs and writes series.csv and report.txt. Returns the process exit code (0, 3).
int execute(const ScenarioConfig& c, std::ostream& log);

} // namespace d11
