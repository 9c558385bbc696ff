#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac11/dirac_wave_map.hpp"
#include "dirac11/twisted_dirac.hpp"

namespace d11 {

enum class MonitorKind { conserved, identity_residual, inequality_audit, envelope_fit };

std::string to_string(MonitorKind k);

struct MonitorInfo {
    std::string name;
    MonitorKind kind;
    std::string anchor;
    std::vector<std::string> models;

    bool applies_to(const std::string& model) const;
};

// The 21 registered monitors, in canonical order.
const std::vector<MonitorInfo>& monitor_registry();
// nullptr for unknown names.
const MonitorInfo* find_monitor(const std::string& name);
std::vector<std::string> monitors_for(const std::string& model);

// Everything a monitor may read. Only the members matching `model` are populated.
struct RunHistory {
    std::string model;
    double lambda = 0.0;
    double kappa = 0.0;
    Trajectory<Spinor> spinor;
    std::optional<Trajectory<Spinor>> spinor_partner;
    TwistedRun twisted;
    Connection connection;
    DWRun dwm;
    std::optional<DWRun> dwm_partner;
    double sigma = 1.0;
    double audit_constant = 1.0;

    int size() const;
    double dt() const;
    double time(int n) const;
};

// One value per time level; NaN where the monitor's stencil does not fit. Audits also carry the
// right-hand bound in `bound`.
struct Series {
    std::string name;
    MonitorKind kind = MonitorKind::conserved;
    std::vector<double> values;
    std::vector<double> bound;
};

// Throws std::invalid_argument for unknown or inapplicable monitors and std::out_of_range when the
// history is too short for the stencil.
Series evaluate(const std::string& name, const RunHistory& h);
// Independent monitors evaluated concurrently; output order follows `names`.
std::vector<Series> evaluate_all(const std::vector<std::string>& names, const RunHistory& h);

// max_n |E(n) - E(n0)| / max(|E(n0)|, 1e-300) over defined values, n0 the first defined level.
double relative_drift(const Series& s);
// sqrt(sum_n v_n^2 dt) over defined values.
double residual_norm(const Series& s, double dt);

// Relative drift at or below this size counts as exact.
constexpr double kExactFloor = 1e-12;
// Same for space-time residual norms of O(1) data, which sit at roundoff / dx^2.
constexpr double kResidualFloor = 1e-9;

struct Order {
    bool exact = false;
    double value = 0.0;
    std::string str() const;
};
// log2(coarse / fine); exact when either statistic is at or below `floor`.
Order refinement_order(double coarse, double fine, double floor = kExactFloor);

struct EnvelopeFit {
    double rate = 0.0;      // fitted C in exp(c0 + C t)
    double intercept = 0.0; // c0 raised until every sample lies under the envelope
    double window_lift = 0.0; // part of the raise needed inside the fitted window
    double r2 = 0.0;        // of the fit over the window
    int points = 0;
    bool valid = false;     // all samples finite, at least two positive ones in the window
};
// Least squares of log y on t over the second half of the positive samples; non-positive samples
// lie under any envelope and are skipped.
EnvelopeFit fit_envelope(const std::vector<double>& t, const std::vector<double>& y);

struct AuditResult {
    bool pass = false;
    double margin = 0.0; // min over steps of bound - value
    int worst_step = -1;
};
// value <= bound + slack |bound| at every defined step.
AuditResult audit(const Series& s, double slack = 1e-8);

} // namespace d11
