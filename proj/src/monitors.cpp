#include "dirac11/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>

#include "dirac11/linear_dirac.hpp"
#include "dirac11/thirring.hpp"

namespace d11 {

std::string to_string(MonitorKind k)
{
    switch (k) {
    case MonitorKind::conserved:
        return "conserved";
    case MonitorKind::identity_residual:
        return "identity-residual";
    case MonitorKind::inequality_audit:
        return "inequality-audit";
    case MonitorKind::envelope_fit:
        return "envelope-fit";
    }
    return "?";
}

bool MonitorInfo::applies_to(const std::string& model) const
{
    return std::find(models.begin(), models.end(), model) != models.end();
}

const std::vector<MonitorInfo>& monitor_registry()
{
    using K = MonitorKind;
    const std::string dw = "dirac_wave_map";
    static const std::vector<MonitorInfo> reg = {
        {"E1", K::conserved, "E1 = 1/2 int |psi|^2_beta dx", {"free", "massive", "thirring", dw}},
        {"E2", K::conserved, "E2 = 1/2 int (d_t |psi|^2_beta)^2 + (d_x |psi|^2_beta)^2 dx", {"free"}},
        {"E3", K::conserved, "E3 = 1/2 int |d_t psi|^2_beta + |d_x psi|^2_beta dx", {"free"}},
        {"E4", K::conserved, "E4 = int |psi|^4_beta + <d_x.psi, psi>^2 dx", {"free"}},
        {"E5", K::conserved, "E5 = 1/2 int (d_t e)^2 + (d_x e)^2 dx, e = (|d_t psi|^2 + |d_x psi|^2)/2", {"free"}},
        {"E6hat", K::conserved, "1/2 int |d_t psi|^2 + |d_x psi|^2 + lambda^2 |psi|^2 dx", {"free", "massive"}},
        {"tE1", K::conserved, "1/2 int sum_a |psi^a|^2_beta dx", {"twisted"}},
        {"tE2", K::conserved, "1/2 int (d_t rho)^2 + (d_x rho)^2 dx, rho = sum_a |psi^a|^2_beta", {"twisted"}},
        {"tE3_audit",
         K::inequality_audit,
         "d/dt tE3 <= tE3 + max rho / 2 int |R|^2 dx",
         {"twisted"}},
        {"tE4", K::conserved, "int rho^2 + (sum_a <d_x.psi^a, psi^a>)^2 dx", {"twisted"}},
        {"thirring_E1", K::conserved, "1/2 int |u|^2 + |v|^2 dx", {"thirring"}},
        {"thirring_box", K::identity_residual, "box rho + 2 lambda d_x w, w = 2 Im(conj(u) v)", {"free", "thirring"}},
        {"thirring_L6",
         K::identity_residual,
         "d/dt int rho^3/3 + m^2 rho dx + 4 lambda int rho m w dx",
         {"thirring"}},
        {"thirring_H1_envelope", K::envelope_fit, "int |d_t psi|^2 + |d_x psi|^2 dx <= exp(c0 + C t)", {"thirring"}},
        {"E_DW", K::conserved, "int e(phi) + sigma/2 Im sum_a conj(d_t psi^a) . psi^a dx", {dw}},
        {"box_e_phi", K::identity_residual, "box (e(phi) - (J_v - J_u)/2), J = Im sum conj(psi) d_x psi", {dw}},
        {"T_divergence", K::identity_residual, "d_t T_tj - d_x T_xj for j = t, x", {dw}},
        {"E_psi_1_2_audit",
         K::inequality_audit,
         "d/dt E_psi12 <= C (E_psi12 + sqrt(E_psi12))",
         {dw}},
        {"E_psi_1_4", K::conserved, "int P_t^2 + P_x^2 + 2 P_t P_x + 4 |sum (nabla_t psi)^* nabla_x psi|^2 dx", {dw}},
        {"E_phi_2_2_audit",
         K::inequality_audit,
         "d/dt E_phi22 <= C (E_phi22 int e(phi) + E_phi22 + int rho + |nabla psi|^4)",
         {dw}},
        {"gronwall_envelope", K::envelope_fit, "int |eta|^2_beta (+ |w|^2 + |dw|^2) dx <= exp(c0 + C t)",
         {"thirring", dw}},
    };
    return reg;
}

const MonitorInfo* find_monitor(const std::string& name)
{
    for (const auto& m : monitor_registry())
        if (m.name == name)
            return &m;
    return nullptr;
}

std::vector<std::string> monitors_for(const std::string& model)
{
    std::vector<std::string> out;
    for (const auto& m : monitor_registry())
        if (m.applies_to(model) && m.name != "gronwall_envelope")
            out.push_back(m.name);
    return out;
}

int RunHistory::size() const
{
    if (model == "twisted")
        return twisted.size();
    if (model == "dirac_wave_map")
        return dwm.size();
    return spinor.size();
}

double RunHistory::dt() const
{
    if (model == "twisted")
        return twisted.dt;
    if (model == "dirac_wave_map")
        return dwm.dt;
    return spinor.dt;
}

double RunHistory::time(int n) const
{
    if (model == "twisted")
        return twisted.time(n);
    if (model == "dirac_wave_map")
        return dwm.time(n);
    return spinor.time(n);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fills values[n] = f(n) for n in [lo, size - hi).
void fill(Series& s, int size, int lo, int hi, const std::function<double(int)>& f)
{
    if (size - hi <= lo)
        throw std::out_of_range("history too short for monitor " + s.name);
    for (int n = lo; n < size - hi; ++n)
        s.values[n] = f(n);
}

void fill_bound(Series& s, int size, int lo, int hi, const std::function<double(int)>& f)
{
    for (int n = lo; n < size - hi; ++n)
        s.bound[n] = f(n);
}

double rate(const std::function<double(int)>& E, int n, double dt)
{
    return (E(n + 1) - E(n - 1)) / (2.0 * dt);
}

double twisted_E4_of(const RunHistory& h, int n) { return twisted_E4(h.twisted.levels.at(n)); }

} // namespace

Series evaluate(const std::string& name, const RunHistory& h)
{
    const MonitorInfo* info = find_monitor(name);
    if (!info)
        throw std::invalid_argument("unknown monitor " + name);
    if (!info->applies_to(h.model))
        throw std::invalid_argument("monitor " + name + " does not apply to model " + h.model);
    Series s;
    s.name = name;
    s.kind = info->kind;
    const int N = h.size();
    s.values.assign(N, kNaN);
    if (info->kind == MonitorKind::inequality_audit)
        s.bound.assign(N, kNaN);
    const auto& tr = h.spinor;
    const double dt = h.dt();

    if (name == "E1") {
        if (h.model == "dirac_wave_map")
            fill(s, N, 0, 0, [&](int n) { return dw_E1(h.dwm.levels[n]); });
        else
            fill(s, N, 0, 0, [&](int n) { return energy_E1(tr.levels[n]); });
    } else if (name == "E2") {
        fill(s, N, 1, 1, [&](int n) { return energy_E2(tr, n); });
    } else if (name == "E3") {
        fill(s, N, 1, 1, [&](int n) { return energy_E3(tr, n); });
    } else if (name == "E4") {
        fill(s, N, 0, 0, [&](int n) { return energy_E4(tr.levels[n]); });
    } else if (name == "E5") {
        fill(s, N, 2, 2, [&](int n) { return energy_E5(tr, n); });
    } else if (name == "E6hat") {
        fill(s, N, 1, 1, [&](int n) { return energy_E6(tr, n, h.lambda, 1.0); });
    } else if (name == "tE1") {
        fill(s, N, 0, 0, [&](int n) { return twisted_E1(h.twisted.levels[n]); });
    } else if (name == "tE2") {
        fill(s, N, 1, 1, [&](int n) { return twisted_E2(h.twisted, n); });
    } else if (name == "tE3_audit") {
        auto E3 = [&](int m) { return twisted_E3(h.twisted, h.connection, m); };
        fill(s, N, 2, 2, [&](int n) { return rate(E3, n, dt); });
        fill_bound(s, N, 2, 2, [&](int n) { return tilde_e3_bound(h.twisted, h.connection, n); });
    } else if (name == "tE4") {
        fill(s, N, 0, 0, [&](int n) { return twisted_E4_of(h, n); });
    } else if (name == "thirring_E1") {
        fill(s, N, 0, 0, [&](int n) { return thirring_E1(tr.levels[n]); });
    } else if (name == "thirring_box") {
        fill(s, N, 1, 1, [&](int n) { return l2_norm(thirring_box_residual(tr, n, h.lambda)); });
    } else if (name == "thirring_L6") {
        fill(s, N, 1, 1, [&](int n) { return std::abs(thirring_L6_residual(tr, n, h.lambda)); });
    } else if (name == "thirring_H1_envelope") {
        fill(s, N, 1, 1, [&](int n) { return thirring_H1(tr, n); });
    } else if (name == "E_DW") {
        fill(s, N, 1, 1, [&](int n) { return dw_energy(h.dwm, n, h.sigma); });
    } else if (name == "box_e_phi") {
        fill(s, N, 1, 2, [&](int n) { return l2_norm(dw_box_residual(h.dwm, n)); });
    } else if (name == "T_divergence") {
        fill(s, N, 1, 2, [&](int n) {
            auto d = dw_stress_divergence(h.dwm, n);
            return std::hypot(l2_norm(d.first), l2_norm(d.second));
        });
    } else if (name == "E_psi_1_2_audit") {
        auto E = [&](int m) { return dw_E_psi_12(h.dwm, m); };
        fill(s, N, 2, 2, [&](int n) { return rate(E, n, dt); });
        fill_bound(s, N, 2, 2, [&](int n) { return h.audit_constant * dw_bound_psi_12(h.dwm, n); });
    } else if (name == "E_psi_1_4") {
        fill(s, N, 1, 1, [&](int n) { return dw_E_psi_14(h.dwm, n); });
    } else if (name == "E_phi_2_2_audit") {
        auto E = [&](int m) { return dw_E_phi_22(h.dwm, m); };
        fill(s, N, 2, 2, [&](int n) { return rate(E, n, dt); });
        fill_bound(s, N, 2, 2, [&](int n) { return h.audit_constant * dw_bound_phi_22(h.dwm, n); });
    } else if (name == "gronwall_envelope") {
        if (h.model == "dirac_wave_map") {
            if (!h.dwm_partner)
                throw std::invalid_argument("gronwall_envelope needs a perturbed partner run");
            fill(s, N, 0, 1, [&](int n) { return dw_difference_norm(h.dwm, *h.dwm_partner, n); });
        } else {
            if (!h.spinor_partner)
                throw std::invalid_argument("gronwall_envelope needs a perturbed partner run");
            fill(s, N, 0, 0, [&](int n) {
                Field<Spinor> d = axpy(tr.levels[n], -1.0, h.spinor_partner->levels.at(n));
                return 2.0 * energy_E1(d);
            });
        }
    }
    return s;
}

std::vector<Series> evaluate_all(const std::vector<std::string>& names, const RunHistory& h)
{
    std::vector<std::future<Series>> jobs;
    for (const auto& n : names)
        jobs.push_back(std::async(std::launch::async, [&h, n] { return evaluate(n, h); }));
    std::vector<Series> out;
    for (auto& j : jobs)
        out.push_back(j.get());
    return out;
}

double relative_drift(const Series& s)
{
    double e0 = kNaN, m = 0.0;
    for (double v : s.values) {
        if (std::isnan(v))
            continue;
        if (std::isnan(e0))
            e0 = v;
        m = std::max(m, std::abs(v - e0));
    }
    if (std::isnan(e0))
        return kNaN;
    return m / std::max(std::abs(e0), 1e-300);
}

double residual_norm(const Series& s, double dt)
{
    double acc = 0.0;
    for (double v : s.values)
        if (!std::isnan(v))
            acc += v * v;
    return std::sqrt(acc * dt);
}

std::string Order::str() const
{
    if (exact)
        return "exact";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    return buf;
}

Order refinement_order(double coarse, double fine, double floor)
{
    if (coarse <= floor || fine <= floor)
        return {true, 0.0};
    return {false, std::log2(coarse / fine)};
}

EnvelopeFit fit_envelope(const std::vector<double>& t, const std::vector<double>& y)
{
    EnvelopeFit f;
    std::vector<std::pair<double, double>> all;
    bool finite = true;
    for (std::size_t i = 0; i < t.size() && i < y.size(); ++i) {
        if (std::isnan(y[i]))
            continue;
        if (!std::isfinite(y[i]))
            finite = false;
        else if (y[i] > 0.0)
            all.push_back({t[i], std::log(y[i])});
    }
    const std::size_t start = all.size() / 2;
    f.points = (int)(all.size() - start);
    if (f.points < 2)
        return f;
    double mt = 0.0, my = 0.0;
    for (std::size_t i = start; i < all.size(); ++i) {
        mt += all[i].first;
        my += all[i].second;
    }
    mt /= f.points;
    my /= f.points;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = start; i < all.size(); ++i) {
        stt += (all[i].first - mt) * (all[i].first - mt);
        sty += (all[i].first - mt) * (all[i].second - my);
        syy += (all[i].second - my) * (all[i].second - my);
    }
    f.rate = stt > 0.0 ? sty / stt : 0.0;
    const double c0 = my - f.rate * mt;
    double sse = 0.0, lift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i) {
        double r = all[i].second - (c0 + f.rate * all[i].first);
        lift = std::max(lift, r);
        if (i >= start) {
            sse += r * r;
            f.window_lift = std::max(f.window_lift, r);
        }
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.intercept = c0 + std::max(lift, 0.0);
    f.valid = finite;
    return f;
}

AuditResult audit(const Series& s, double slack)
{
    AuditResult r;
    r.pass = true;
    r.margin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < s.values.size() && n < s.bound.size(); ++n) {
        double v = s.values[n], b = s.bound[n];
        if (std::isnan(v) || std::isnan(b))
            continue;
        if (b - v < r.margin) {
            r.margin = b - v;
            r.worst_step = (int)n;
        }
        if (!(v <= b + slack * std::abs(b)))
            r.pass = false;
    }
    if (r.worst_step < 0)
        r.pass = false;
    return r;
}

} // namespace d11
