// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "dirac11/clifford.hpp"
#include "dirac11/config.hpp"
#include "dirac11/dirac_wave_map.hpp"
#include "dirac11/linear_dirac.hpp"
#include "dirac11/monitors.hpp"
#include "dirac11/scenario.hpp"
#include "dirac11/synth.hpp"
#include "dirac11/thirring.hpp"
#include "dirac11/twisted_dirac.hpp"

using namespace d11;
namespace fs = std::filesystem;

namespace {

const double kTwoPi = 6.283185307179586;

struct Verdict {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what)
    {
        if (!ok)
            pass = false;
        if (!detail.empty())
            detail += "; ";
        detail += what + (ok ? "" : " [x]");
    }
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

bool order_in(const Order& o, double lo, double hi)
{
    return o.exact || (o.value >= lo && o.value <= hi);
}

// "Second order" for drifts: at least 1.5, since a faster decay also meets the contract.
bool order_at_least(const Order& o, double lo = 1.5)
{
    return o.exact || o.value >= lo;
}

Series series_of(const std::string& name, const std::function<double(int)>& f, int size, int lo = 0, int hi = 0)
{
    Series s;
    s.name = name;
    s.values.assign(size, std::nan(""));
    for (int n = lo; n < size - hi; ++n)
        s.values[n] = f(n);
    return s;
}

// Free solution u = f(x - t), v = g(x + t) sampled at times t0 + k dt.
struct FreeExact {
    SpinorSynth f, g;
    Field<Spinor> at(const Grid& grid, double t) const
    {
        return sample<Spinor>(grid, [&](double x) { return Spinor{f(x - t).u, g(x + t).v}; });
    }
};

FreeExact free_exact(std::uint64_t seed, double L, int modes)
{
    Rng rng(seed);
    return {random_spinor_synth(rng, L, modes, 1.0), random_spinor_synth(rng, L, modes, 1.0)};
}

// ------------------------------------------------------------------ 1
Verdict criterion1()
{
    Verdict v;
    auto bad = validate_rep(default_rep(), 1e-12);
    v.check(bad.empty(), "rep invariants " + std::string(bad.empty() ? "hold" : bad.front()));
    Rng rng(2024);
    auto rs = [&] { return Spinor{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, {rng.uniform(-1, 1), rng.uniform(-1, 1)}}; };
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        TangentVector X{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Spinor xi = rs(), psi = rs();
        cplx a = indef_product(clifford_mul(X, xi, default_rep()), psi, default_rep());
        cplx b = indef_product(xi, clifford_mul(X, psi, default_rep()), default_rep());
        worst = std::max(worst, std::abs(a - b));
    }
    v.check(worst <= 1e-12, "symmetry defect over 1e4 triples " + fmt(worst));
    return v;
}

// ------------------------------------------------------------------ 2
double free_box_oracle(int N)
{
    const Grid g = Grid::make(kTwoPi, N);
    FreeExact ex = free_exact(77, g.L, 4);
    const double dt = 0.5 * g.dx;
    History<double> h{density(ex.at(g, 1.0 - dt)), density(ex.at(g, 1.0)), density(ex.at(g, 1.0 + dt)), dt};
    return max_abs(box_residual(h));
}

Verdict criterion2()
{
    Verdict v;
    const Grid g = Grid::make(kTwoPi, 256);
    Trajectory<Spinor> tr;
    tr.dt = g.dx;
    tr.levels.push_back(random_spinor_field(g, 11, 4, 1.0));
    for (int s = 0; s < 256; ++s)
        tr.levels.push_back(free_transport_step(tr.levels.back()));
    v.check(tr.levels.back() == tr.levels.front(), "one period bit-identical");
    const int n = tr.size();
    double d1 = relative_drift(series_of("E1", [&](int k) { return energy_E1(tr.levels[k]); }, n));
    double d4 = relative_drift(series_of("E4", [&](int k) { return energy_E4(tr.levels[k]); }, n));
    v.check(d1 <= 1e-13, "E1 drift " + fmt(d1));
    v.check(d4 <= 1e-13, "E4 drift " + fmt(d4));
    double scheme = 0.0;
    for (int k = 1; k + 1 < n; ++k)
        scheme = std::max(scheme, max_abs(thirring_box_residual(tr, k, 0.0)));
    double c = free_box_oracle(256), f = free_box_oracle(512);
    v.check(c / f >= 3.5 && c / f <= 4.5, "box |psi|^2 ratio on exact free solution at dt = dx/2: " + fmt(c / f));
    v.check(scheme <= 1e-9, "box |psi|^2 on the CFL=1 run " + fmt(scheme));
    return v;
}

// ------------------------------------------------------------------ 3
double plane_wave_error(int N, double L, double T, double* e1_drift)
{
    const Grid g = Grid::make(L, N);
    PlaneWave pw = plane_wave(g, 2, 1.0, 1);
    const int steps = (int)std::llround(T / g.dx);
    Trajectory<Spinor> tr = run_linear({g, 1.0, pw.at(0.0)}, steps);
    if (e1_drift)
        *e1_drift = relative_drift(series_of("E1", [&](int k) { return energy_E1(tr.levels[k]); }, tr.size()));
    Field<Spinor> d = axpy(tr.levels.back(), -1.0, pw.at(steps * g.dx));
    return l2_norm(d);
}

double e6_drift(int N, double sign)
{
    const Grid g = Grid::make(kTwoPi, N);
    const int steps = (int)std::llround(1.0 / g.dx);
    Trajectory<Spinor> tr = run_linear({g, 1.0, random_spinor_field(g, 21, 3, 0.5)}, steps);
    return relative_drift(series_of("E6", [&](int k) { return energy_E6(tr, k, 1.0, sign); }, tr.size(), 1, 1));
}

Verdict criterion3()
{
    Verdict v;
    const double L = 4.0;
    double drift = 0.0, worst_drift = 0.0;
    std::vector<double> err;
    for (int N : {128, 256, 512}) {
        err.push_back(plane_wave_error(N, L, 1.0, &drift));
        worst_drift = std::max(worst_drift, drift);
    }
    Order o1 = refinement_order(err[0], err[1]), o2 = refinement_order(err[1], err[2]);
    v.check(!o1.exact && order_in(o1, 1.8, 2.2) && order_in(o2, 1.8, 2.2),
            "L2 error orders " + o1.str() + ", " + o2.str());
    v.check(worst_drift <= 1e-10, "E1 drift " + fmt(worst_drift));
    Order o6 = refinement_order(e6_drift(256, 1.0), e6_drift(512, 1.0));
    v.check(order_at_least(o6), "E6hat drift order on random data " + o6.str());
    v.check(true, "opposite-sign variant drift " + fmt(e6_drift(256, -1.0)) + " (E1 is conserved separately)");
    return v;
}

// ------------------------------------------------------------------ 4
struct TwistedOut {
    double e1 = 0, e4 = 0, defect = 0;
    AuditResult audit;
};

TwistedOut twisted_case(int N)
{
    const Grid g = Grid::make(kTwoPi, N);
    Connection c = abelian_curved(0.5, 1, g.L);
    TwistedSpinorField psi0{random_spinor_field(g, 5, 3, 0.5)};
    const int steps = 2 * N / 8;
    TwistedRun run = run_twisted(psi0, c, 0.0, steps);
    TwistedOut o;
    const int n = run.size();
    o.e1 = relative_drift(series_of("tE1", [&](int k) { return twisted_E1(run.levels[k]); }, n));
    o.e4 = relative_drift(series_of("tE4", [&](int k) { return twisted_E4(run.levels[k]); }, n));
    o.defect = max_abs(weitzenboeck_defect(run, c, n / 2));
    RunHistory h;
    h.model = "twisted";
    h.twisted = run;
    h.connection = c;
    o.audit = audit(evaluate("tE3_audit", h));
    return o;
}

Verdict criterion4()
{
    Verdict v;
    TwistedOut a = twisted_case(256), b = twisted_case(512);
    // Ten periods of the norm check.
    const Grid g = Grid::make(kTwoPi, 128);
    Connection c = abelian_curved(0.5, 1, g.L);
    TwistedRun longrun = run_twisted({random_spinor_field(g, 5, 3, 0.5)}, c, 1.0, 10 * 128);
    double e1 =
        relative_drift(series_of("tE1", [&](int k) { return twisted_E1(longrun.levels[k]); }, longrun.size()));
    v.check(std::max({a.e1, b.e1, e1}) <= 1e-10, "tE1 drift " + fmt(std::max({a.e1, b.e1, e1})));
    Order ow = refinement_order(a.defect, b.defect);
    v.check(order_in(ow, 1.5, 2.5), "Weitzenboeck defect order " + ow.str());
    v.check(a.audit.pass && b.audit.pass, "tE3 audit margin " + fmt(std::min(a.audit.margin, b.audit.margin)));
    Order o4 = refinement_order(a.e4, b.e4);
    v.check(order_in(o4, 1.5, 2.5), "tE4 drift order " + o4.str() + " (" + fmt(a.e4) + ")");
    return v;
}

// ------------------------------------------------------------------ 5
// Massless Thirring: |u| moves right, |v| left, phases from the opposite density.
struct ThirringExact {
    SpinorSynth f, g;
    double kappa = 1.0;
    Trig F, G; // primitives of |f|^2 and |g|^2 minus their means

    static Trig square_primitive(const SpinorSynth& s, bool upper, double L, int fine, double* mean)
    {
        // |w|^2 of a trig polynomial, integrated spectrally on a fine grid.
        const int M = fine;
        std::vector<double> vals(M);
        for (int i = 0; i < M; ++i) {
            Spinor w = s(L * i / M);
            vals[i] = std::norm(upper ? w.u : w.v);
        }
        Trig p;
        p.L = L;
        *mean = 0.0;
        for (double x : vals)
            *mean += x / M;
        const int K = M / 2 - 1;
        p.a.assign(K + 1, 0.0);
        p.b.assign(K + 1, 0.0);
        for (int k = 1; k <= K; ++k) {
            double ck = 0.0, sk = 0.0;
            for (int i = 0; i < M; ++i) {
                double th = 2.0 * M_PI * k * i / M;
                ck += 2.0 * vals[i] * std::cos(th) / M;
                sk += 2.0 * vals[i] * std::sin(th) / M;
            }
            const double w = 2.0 * M_PI * k / L;
            p.a[k] = -sk / w;
            p.b[k] = ck / w;
        }
        return p;
    }

    double mf = 0, mg = 0;

    ThirringExact(std::uint64_t seed, double L, double kap) : kappa(kap)
    {
        Rng rng(seed);
        f = random_spinor_synth(rng, L, 2, 0.5);
        g = random_spinor_synth(rng, L, 2, 0.5);
        F = square_primitive(f, true, L, 64, &mf);
        G = square_primitive(g, false, L, 64, &mg);
    }

    Spinor value(double t, double x) const
    {
        const double pu = -kappa * (G(x + t) - G(x - t) + 2.0 * mg * t);
        const double pv = -kappa * (F(x + t) - F(x - t) + 2.0 * mf * t);
        return {f(x - t).u * std::polar(1.0, pu), g(x + t).v * std::polar(1.0, pv)};
    }
    Field<Spinor> at(const Grid& grid, double t) const
    {
        return sample<Spinor>(grid, [&](double x) { return value(t, x); });
    }
};

Verdict criterion5()
{
    Verdict v;
    const double L = kTwoPi;
    ThirringExact ex(31, L, 1.0);
    // Scheme against the exact solution (sanity of the oracle) and box residual on the CFL=1 run.
    double scheme_box = 0.0;
    std::vector<double> sol_err;
    for (int N : {256, 512}) {
        const Grid g = Grid::make(L, N);
        ThirringProblem p{g, 0.0, 1.0, {}, ThirringIntegrator::split, ex.at(g, 0.0)};
        const int steps = (int)std::llround(1.0 / g.dx);
        auto tr = run_thirring(p, steps);
        sol_err.push_back(l2_norm(axpy(tr.levels.back(), -1.0, ex.at(g, steps * g.dx))));
        for (int k = 1; k + 1 < tr.size(); ++k)
            scheme_box = std::max(scheme_box, l2_norm(thirring_box_residual(tr, k, 0.0)));
    }
    std::vector<double> box;
    for (int N : {256, 512}) {
        const Grid g = Grid::make(L, N);
        const double dt = 0.5 * g.dx;
        History<double> h{density(ex.at(g, 1.0 - dt)), density(ex.at(g, 1.0)), density(ex.at(g, 1.0 + dt)), dt};
        box.push_back(max_abs(box_residual(h)));
    }
    v.check(scheme_box <= 1e-9, "box rho on CFL=1 runs " + fmt(scheme_box) + " (exact)");
    v.check(box[0] / box[1] >= 3.5 && box[0] / box[1] <= 4.5,
            "box rho ratio on the exact solution at dt = dx/2: " + fmt(box[0] / box[1]));
    Order os = refinement_order(sol_err[0], sol_err[1]);
    v.check(order_in(os, 1.5, 2.5), "error vs exact order " + os.str());

    // Pointwise bound over t in [0, 10].
    std::vector<double> excess;
    for (int N : {256, 512}) {
        const Grid g = Grid::make(L, N);
        Field<Spinor> psi0 = random_spinor_field(g, 7, 3, 0.5);
        Field<double> rho = density(psi0);
        Field<double> m = map_field(psi0, [](const Spinor& s) { return chirality(s); });
        Field<double> rt = central_diff(m), rx = central_diff(rho);
        double e2 = 0.0;
        for (int i = 0; i < N; ++i)
            e2 += 0.5 * (rt[i] * rt[i] + rx[i] * rx[i]) * g.dx;
        const double bound = 2.0 * energy_E1(psi0) / L + 0.5 * std::sqrt(2.0 * L * e2);
        double tight = 0.0, tight_v = 0.0;
        for (int i = 0; i < N; ++i) {
            tight = std::max(tight, std::norm(psi0[i].u));
            tight_v = std::max(tight_v, std::norm(psi0[i].v));
        }
        ThirringProblem p{g, 0.0, 1.0, {}, ThirringIntegrator::split, psi0};
        Field<Spinor> psi = psi0;
        double sup = 0.0;
        const int steps = (int)std::llround(10.0 / g.dx);
        for (int s = 0; s <= steps; ++s) {
            sup = std::max(sup, max_abs(density(psi)));
            psi = thirring_step(psi, 0.0, 1.0, g.dx);
        }
        excess.push_back(sup / bound - 1.0);
        if (N == 512) {
            v.check(excess.back() <= 0.05, "sup rho / wave-energy bound - 1 = " + fmt(excess.back()));
            v.check(sup <= tight + tight_v + 1e-12, "sup rho " + fmt(sup) + " <= max|u0|^2 + max|v0|^2 " +
                                                       fmt(tight + tight_v));
        }
    }
    if (excess[0] <= 0.0 && excess[1] <= 0.0)
        v.check(true, "excess <= 0 at both resolutions");
    else
        v.check(excess[1] <= excess[0] / 3.5, "excess ratio " + fmt(excess[0] / excess[1]));

    std::vector<double> sc;
    const double Tsc = 64 * L / 256;
    for (int N : {256, 512}) {
        const Grid g = Grid::make(L, N);
        Field<Spinor> psi0 = random_spinor_field(g, 7, 1, 0.5);
        sc.push_back(scaling_check(psi0, 2.0, Tsc, 0.0, 1.0));
    }
    Order o = refinement_order(sc[0], sc[1]);
    v.check(order_in(o, 1.5, 2.5), "scaling check (r=2) order " + o.str() + " (" + fmt(sc[1]) + ")");
    const Grid g = Grid::make(L, 256);
    double ctrl = scaling_check(random_spinor_field(g, 7, 1, 0.5), 2.0, Tsc, 1.0, 1.0);
    v.check(ctrl > 0.05, "lambda=1 control discrepancy " + fmt(ctrl));
    return v;
}

// ------------------------------------------------------------------ 6
Verdict criterion6()
{
    Verdict v;
    std::vector<double> e1s, e1m, l6;
    for (int N : {256, 512}) {
        const Grid g = Grid::make(kTwoPi, N);
        Field<Spinor> psi0 = random_spinor_field(g, 7, 3, 0.5);
        const int steps = (int)std::llround(2.0 / g.dx);
        for (auto integ : {ThirringIntegrator::split, ThirringIntegrator::midpoint}) {
            auto tr = run_thirring({g, 1.0, 1.0, {}, integ, psi0}, steps);
            double d =
                relative_drift(series_of("E1", [&](int k) { return thirring_E1(tr.levels[k]); }, tr.size()));
            (integ == ThirringIntegrator::split ? e1s : e1m).push_back(d);
            if (integ == ThirringIntegrator::split)
                l6.push_back(residual_norm(
                    series_of("L6", [&](int k) { return std::abs(thirring_L6_residual(tr, k, 1.0)); }, tr.size(),
                              1, 1),
                    g.dx));
        }
    }
    Order os = refinement_order(e1s[0], e1s[1]), om = refinement_order(e1m[0], e1m[1]);
    v.check(order_at_least(os), "E1 drift order (split) " + os.str());
    v.check(order_at_least(om), "E1 drift order (midpoint) " + om.str());
    Order ol = refinement_order(l6[0], l6[1], kResidualFloor);
    v.check(order_in(ol, 1.5, 2.5), "L6 residual order " + ol.str());

    // Seed of the Thirring presets; seeds 1..10 are reported as an ensemble.
    const Grid g = Grid::make(kTwoPi, 256);
    const int steps = (int)(10.0 / g.dx);
    auto growth_fit = [&](std::uint64_t seed) {
        Field<Spinor> psi0 = random_spinor_field(g, seed, 3, 0.5);
        Field<Spinor> delta = random_spinor_field(g, seed + 1000, 3, 1e-4);
        std::vector<double> growth = perturbation_growth(psi0, delta, steps * g.dx, 1.0, 1.0);
        std::vector<double> t;
        for (std::size_t k = 0; k < growth.size(); ++k)
            t.push_back(k * g.dx);
        return fit_envelope(t, growth);
    };
    EnvelopeFit fit = growth_fit(7);
    int good = 0;
    double worst = 1.0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        double r2 = growth_fit(s).r2;
        good += r2 >= 0.9;
        worst = std::min(worst, r2);
    }
    v.check(fit.valid && fit.r2 >= 0.9, "perturbation growth fit rate " + fmt(fit.rate) + " R2 " + fmt(fit.r2) +
                                            " (seeds 1-10: " + std::to_string(good) + "/10 >= 0.9, min " +
                                            fmt(worst) + ")");
    Field<Spinor> psi0 = random_spinor_field(g, 7, 3, 0.5);
    std::vector<double> flat =
        perturbation_growth(psi0, random_spinor_field(g, 1007, 3, 1e-4), steps * g.dx, 1.0, 0.0);
    double spread = 0.0;
    for (double x : flat)
        spread = std::max(spread, std::abs(x - flat[0]) / flat[0]);
    v.check(spread <= 1e-10, "kappa=0 relative spread of the difference norm " + fmt(spread));
    return v;
}

// ------------------------------------------------------------------ 7
Verdict criterion7()
{
    Verdict v;
    const Target S2 = Target::sphere(3);
    std::vector<DWResidual> res;
    double contraction = 0.0;
    for (int N : {256, 512}) {
        const Grid g = Grid::make(kTwoPi, N);
        UncoupledSolution sol{g, 1.0, 1.0, Spinor{1.0, cplx(0, 0.5)}, Spinor{}};
        const double dt = 0.5 * g.dx, t = 0.7;
        std::vector<DWLevel> lv{sol.level(t - dt), sol.level(t), sol.level(t + dt)};
        res.push_back(dwm_residuals(lv, 1, dt, S2));
        VecField V = curvature_contraction(sol.phi_t(t), sol.phi_x(t), sol.psi(t));
        for (const auto& c : V)
            contraction = std::max(contraction, max_abs(c));
    }
    Order om = refinement_order(res[0].map, res[1].map), os = refinement_order(res[0].spinor, res[1].spinor);
    v.check(order_in(om, 1.5, 2.5), "map residual order " + om.str());
    v.check(order_in(os, 1.5, 2.5), "spinor residual order " + os.str() + " (" + fmt(res[1].spinor) + ")");
    v.check(contraction <= 1e-12, "curvature contraction " + fmt(contraction));

    auto cfg = parse_config(*preset_text("dwm_uncoupled_exact"), {"grid.N=256", "time.T=2"});
    RunHistory h = simulate(cfg);
    double sph = 0.0, tan = 0.0;
    for (const auto& l : h.dwm.levels) {
        sph = std::max(sph, sphere_defect(l));
        tan = std::max(tan, tangency_defect(l));
    }
    v.check(sph <= 1e-9, "sphere constraint " + fmt(sph));
    v.check(tan <= 1e-10, "tangency " + fmt(tan));
    return v;
}

// ------------------------------------------------------------------ 8
Verdict criterion8()
{
    Verdict v;
    auto base = parse_config(*preset_text("dwm_random_smooth"), {"time.T=2"});
    auto coarse_cfg = base;
    coarse_cfg.N = 256;
    auto fine_cfg = base;
    fine_cfg.N = 512;
    const int steps = coarse_cfg.steps();
    RunHistory hc = simulate(coarse_cfg, scenario_grid(coarse_cfg), steps);
    RunHistory hf = simulate(fine_cfg, scenario_grid(fine_cfg), 2 * steps);
    for (const char* name : {"E1", "E_DW", "box_e_phi", "T_divergence"}) {
        MonitorSummary m = summarize(evaluate(name, hc), hc, nullptr, nullptr);
        Series sf = evaluate(name, hf);
        MonitorSummary m2 = summarize(evaluate(name, hc), hc, &sf, &hf);
        v.check(order_in(*m2.order, 1.5, 2.5), std::string(name) + " order " + m2.order->str());
        (void)m;
    }
    for (const char* name : {"E_psi_1_2_audit", "E_phi_2_2_audit"}) {
        AuditResult a = audit(evaluate(name, hf));
        v.check(a.pass, std::string(name) + " margin " + fmt(a.margin) + " (C=" + fmt(hf.audit_constant) + ")");
    }
    RunHistory again = simulate(fine_cfg, scenario_grid(fine_cfg), 2 * steps);
    bool same = true;
    for (int n = 0; n < hf.size(); ++n)
        for (int a = 0; a < 3; ++a)
            same = same && hf.dwm.levels[n].phi[a] == again.dwm.levels[n].phi[a] &&
                   hf.dwm.levels[n].psi[a] == again.dwm.levels[n].psi[a];
    v.check(same, "repeat run bit-identical");

    auto pcfg = fine_cfg;
    pcfg.perturbation = 1e-6;
    RunHistory hp = simulate(pcfg, scenario_grid(pcfg), 2 * steps);
    Series gs = evaluate("gronwall_envelope", hp);
    std::vector<double> t;
    for (int n = 0; n < hp.size(); ++n)
        t.push_back(hp.time(n));
    EnvelopeFit fit = fit_envelope(t, gs.values);
    v.check(fit.valid, "perturbation envelope rate " + fmt(fit.rate) + " lift " + fmt(fit.intercept) + " R2 " +
                           fmt(fit.r2));
    return v;
}

// ------------------------------------------------------------------ 9
// Runs of sampled levels on the flat torus with q = 1.
DWRun sampled_run(const Grid& g, double dt, int levels, const std::function<Field<Spinor>(double)>& psi)
{
    DWRun run;
    run.target = Target::flat_torus(1);
    run.dt = dt;
    run.phi_before = {Field<double>(g)};
    for (int n = 0; n < levels; ++n)
        run.levels.push_back({{Field<double>(g)}, {psi(n * dt)}});
    return run;
}

Verdict criterion9()
{
    Verdict v;
    std::vector<double> free_drift;
    for (int N : {256, 512}) {
        auto cfg = parse_config(*preset_text("dwm_random_smooth"),
                                {"initial.preset=free_spinor", "params.target=flat_torus", "time.T=2",
                                 "monitors.names=E_psi_1_4"});
        const int steps = cfg.steps() * N / cfg.N;
        cfg.N = N;
        RunHistory h = simulate(cfg, scenario_grid(cfg), steps);
        free_drift.push_back(relative_drift(evaluate("E_psi_1_4", h)));
    }
    Order o = refinement_order(free_drift[0], free_drift[1]);
    v.check(o.exact || o.value >= 1.5, "free-spinor drift order " + o.str() + " (" + fmt(free_drift[1]) + ")");

    // Second-order wave solutions that do not solve the Dirac equation keep a nonzero drift.
    std::vector<double> wave_drift;
    for (int N : {256, 512}) {
        const Grid g = Grid::make(kTwoPi, N);
        FreeExact a = free_exact(91, g.L, 2), b = free_exact(92, g.L, 2);
        const double dt = 0.5 * g.dx;
        const int levels = (int)std::llround(2.0 / dt) + 1;
        DWRun run = sampled_run(g, dt, levels, [&](double t) {
            Field<Spinor> x = a.at(g, t), y = b.at(g, t);
            for (int i = 0; i < N; ++i)
                x[i].u += y[i].v;
            return x;
        });
        wave_drift.push_back(
            relative_drift(series_of("E14", [&](int n) { return dw_E_psi_14(run, n); }, run.size(), 1, 1)));
    }
    const bool limit = wave_drift[1] > 1e-3 && std::abs(wave_drift[0] / wave_drift[1] - 1.0) < 0.05;
    v.check(limit || refinement_order(wave_drift[0], wave_drift[1]).value >= 1.5,
            std::string(limit ? "finding: " : "") + "wave-solution drift " + fmt(wave_drift[0]) + " -> " +
                fmt(wave_drift[1]));
    return v;
}

// ------------------------------------------------------------------ 10
std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& err)
{
    std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2> \"" + err.string() + "\"";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Verdict criterion10(const std::string& cli, const fs::path& golden, const fs::path& work)
{
    Verdict v;
    if (cli.empty() || golden.empty()) {
        v.check(false, "usage: acceptance <dirac11 binary> <golden dir>");
        return v;
    }
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path err = work / "stderr.txt";
    int ok = 0, total = 0;
    std::string failed;
    for (const auto& [name, text] : builtin_presets()) {
        const double L = parse_config(text).L;
        std::string args = "run preset:" + name + " --set grid.N=64 --set time.T=" + format_number(16 * L / 64) +
                           " --set monitors.refinement=false --set output.dir=" + (work / name).string();
        ++total;
        if (run_cli(cli, args, err) == 0 && fs::exists(work / name / "series.csv"))
            ++ok;
        else
            failed += " " + name;
    }
    v.check(ok == total, std::to_string(ok) + "/" + std::to_string(total) + " presets at N=64" + failed);

    for (const char* name : {"free_chiral", "dwm_uncoupled_exact"}) {
        fs::path out = work / ("golden_" + std::string(name));
        int code = run_cli(cli, "run preset:" + std::string(name) + " --set output.dir=" + out.string(), err);
        bool same = code == 0 && slurp(out / "series.csv") == slurp(golden / (std::string(name) + ".csv")) &&
                    !slurp(out / "series.csv").empty();
        v.check(same, std::string("golden ") + name);
    }

    {
        std::ofstream(work / "typo.ini") << "[scenario]\nname = typo\nmodel = massive\n[params]\nlamda = 1\n";
        int code = run_cli(cli, "run " + (work / "typo.ini").string(), err);
        v.check(code == 2 && slurp(err).find("params.lamda") != std::string::npos,
                "unknown key exit " + std::to_string(code));
    }
    {
        std::ofstream(work / "blowup.ini") << "[scenario]\nname = blowup\nmodel = thirring\n[params]\n"
                                              "lambda = 0\nkappa = 1e308\n[initial]\namplitude = 100\n"
                                              "max_mode = 8\n[output]\ndir = "
                                           << (work / "blowup").string() << "\n";
        int code = run_cli(cli, "run " + (work / "blowup.ini").string(), err);
        v.check(code == 3 && slurp(err).find("step") != std::string::npos,
                "instability exit " + std::to_string(code));
    }
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    std::string cli = argc > 1 ? argv[1] : "";
    fs::path golden = argc > 2 ? argv[2] : "";
    fs::path work = fs::temp_directory_path() / "dirac11_acceptance";
    std::vector<std::function<Verdict()>> all = {
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9, [&] { return criterion10(cli, golden, work); },
    };
    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        Verdict v;
        try {
            v = all[i]();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
