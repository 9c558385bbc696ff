#include "dirac11/dirac_wave_map.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "dirac11/errors.hpp"

namespace d11 {

VecQ Target::second_fundamental_form(const VecQ& p, const VecQ& X, const VecQ& Y) const
{
    if (kind == TargetKind::flat_torus)
        return VecQ::Zero(q);
    return -X.dot(Y) * p;
}

VecQ Target::shape_operator(const VecQ& p, const VecQ& xi, const VecQ& X) const
{
    if (kind == TargetKind::flat_torus)
        return VecQ::Zero(q);
    return -p.dot(xi) * X;
}

VecQ Target::curvature(const VecQ& A, const VecQ& B, const VecQ& C) const
{
    if (kind == TargetKind::flat_torus)
        return VecQ::Zero(q);
    return B.dot(C) * A - A.dot(C) * B;
}

VecQ Target::project(const VecQ& p, const VecQ& W) const
{
    if (kind == TargetKind::flat_torus)
        return W;
    return W - p.dot(W) * p;
}

namespace {

using Pt = std::array<double, kMaxAmbient>;
using PtC = std::array<cplx, kMaxAmbient>;

int dim_of(const VecField& f)
{
    const int q = (int)f.size();
    if (q < 1 || q > kMaxAmbient)
        throw std::invalid_argument("ambient dimension must be in [1, 8]");
    return q;
}

const Grid& grid_of(const VecField& f) { return f.at(0).grid; }

VecField zeros(int q, const Grid& g) { return VecField(q, Field<double>(g)); }

VecField diff_x(const VecField& f)
{
    VecField out;
    for (const auto& c : f)
        out.push_back(central_diff(c));
    return out;
}

MultiSpinorField diff_x(const MultiSpinorField& f)
{
    MultiSpinorField out;
    for (const auto& c : f)
        out.push_back(central_diff(c));
    return out;
}

template <class V>
std::vector<Field<V>> centered(const std::vector<Field<V>>& prev, const std::vector<Field<V>>& next, double dt)
{
    std::vector<Field<V>> out;
    for (std::size_t a = 0; a < prev.size(); ++a)
        out.push_back(time_diff(History<V>{prev[a], prev[a], next[a], dt}));
    return out;
}

double dot_at(const VecField& A, const VecField& B, int i)
{
    double s = 0.0;
    for (std::size_t a = 0; a < A.size(); ++a)
        s += A[a][i] * B[a][i];
    return s;
}

// Tangential projection of a vector spinor at every point.
MultiSpinorField project_spinor(const VecField& phi, const MultiSpinorField& f, const Target& target)
{
    if (target.kind == TargetKind::flat_torus)
        return f;
    MultiSpinorField out = f;
    const int q = (int)f.size();
    for (int i = 0; i < f[0].size(); ++i) {
        Spinor c;
        for (int a = 0; a < q; ++a)
            c += phi[a][i] * f[a][i];
        for (int a = 0; a < q; ++a)
            out[a][i] -= phi[a][i] * c;
    }
    return out;
}

double im_pair(const MultiSpinorField& a, const MultiSpinorField& b, int i, bool upper)
{
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c)
        s += upper ? std::imag(std::conj(a[c][i].u) * b[c][i].u) : std::imag(std::conj(a[c][i].v) * b[c][i].v);
    return s;
}

double rho_at(const MultiSpinorField& psi, int i)
{
    double s = 0.0;
    for (const auto& c : psi)
        s += beta_norm_sq(c[i]);
    return s;
}

} // namespace

VecField curvature_force(const VecField& phi_t, const VecField& phi_x, const MultiSpinorField& psi)
{
    const int q = dim_of(phi_t);
    const Grid& g = grid_of(phi_t);
    VecField out = zeros(q, g);
    for (int i = 0; i < g.N; ++i) {
        cplx su = 0.0, sv = 0.0;
        for (int d = 0; d < q; ++d) {
            su += (phi_t[d][i] + phi_x[d][i]) * psi[d][i].u;
            sv += (phi_t[d][i] - phi_x[d][i]) * psi[d][i].v;
        }
        for (int a = 0; a < q; ++a)
            out[a][i] = std::imag(psi[a][i].u * std::conj(su)) + std::imag(psi[a][i].v * std::conj(sv));
    }
    return out;
}

VecField curvature_contraction(const VecField& phi_t, const VecField& phi_x, const MultiSpinorField& psi)
{
    const int q = dim_of(phi_t);
    const Grid& g = grid_of(phi_t);
    const cplx I(0, 1);
    VecField out = zeros(q, g);
    Eigen::MatrixXcd Ht(q, q), Hx(q, q);
    for (int i = 0; i < g.N; ++i) {
        for (int c = 0; c < q; ++c)
            for (int d = 0; d < q; ++d) {
                Ht(c, d) = indef_product(psi[c][i], I * gamma_t_mul(psi[d][i]));
                Hx(c, d) = indef_product(psi[c][i], I * gamma_x_mul(psi[d][i]));
            }
        for (int a = 0; a < q; ++a) {
            cplx vt = 0.0, vx = 0.0;
            for (int d = 0; d < q; ++d) {
                vt += (Ht(a, d) - Ht(d, a)) * phi_t[d][i];
                vx += (Hx(a, d) - Hx(d, a)) * phi_x[d][i];
            }
            out[a][i] = 0.5 * std::real(vt) - 0.5 * std::real(vx);
        }
    }
    return out;
}

VecField dwm_rhs_map(const VecField& phi, const VecField& phi_t, const MultiSpinorField& psi, const Target& target,
                     double* normal_residual)
{
    const int q = dim_of(phi);
    const Grid& g = grid_of(phi);
    if (normal_residual)
        *normal_residual = 0.0;
    if (target.kind == TargetKind::flat_torus)
        return zeros(q, g);
    VecField phi_x = diff_x(phi);
    VecField F = curvature_force(phi_t, phi_x, psi);
    VecField out = zeros(q, g);
    for (int i = 0; i < g.N; ++i) {
        const double tt = dot_at(phi_t, phi_t, i), xx = dot_at(phi_x, phi_x, i);
        const double fn = dot_at(phi, F, i);
        if (normal_residual)
            *normal_residual = std::max(*normal_residual, std::abs(fn));
        for (int a = 0; a < q; ++a)
            out[a][i] = -(tt - xx) * phi[a][i] + F[a][i] - fn * phi[a][i];
    }
    return out;
}

MultiSpinorField dwm_rhs_spinor(const VecField& phi, const VecField& phi_t, const VecField& phi_x,
                                const MultiSpinorField& psi, const Target& target)
{
    const int q = dim_of(phi);
    const Grid& g = grid_of(phi);
    MultiSpinorField out(q, Field<Spinor>(g));
    if (target.kind == TargetKind::flat_torus)
        return out;
    for (int i = 0; i < g.N; ++i) {
        cplx sv = 0.0, su = 0.0;
        for (int d = 0; d < q; ++d) {
            sv += (phi_t[d][i] - phi_x[d][i]) * psi[d][i].v;
            su += (phi_t[d][i] + phi_x[d][i]) * psi[d][i].u;
        }
        for (int a = 0; a < q; ++a)
            out[a][i] = {-phi[a][i] * sv, -phi[a][i] * su};
    }
    return out;
}

namespace {

void normalize_points(VecField& f)
{
    const int q = (int)f.size();
    for (int i = 0; i < f[0].size(); ++i) {
        double n = 0.0;
        for (int a = 0; a < q; ++a)
            n += f[a][i] * f[a][i];
        n = 1.0 / std::sqrt(n);
        for (int a = 0; a < q; ++a)
            f[a][i] *= n;
    }
}

VecField acceleration(const VecField& phi, const VecField& phi_t, const MultiSpinorField& psi, const Target& target)
{
    VecField rhs = dwm_rhs_map(phi, phi_t, psi, target);
    for (std::size_t a = 0; a < phi.size(); ++a) {
        Field<double> lap = second_diff(phi[a]);
        for (int i = 0; i < lap.size(); ++i)
            rhs[a][i] += lap[i];
    }
    return rhs;
}

} // namespace

DWState dwm_init(const VecField& phi0, const VecField& phi1, const MultiSpinorField& psi0, const Target& target)
{
    const Grid& g = grid_of(phi0);
    const double dt = g.dx;
    VecField acc = acceleration(phi0, phi1, psi0, target);
    VecField prev = phi0;
    for (std::size_t a = 0; a < prev.size(); ++a)
        for (int i = 0; i < g.N; ++i)
            prev[a][i] = phi0[a][i] - dt * phi1[a][i] + 0.5 * dt * dt * acc[a][i];
    if (target.kind == TargetKind::sphere)
        normalize_points(prev);
    return dwm_init_exact(phi0, prev, psi0);
}

DWState dwm_init_exact(const VecField& phi0, const VecField& phi_prev, const MultiSpinorField& psi0)
{
    DWState s;
    s.grid = grid_of(phi0);
    s.phi = phi0;
    s.phi_prev = phi_prev;
    s.psi = psi0;
    return s;
}

void transport_rotation(const double* p, const double* q, const cplx* w, cplx* out, int dim)
{
    double c = 0.0;
    cplx sw = 0.0, pw = 0.0;
    for (int a = 0; a < dim; ++a) {
        c += p[a] * q[a];
        sw += (p[a] + q[a]) * w[a];
        pw += p[a] * w[a];
    }
    const cplx k = sw / (1.0 + c);
    for (int a = 0; a < dim; ++a)
        out[a] = w[a] - (p[a] + q[a]) * k + 2.0 * q[a] * pw;
}

DWState dwm_step(const DWState& s, const Target& target)
{
    const int q = dim_of(s.phi);
    const Grid& g = s.grid;
    const int N = g.N;
    const double dt = g.dx;
    const bool sphere = target.kind == TargetKind::sphere;

    VecField pt = zeros(q, g);
    for (int a = 0; a < q; ++a)
        for (int i = 0; i < N; ++i)
            pt[a][i] = (s.phi[a][i] - s.phi_prev[a][i]) / dt;

    VecField next = zeros(q, g);
    for (int it = 0; it < 2; ++it) {
        VecField acc = acceleration(s.phi, pt, s.psi, target);
        for (int a = 0; a < q; ++a)
            for (int i = 0; i < N; ++i)
                next[a][i] = 2.0 * s.phi[a][i] - s.phi_prev[a][i] + dt * dt * acc[a][i];
        if (sphere)
            normalize_points(next);
        for (int a = 0; a < q; ++a)
            for (int i = 0; i < N; ++i)
                pt[a][i] = (next[a][i] - s.phi_prev[a][i]) / (2.0 * dt);
    }

    MultiSpinorField psi(q, Field<Spinor>(g));
    Pt p{}, qq{};
    PtC w{}, o{};
    for (int i = 0; i < N; ++i) {
        const int im = i == 0 ? N - 1 : i - 1;
        const int ip = i + 1 == N ? 0 : i + 1;
        if (!sphere) {
            for (int a = 0; a < q; ++a)
                psi[a][i] = {s.psi[a][im].u, s.psi[a][ip].v};
            continue;
        }
        for (int a = 0; a < q; ++a) {
            qq[a] = next[a][i];
            p[a] = s.phi[a][im];
            w[a] = s.psi[a][im].u;
        }
        transport_rotation(p.data(), qq.data(), w.data(), o.data(), q);
        for (int a = 0; a < q; ++a)
            psi[a][i].u = o[a];
        for (int a = 0; a < q; ++a) {
            p[a] = s.phi[a][ip];
            w[a] = s.psi[a][ip].v;
        }
        transport_rotation(p.data(), qq.data(), w.data(), o.data(), q);
        for (int a = 0; a < q; ++a)
            psi[a][i].v = o[a];
    }

    DWState out;
    out.grid = g;
    out.t = s.t + dt;
    out.step = s.step + 1;
    out.phi_prev = s.phi;
    out.phi = std::move(next);
    double proj = 0.0;
    if (sphere) {
        for (int i = 0; i < N; ++i) {
            Spinor c;
            for (int a = 0; a < q; ++a)
                c += out.phi[a][i] * psi[a][i];
            proj = std::max(proj, magnitude(c));
            for (int a = 0; a < q; ++a)
                psi[a][i] -= out.phi[a][i] * c;
        }
    }
    out.psi = std::move(psi);
    out.last_projection = proj;

    for (int a = 0; a < q; ++a) {
        if (!all_finite(out.phi[a]) || !all_finite(out.psi[a]))
            throw InstabilityError(out.step, "non-finite map or spinor values");
    }
    if (sphere) {
        DWLevel l{out.phi, out.psi};
        double d = sphere_defect(l);
        if (d > 1e-6)
            throw InstabilityError(out.step, "sphere constraint violated by " + std::to_string(d));
    }
    return out;
}

DWRun run_dwm(DWState s, const Target& target, int steps)
{
    DWRun run;
    run.target = target;
    run.dt = s.grid.dx;
    run.t0 = s.t;
    run.phi_before = s.phi_prev;
    run.levels.reserve(steps + 1);
    run.levels.push_back({s.phi, s.psi});
    for (int k = 0; k < steps; ++k) {
        s = dwm_step(s, target);
        run.max_projection = std::max(run.max_projection, s.last_projection);
        run.levels.push_back({s.phi, s.psi});
    }
    return run;
}

Field<Spinor> twistor_field(const Grid& g, double t, const Spinor& psi1, const Spinor& psi2)
{
    return sample<Spinor>(g, [&](double x) { return psi1 + clifford_mul({t, x}, psi2); });
}

TwistorDefect twistor_defect(const Grid& g, double t, double dt, const Spinor& psi1, const Spinor& psi2)
{
    Field<Spinor> a = twistor_field(g, t - dt, psi1, psi2);
    Field<Spinor> b = twistor_field(g, t, psi1, psi2);
    Field<Spinor> c = twistor_field(g, t + dt, psi1, psi2);
    TwistorDefect d;
    for (int i = 1; i + 1 < g.N; ++i) {
        Spinor pt = (c[i] - a[i]) / (2.0 * dt);
        Spinor px = (b[i + 1] - b[i - 1]) / (2.0 * g.dx);
        Spinor D = gamma_t_mul(pt) - gamma_x_mul(px);
        d.p_t = std::max(d.p_t, magnitude(pt - 0.5 * gamma_t_mul(D)));
        d.p_x = std::max(d.p_x, magnitude(px - 0.5 * gamma_x_mul(D)));
        d.dirac = std::max(d.dirac, magnitude(D - 2.0 * psi2));
    }
    return d;
}

VecField UncoupledSolution::phi(double t) const
{
    VecField f = zeros(3, grid);
    for (int i = 0; i < grid.N; ++i) {
        double th = a * t + b * grid.x(i);
        f[0][i] = std::cos(th);
        f[1][i] = std::sin(th);
    }
    return f;
}

VecField UncoupledSolution::phi_t(double t) const
{
    VecField f = zeros(3, grid);
    for (int i = 0; i < grid.N; ++i) {
        double th = a * t + b * grid.x(i);
        f[0][i] = -a * std::sin(th);
        f[1][i] = a * std::cos(th);
    }
    return f;
}

VecField UncoupledSolution::phi_x(double t) const
{
    VecField f = zeros(3, grid);
    for (int i = 0; i < grid.N; ++i) {
        double th = a * t + b * grid.x(i);
        f[0][i] = -b * std::sin(th);
        f[1][i] = b * std::cos(th);
    }
    return f;
}

MultiSpinorField UncoupledSolution::psi(double t) const
{
    VecField ft = phi_t(t), fx = phi_x(t);
    Field<Spinor> chi = twistor_field(grid, t, chi1, chi2);
    MultiSpinorField out(3, Field<Spinor>(grid));
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < grid.N; ++i)
            out[a][i] = ft[a][i] * gamma_t_mul(chi[i]) - fx[a][i] * gamma_x_mul(chi[i]);
    return out;
}

DWLevel UncoupledSolution::level(double t) const
{
    return {phi(t), psi(t)};
}

DWResidual dwm_residuals(const std::vector<DWLevel>& levels, int n, double dt, const Target& target)
{
    const DWLevel& m = levels.at(n - 1);
    const DWLevel& c = levels.at(n);
    const DWLevel& p = levels.at(n + 1);
    VecField pt = centered(m.phi, p.phi, dt);
    VecField px = diff_x(c.phi);
    VecField rhs = dwm_rhs_map(c.phi, pt, c.psi, target);
    DWResidual r;
    for (std::size_t a = 0; a < c.phi.size(); ++a)
        r.map = std::max(r.map, max_abs(box_residual(History<double>{m.phi[a], c.phi[a], p.phi[a], dt}, rhs[a])));
    MultiSpinorField st = centered(m.psi, p.psi, dt);
    MultiSpinorField sx = diff_x(c.psi);
    MultiSpinorField srhs = dwm_rhs_spinor(c.phi, pt, px, c.psi, target);
    for (std::size_t a = 0; a < c.psi.size(); ++a)
        for (int i = 0; i < st[a].size(); ++i)
            r.spinor = std::max(r.spinor, magnitude(gamma_t_mul(st[a][i]) - gamma_x_mul(sx[a][i]) - srhs[a][i]));
    return r;
}

namespace {

const VecField& phi_at(const DWRun& run, int n)
{
    return n < 0 ? run.phi_before : run.levels.at(n).phi;
}

} // namespace

VecField dw_phi_t(const DWRun& run, int n)
{
    return centered(phi_at(run, n - 1), phi_at(run, n + 1), run.dt);
}

MultiSpinorField dw_psi_t(const DWRun& run, int n)
{
    return centered(run.levels.at(n - 1).psi, run.levels.at(n + 1).psi, run.dt);
}

double dw_E1(const DWLevel& l)
{
    double s = 0.0;
    for (const auto& c : l.psi)
        s += integrate(map_field(c, [](const Spinor& v) { return beta_norm_sq(v); }));
    return 0.5 * s;
}

Field<double> dw_phi_energy_density(const DWRun& run, int n)
{
    VecField pt = dw_phi_t(run, n);
    VecField px = diff_x(phi_at(run, n));
    Field<double> e(px[0].grid);
    for (int i = 0; i < e.size(); ++i)
        e[i] = 0.5 * (dot_at(pt, pt, i) + dot_at(px, px, i));
    return e;
}

double dw_energy(const DWRun& run, int n, double sigma)
{
    Field<double> e = dw_phi_energy_density(run, n);
    const MultiSpinorField& psi = run.levels.at(n).psi;
    MultiSpinorField st = dw_psi_t(run, n);
    for (int i = 0; i < e.size(); ++i)
        e[i] += 0.5 * sigma * (im_pair(st, psi, i, true) + im_pair(st, psi, i, false));
    return integrate(e);
}

Field<double> dw_box_density(const DWRun& run, int n)
{
    Field<double> e = dw_phi_energy_density(run, n);
    const MultiSpinorField& psi = run.levels.at(n).psi;
    MultiSpinorField sx = diff_x(psi);
    for (int i = 0; i < e.size(); ++i) {
        double ju = im_pair(psi, sx, i, true), jv = im_pair(psi, sx, i, false);
        e[i] -= 0.5 * (jv - ju);
    }
    return e;
}

Field<double> dw_box_density_literal(const DWRun& run, int n)
{
    Field<double> e = dw_phi_energy_density(run, n);
    const MultiSpinorField& psi = run.levels.at(n).psi;
    MultiSpinorField st = dw_psi_t(run, n);
    for (int i = 0; i < e.size(); ++i)
        e[i] += im_pair(psi, st, i, true) + im_pair(psi, st, i, false);
    return e;
}

Field<double> dw_box_residual(const DWRun& run, int n, bool literal)
{
    auto dens = [&](int m) { return literal ? dw_box_density_literal(run, m) : dw_box_density(run, m); };
    return box_residual(History<double>{dens(n - 1), dens(n), dens(n + 1), run.dt});
}

StressTensor dw_stress(const DWRun& run, int n, bool literal)
{
    VecField pt = dw_phi_t(run, n);
    VecField px = diff_x(phi_at(run, n));
    const MultiSpinorField& psi = run.levels.at(n).psi;
    MultiSpinorField sx = diff_x(psi);
    const Grid& g = px[0].grid;
    StressTensor T{Field<double>(g), Field<double>(g), Field<double>(g)};
    MultiSpinorField st;
    if (literal)
        st = dw_psi_t(run, n);
    for (int i = 0; i < g.N; ++i) {
        const double tt = dot_at(pt, pt, i), xx = dot_at(px, px, i), tx = dot_at(pt, px, i);
        if (!literal) {
            double ju = im_pair(psi, sx, i, true), jv = im_pair(psi, sx, i, false);
            T.tt[i] = tt + xx + (ju - jv);
            T.xx[i] = T.tt[i];
            T.tx[i] = 2.0 * tx - (ju + jv);
        } else {
            double rt = 0.0, rx = 0.0, rtx = 0.0;
            for (std::size_t a = 0; a < psi.size(); ++a) {
                const Spinor& s = psi[a][i];
                rt += std::real(std::conj(st[a][i].u) * s.u + std::conj(st[a][i].v) * s.v);
                rx += std::real(-std::conj(sx[a][i].u) * s.u + std::conj(sx[a][i].v) * s.v);
                rtx += 0.5 * std::real(std::conj(sx[a][i].u) * s.u + std::conj(sx[a][i].v) * s.v -
                                       std::conj(st[a][i].u) * s.u + std::conj(st[a][i].v) * s.v);
            }
            T.tt[i] = tt + xx - rt;
            T.xx[i] = tt + xx - rx;
            T.tx[i] = 2.0 * tx - rtx;
        }
    }
    return T;
}

std::pair<Field<double>, Field<double>> dw_stress_divergence(const DWRun& run, int n, bool literal)
{
    StressTensor m = dw_stress(run, n - 1, literal);
    StressTensor c = dw_stress(run, n, literal);
    StressTensor p = dw_stress(run, n + 1, literal);
    Field<double> dtt = time_diff(History<double>{m.tt, c.tt, p.tt, run.dt});
    Field<double> dtx = time_diff(History<double>{m.tx, c.tx, p.tx, run.dt});
    Field<double> xtx = central_diff(c.tx);
    Field<double> xxx = central_diff(c.xx);
    Field<double> r1(c.tt.grid), r2(c.tt.grid);
    for (int i = 0; i < r1.size(); ++i) {
        r1[i] = dtt[i] - xtx[i];
        r2[i] = dtx[i] - xxx[i];
    }
    return {r1, r2};
}

namespace {

struct CovDerivs {
    MultiSpinorField t, x;
};

CovDerivs cov_derivs(const DWRun& run, int n)
{
    const VecField& phi = run.levels.at(n).phi;
    return {project_spinor(phi, dw_psi_t(run, n), run.target),
            project_spinor(phi, diff_x(run.levels.at(n).psi), run.target)};
}

} // namespace

double dw_E_psi_12(const DWRun& run, int n)
{
    CovDerivs d = cov_derivs(run, n);
    double s = 0.0;
    const int N = d.t[0].size();
    for (int i = 0; i < N; ++i)
        s += rho_at(d.t, i) + rho_at(d.x, i);
    return 0.5 * s * d.t[0].grid.dx;
}

double dw_E_psi_14(const DWRun& run, int n)
{
    CovDerivs d = cov_derivs(run, n);
    double s = 0.0;
    const int N = d.t[0].size();
    for (int i = 0; i < N; ++i) {
        double pt = rho_at(d.t, i), px = rho_at(d.x, i);
        cplx c = 0.0;
        for (std::size_t a = 0; a < d.t.size(); ++a)
            c += std::conj(d.t[a][i].u) * d.x[a][i].u + std::conj(d.t[a][i].v) * d.x[a][i].v;
        s += pt * pt + px * px + 2.0 * pt * px + 4.0 * std::norm(c);
    }
    return s * d.t[0].grid.dx;
}

double dw_E_phi_22(const DWRun& run, int n)
{
    const VecField& phi = run.levels.at(n).phi;
    VecField pt = dw_phi_t(run, n);
    double s = 0.0;
    for (std::size_t a = 0; a < phi.size(); ++a) {
        Field<double> xx = second_diff(phi[a]);
        Field<double> xt = central_diff(pt[a]);
        for (int i = 0; i < xx.size(); ++i)
            s += xx[i] * xx[i] + xt[i] * xt[i];
    }
    return 0.5 * s * phi[0].grid.dx;
}

double dw_bound_psi_12(const DWRun& run, int n)
{
    double e = dw_E_psi_12(run, n);
    return e + std::sqrt(e);
}

double dw_bound_phi_22(const DWRun& run, int n)
{
    double e22 = dw_E_phi_22(run, n);
    double ephi = integrate(dw_phi_energy_density(run, n));
    CovDerivs d = cov_derivs(run, n);
    const MultiSpinorField& psi = run.levels.at(n).psi;
    double s = 0.0;
    for (int i = 0; i < psi[0].size(); ++i) {
        double g2 = rho_at(d.t, i) + rho_at(d.x, i);
        s += rho_at(psi, i) + g2 * g2;
    }
    s *= psi[0].grid.dx;
    return e22 * ephi + e22 + s;
}

double dw_difference_norm(const DWRun& a, const DWRun& b, int n)
{
    const DWLevel& la = a.levels.at(n);
    const DWLevel& lb = b.levels.at(n);
    VecField ta = dw_phi_t(a, n), tb = dw_phi_t(b, n);
    const int q = (int)la.phi.size();
    const Grid& g = la.phi[0].grid;
    double s = 0.0;
    for (int c = 0; c < q; ++c) {
        Field<double> w = axpy(la.phi[c], -1.0, lb.phi[c]);
        Field<double> wx = central_diff(w);
        for (int i = 0; i < g.N; ++i) {
            double wt = ta[c][i] - tb[c][i];
            s += beta_norm_sq(la.psi[c][i] - lb.psi[c][i]) + w[i] * w[i] + wt * wt + wx[i] * wx[i];
        }
    }
    return s * g.dx;
}

double sphere_defect(const DWLevel& l)
{
    double m = 0.0;
    for (int i = 0; i < l.phi[0].size(); ++i)
        m = std::max(m, std::abs(std::sqrt(dot_at(l.phi, l.phi, i)) - 1.0));
    return m;
}

double tangency_defect(const DWLevel& l)
{
    double m = 0.0;
    for (int i = 0; i < l.phi[0].size(); ++i) {
        Spinor c;
        for (std::size_t a = 0; a < l.phi.size(); ++a)
            c += l.phi[a][i] * l.psi[a][i];
        m = std::max(m, magnitude(c));
    }
    return m;
}

double calibrate_sigma(const DWRun& run)
{
    auto drift = [&](double sigma) {
        double e0 = dw_energy(run, 1, sigma), m = 0.0;
        for (int n = 2; n + 1 < run.size(); ++n)
            m = std::max(m, std::abs(dw_energy(run, n, sigma) - e0));
        return m;
    };
    return drift(1.0) <= drift(-1.0) ? 1.0 : -1.0;
}

double dw_audit_constant(const DWRun& run, double factor)
{
    const DWLevel& l = run.levels.at(0);
    VecField pt = dw_phi_t(run, 0);
    VecField px = diff_x(l.phi);
    double rho = 0.0, dphi = 0.0;
    for (int i = 0; i < l.phi[0].size(); ++i) {
        rho = std::max(rho, rho_at(l.psi, i));
        dphi = std::max(dphi, dot_at(pt, pt, i) + dot_at(px, px, i));
    }
    return factor * (1.0 + rho) * (1.0 + dphi);
}

} // namespace d11
