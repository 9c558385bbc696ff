#include "dirac11/linear_dirac.hpp"

#include <numbers>
#include <stdexcept>

namespace d11 {

namespace {

void require_cfl1(const Grid& g, double dt)
{
    if (std::abs(dt - g.dx) > 1e-12 * g.dx)
        throw std::invalid_argument("step requires dt == dx");
}

} // namespace

Field<Spinor> free_transport_step(const Field<Spinor>& psi)
{
    const int n = psi.size();
    Field<Spinor> out(psi.grid);
    for (int i = 0; i < n; ++i) {
        out[i].u = psi[i == 0 ? n - 1 : i - 1].u;
        out[i].v = psi[i + 1 == n ? 0 : i + 1].v;
    }
    return out;
}

void mass_rotate(Field<Spinor>& psi, double lambda, double tau)
{
    if (lambda == 0.0)
        return;
    for (auto& s : psi.values)
        s = mass_rotate(s, lambda, tau);
}

Field<Spinor> massive_step(const Field<Spinor>& psi, double lambda, double dt)
{
    require_cfl1(psi.grid, dt);
    Field<Spinor> a = psi;
    mass_rotate(a, lambda, 0.5 * dt);
    Field<Spinor> b = free_transport_step(a);
    mass_rotate(b, lambda, 0.5 * dt);
    return b;
}

Trajectory<Spinor> run_linear(const LinearDiracProblem& p, int steps)
{
    Trajectory<Spinor> tr;
    tr.dt = p.grid.dx;
    tr.levels.reserve(steps + 1);
    tr.levels.push_back(p.initial);
    for (int s = 0; s < steps; ++s)
        tr.levels.push_back(massive_step(tr.levels.back(), p.lambda, tr.dt));
    return tr;
}

Spinor PlaneWave::value(double t, double x) const
{
    return std::polar(1.0, k * x - omega * t) * chi;
}

Field<Spinor> PlaneWave::at(double t) const
{
    return sample<Spinor>(grid, [&](double x) { return value(t, x); });
}

PlaneWave plane_wave(const Grid& g, int mode, double lambda, int branch)
{
    if (mode == 0 && lambda == 0.0)
        throw std::invalid_argument("plane wave with mode 0 and lambda 0 has a zero symbol");
    if (branch != 1 && branch != -1)
        throw std::invalid_argument("plane wave branch must be +1 or -1");
    PlaneWave w;
    w.grid = g;
    w.k = 2.0 * std::numbers::pi * mode / g.L;
    w.omega = branch * std::sqrt(w.k * w.k + lambda * lambda);
    // Symbol [[k, lambda], [lambda, -k]] acting on (u, v).
    double a1 = lambda, b1 = w.omega - w.k;
    double a2 = w.omega + w.k, b2 = lambda;
    double n1 = std::hypot(a1, b1), n2 = std::hypot(a2, b2);
    if (n1 >= n2)
        w.chi = {a1 / n1, b1 / n1};
    else
        w.chi = {a2 / n2, b2 / n2};
    return w;
}

Field<Spinor> dirac_residual(const History<Spinor>& h, double lambda, RhsModel model)
{
    Field<Spinor> dt = time_diff(h);
    Field<Spinor> dx = central_diff(h.cur);
    Field<Spinor> out(h.cur.grid);
    const cplx il(0.0, model == RhsModel::massive ? lambda : 0.0);
    for (int i = 0; i < out.size(); ++i)
        out[i] = gamma_t_mul(dt[i]) - gamma_x_mul(dx[i]) + il * h.cur[i];
    return out;
}

double spacetime_pairing_defect(const SpinorSampler& xi, const SpinorSampler& psi, const Grid& g, double T, int Nt)
{
    const double dt = T / Nt;
    std::vector<Field<Spinor>> X, P;
    for (int n = 0; n < Nt; ++n) {
        double t = n * dt;
        X.push_back(sample<Spinor>(g, [&](double x) { return xi(t, x); }));
        P.push_back(sample<Spinor>(g, [&](double x) { return psi(t, x); }));
    }
    auto D = [&](const std::vector<Field<Spinor>>& f, int n) {
        History<Spinor> h{f[(n + Nt - 1) % Nt], f[n], f[(n + 1) % Nt], dt};
        return dirac_residual(h, 0.0, RhsModel::free);
    };
    cplx s = 0.0;
    for (int n = 0; n < Nt; ++n) {
        Field<Spinor> dp = D(P, n), dxi = D(X, n);
        for (int i = 0; i < g.N; ++i)
            s += indef_product(X[n][i], dp[i]) + indef_product(dxi[i], P[n][i]);
    }
    return std::abs(s) * dt * g.dx;
}

Field<double> density(const Field<Spinor>& psi)
{
    return map_field(psi, [](const Spinor& s) { return beta_norm_sq(s); });
}

Field<double> derivative_density(const History<Spinor>& h)
{
    Field<Spinor> pt = time_diff(h);
    Field<Spinor> px = central_diff(h.cur);
    Field<double> e(h.cur.grid);
    for (int i = 0; i < e.size(); ++i)
        e[i] = 0.5 * (beta_norm_sq(pt[i]) + beta_norm_sq(px[i]));
    return e;
}

double energy_E1(const Field<Spinor>& psi)
{
    return 0.5 * integrate(density(psi));
}

double energy_E4(const Field<Spinor>& psi)
{
    return integrate(map_field(psi, [](const Spinor& s) {
        double r = beta_norm_sq(s), m = chirality(s);
        return r * r + m * m;
    }));
}

namespace {

double wave_energy(const Field<double>& prev, const Field<double>& cur, const Field<double>& next, double dt)
{
    Field<double> fx = central_diff(cur);
    Field<double> ft = time_diff(History<double>{prev, cur, next, dt});
    double s = 0.0;
    for (int i = 0; i < cur.size(); ++i)
        s += fx[i] * fx[i] + ft[i] * ft[i];
    return 0.5 * s * cur.grid.dx;
}

} // namespace

double energy_E2(const Trajectory<Spinor>& tr, int n)
{
    return wave_energy(density(tr.levels.at(n - 1)), density(tr.levels.at(n)), density(tr.levels.at(n + 1)),
                       tr.dt);
}

double energy_E3(const Trajectory<Spinor>& tr, int n)
{
    return integrate(derivative_density(tr.history(n)));
}

double energy_E5(const Trajectory<Spinor>& tr, int n)
{
    return wave_energy(derivative_density(tr.history(n - 1)), derivative_density(tr.history(n)),
                       derivative_density(tr.history(n + 1)), tr.dt);
}

double energy_E6(const Trajectory<Spinor>& tr, int n, double lambda, double sign)
{
    return energy_E3(tr, n) + sign * lambda * lambda * energy_E1(tr.levels.at(n));
}

} // namespace d11
