#include "dirac11/twisted_dirac.hpp"

#include <numbers>
#include <stdexcept>

namespace d11 {

namespace {

constexpr double kFdStep = 1e-3;

MatR fd4(const std::function<MatR(double)>& f, double s)
{
    const double h = kFdStep;
    return (-f(s + 2 * h) + 8.0 * f(s + h) - 8.0 * f(s - h) + f(s - 2 * h)) / (12.0 * h);
}

MatR pauli(int k)
{
    MatR m = MatR::Zero(2, 2);
    const cplx I(0, 1);
    if (k == 1) {
        m(0, 1) = 1;
        m(1, 0) = 1;
    } else if (k == 2) {
        m(0, 1) = -I;
        m(1, 0) = I;
    } else {
        m(0, 0) = 1;
        m(1, 1) = -1;
    }
    return m;
}

TwistedSpinorField zeros_like(const TwistedSpinorField& f)
{
    return TwistedSpinorField(f.size(), Field<Spinor>(f.at(0).grid));
}

// out = D^F-type combination gamma_t a - gamma_x b
TwistedSpinorField dirac_combine(const TwistedSpinorField& dt, const TwistedSpinorField& dx)
{
    TwistedSpinorField out = zeros_like(dt);
    for (std::size_t a = 0; a < dt.size(); ++a)
        for (int i = 0; i < dt[a].size(); ++i)
            out[a][i] = gamma_t_mul(dt[a][i]) - gamma_x_mul(dx[a][i]);
    return out;
}

void add_matrix_action(TwistedSpinorField& out, const TwistedSpinorField& f, const MatR& A, int i, double scale = 1.0)
{
    const int r = (int)f.size();
    for (int a = 0; a < r; ++a) {
        Spinor s;
        for (int b = 0; b < r; ++b) {
            s.u += A(a, b) * f[b][i].u;
            s.v += A(a, b) * f[b][i].v;
        }
        out[a][i] += scale * s;
    }
}

TwistedSpinorField centered_time(const TwistedSpinorField& prev, const TwistedSpinorField& next, double dt)
{
    TwistedSpinorField out = zeros_like(prev);
    for (std::size_t a = 0; a < prev.size(); ++a)
        for (int i = 0; i < prev[a].size(); ++i)
            out[a][i] = (next[a][i] - prev[a][i]) / (2.0 * dt);
    return out;
}

} // namespace

Connection flat_connection(int r)
{
    Connection c;
    c.r = r;
    c.A_t = [r](double, double) { return MatR::Zero(r, r).eval(); };
    c.A_x = c.A_t;
    c.dt_A_x = c.A_t;
    c.dx_A_t = c.A_t;
    c.time_independent = true;
    return c;
}

Connection abelian_curved(double a, int mode, double L)
{
    const double k = 2.0 * std::numbers::pi * mode / L;
    Connection c;
    c.r = 1;
    c.A_t = [a, k](double, double x) { return MatR::Constant(1, 1, cplx(0, a * std::sin(k * x))); };
    c.A_x = [](double, double) { return MatR::Zero(1, 1).eval(); };
    c.dt_A_x = c.A_x;
    c.dx_A_t = [a, k](double, double x) { return MatR::Constant(1, 1, cplx(0, a * k * std::cos(k * x))); };
    c.time_independent = true;
    return c;
}

Connection nonabelian_example(double a, int mode, double L, double w)
{
    const double k = 2.0 * std::numbers::pi * mode / L;
    const cplx I(0, 1);
    Connection c;
    c.r = 2;
    c.A_t = [=](double t, double x) { return (I * a * std::cos(w * t) * std::sin(k * x) * pauli(1)).eval(); };
    c.A_x = [=](double, double x) { return (I * a * std::cos(k * x) * pauli(3)).eval(); };
    c.dt_A_x = [](double, double) { return MatR::Zero(2, 2).eval(); };
    c.dx_A_t = [=](double t, double x) {
        return (I * a * k * std::cos(w * t) * std::cos(k * x) * pauli(1)).eval();
    };
    c.time_independent = w == 0.0;
    return c;
}

Connection gauge_transform(const Connection& c, const MatR& H, ScalarSampler f, ScalarSampler f_t, ScalarSampler f_x)
{
    Eigen::SelfAdjointEigenSolver<MatR> es(H);
    const MatR W = es.eigenvectors();
    const Eigen::VectorXd h = es.eigenvalues();
    auto U = [W, h](double phase) {
        Eigen::VectorXcd d(h.size());
        for (int j = 0; j < h.size(); ++j)
            d(j) = std::polar(1.0, phase * h(j));
        return (W * d.asDiagonal() * W.adjoint()).eval();
    };
    const cplx I(0, 1);
    Connection out;
    out.r = c.r;
    auto make = [=](bool time_part) {
        return MatSampler([=](double t, double x) {
            MatR u = U(f(t, x));
            MatR A = time_part ? c.A_t(t, x) : c.A_x(t, x);
            double df = time_part ? f_t(t, x) : f_x(t, x);
            return (u * A * u.adjoint() - I * df * H).eval();
        });
    };
    out.A_t = make(true);
    out.A_x = make(false);
    return out;
}

MatR curvature_at(const Connection& c, double t, double x)
{
    MatR dtAx = c.dt_A_x ? c.dt_A_x(t, x) : fd4([&](double s) { return c.A_x(s, x); }, t);
    MatR dxAt = c.dx_A_t ? c.dx_A_t(t, x) : fd4([&](double s) { return c.A_t(t, s); }, x);
    MatR At = c.A_t(t, x), Ax = c.A_x(t, x);
    return dtAx - dxAt + At * Ax - Ax * At;
}

Field<MatR> curvature(const Connection& c, const Grid& g, double t)
{
    Field<MatR> out(g);
    for (int i = 0; i < g.N; ++i)
        out[i] = curvature_at(c, t, g.x(i));
    return out;
}

TwistedStepper::TwistedStepper(const Connection& c, const Grid& g, double lambda)
    : conn_(c), grid_(g), lambda_(lambda), dt_(g.dx)
{
    if (conn_.time_independent)
        fixed_ = propagators(0.0);
}

std::vector<MatR> TwistedStepper::propagators(double t) const
{
    const int r = conn_.r;
    const cplx I(0, 1);
    std::vector<MatR> out(grid_.N);
    for (int i = 0; i < grid_.N; ++i) {
        const double x = grid_.x(i);
        MatR At = conn_.A_t(t, x), Ax = conn_.A_x(t, x);
        // Generator G of d/dt (u; v) on the 2r-vector; H = iG is Hermitian.
        MatR G = MatR::Zero(2 * r, 2 * r);
        G.topLeftCorner(r, r) = -(At + Ax);
        G.bottomRightCorner(r, r) = -(At - Ax);
        G.topRightCorner(r, r) = -I * lambda_ * MatR::Identity(r, r);
        G.bottomLeftCorner(r, r) = -I * lambda_ * MatR::Identity(r, r);
        MatR H = I * G;
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<MatR> es(H);
        Eigen::VectorXcd d(2 * r);
        for (int j = 0; j < 2 * r; ++j)
            d(j) = std::polar(1.0, -0.5 * dt_ * es.eigenvalues()(j));
        out[i] = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
    }
    return out;
}

namespace {

void apply_propagators(TwistedSpinorField& f, const std::vector<MatR>& P)
{
    const int r = (int)f.size();
    Eigen::VectorXcd w(2 * r);
    for (int i = 0; i < f[0].size(); ++i) {
        for (int a = 0; a < r; ++a) {
            w(a) = f[a][i].u;
            w(r + a) = f[a][i].v;
        }
        Eigen::VectorXcd y = P[i] * w;
        for (int a = 0; a < r; ++a) {
            f[a][i].u = y(a);
            f[a][i].v = y(r + a);
        }
    }
}

} // namespace

TwistedSpinorField TwistedStepper::step(const TwistedSpinorField& psi, double t) const
{
    if ((int)psi.size() != conn_.r)
        throw std::invalid_argument("twisted spinor rank does not match connection rank");
    TwistedSpinorField a = psi;
    if (conn_.time_independent)
        apply_propagators(a, fixed_);
    else
        apply_propagators(a, propagators(t));
    TwistedSpinorField b;
    b.reserve(a.size());
    for (const auto& comp : a) {
        Field<Spinor> s(comp.grid);
        const int n = comp.size();
        for (int i = 0; i < n; ++i) {
            s[i].u = comp[i == 0 ? n - 1 : i - 1].u;
            s[i].v = comp[i + 1 == n ? 0 : i + 1].v;
        }
        b.push_back(std::move(s));
    }
    if (conn_.time_independent)
        apply_propagators(b, fixed_);
    else
        apply_propagators(b, propagators(t + dt_));
    return b;
}

TwistedSpinorField twisted_step(const TwistedSpinorField& psi, const Connection& c, double lambda, double t,
                                double dt)
{
    if (psi.empty())
        throw std::invalid_argument("empty twisted spinor");
    if (std::abs(dt - psi[0].grid.dx) > 1e-12 * psi[0].grid.dx)
        throw std::invalid_argument("step requires dt == dx");
    return TwistedStepper(c, psi[0].grid, lambda).step(psi, t);
}

Trajectory<Spinor> component(const std::vector<TwistedSpinorField>& levels, int a)
{
    Trajectory<Spinor> tr;
    for (const auto& l : levels)
        tr.levels.push_back(l.at(a));
    return tr;
}

TwistedRun run_twisted(const TwistedSpinorField& psi0, const Connection& c, double lambda, int steps)
{
    TwistedRun run;
    const Grid g = psi0.at(0).grid;
    run.dt = g.dx;
    TwistedStepper st(c, g, lambda);
    run.levels.reserve(steps + 1);
    run.levels.push_back(psi0);
    for (int s = 0; s < steps; ++s)
        run.levels.push_back(st.step(run.levels.back(), run.time(s)));
    return run;
}

TwistedSpinorField cov_dx(const TwistedSpinorField& f, const Connection& c, double t)
{
    TwistedSpinorField out;
    for (const auto& comp : f)
        out.push_back(central_diff(comp));
    const Grid& g = f[0].grid;
    for (int i = 0; i < g.N; ++i)
        add_matrix_action(out, f, c.A_x(t, g.x(i)), i);
    return out;
}

namespace {

TwistedSpinorField cov_dt_of(const TwistedSpinorField& prev, const TwistedSpinorField& cur,
                             const TwistedSpinorField& next, double dt, const Connection& c, double t)
{
    TwistedSpinorField out = centered_time(prev, next, dt);
    const Grid& g = cur[0].grid;
    for (int i = 0; i < g.N; ++i)
        add_matrix_action(out, cur, c.A_t(t, g.x(i)), i);
    return out;
}

TwistedSpinorField twisted_dirac_at(const TwistedRun& run, const Connection& c, int n)
{
    return dirac_combine(cov_dt(run, c, n), cov_dx(run.levels.at(n), c, run.time(n)));
}

} // namespace

TwistedSpinorField cov_dt(const TwistedRun& run, const Connection& c, int n)
{
    return cov_dt_of(run.levels.at(n - 1), run.levels.at(n), run.levels.at(n + 1), run.dt, c, run.time(n));
}

TwistedSpinorField weitzenboeck_defect(const TwistedRun& run, const Connection& c, int n)
{
    const double t = run.time(n);
    // (D^F)^2 psi by composing centered operators.
    TwistedSpinorField Dm = twisted_dirac_at(run, c, n - 1);
    TwistedSpinorField D0 = twisted_dirac_at(run, c, n);
    TwistedSpinorField Dp = twisted_dirac_at(run, c, n + 1);
    TwistedSpinorField DD = dirac_combine(cov_dt_of(Dm, D0, Dp, run.dt, c, t), cov_dx(D0, c, t));

    TwistedSpinorField Tm = cov_dt(run, c, n - 1);
    TwistedSpinorField T0 = cov_dt(run, c, n);
    TwistedSpinorField Tp = cov_dt(run, c, n + 1);
    TwistedSpinorField tt = cov_dt_of(Tm, T0, Tp, run.dt, c, t);
    TwistedSpinorField xx = cov_dx(cov_dx(run.levels.at(n), c, t), c, t);

    const TwistedSpinorField& psi = run.levels.at(n);
    TwistedSpinorField Rpsi = zeros_like(psi);
    const Grid& g = psi[0].grid;
    for (int i = 0; i < g.N; ++i)
        add_matrix_action(Rpsi, psi, curvature_at(c, t, g.x(i)), i);
    TwistedSpinorField out = zeros_like(psi);
    for (std::size_t a = 0; a < psi.size(); ++a)
        for (int i = 0; i < g.N; ++i) {
            // gamma_t gamma_x (u, v) = (-u, v)
            Spinor cr{-Rpsi[a][i].u, Rpsi[a][i].v};
            out[a][i] = DD[a][i] - tt[a][i] + xx[a][i] + cr;
        }
    return out;
}

Field<double> twisted_density(const TwistedSpinorField& psi)
{
    Field<double> rho(psi.at(0).grid);
    for (const auto& comp : psi)
        for (int i = 0; i < rho.size(); ++i)
            rho[i] += beta_norm_sq(comp[i]);
    return rho;
}

double twisted_E1(const TwistedSpinorField& psi)
{
    return 0.5 * integrate(twisted_density(psi));
}

double twisted_E2(const TwistedRun& run, int n)
{
    Field<double> a = twisted_density(run.levels.at(n - 1));
    Field<double> b = twisted_density(run.levels.at(n));
    Field<double> c = twisted_density(run.levels.at(n + 1));
    Field<double> fx = central_diff(b);
    Field<double> ft = time_diff(History<double>{a, b, c, run.dt});
    double s = 0.0;
    for (int i = 0; i < b.size(); ++i)
        s += fx[i] * fx[i] + ft[i] * ft[i];
    return 0.5 * s * b.grid.dx;
}

double twisted_E3(const TwistedRun& run, const Connection& c, int n)
{
    TwistedSpinorField dt = cov_dt(run, c, n);
    TwistedSpinorField dx = cov_dx(run.levels.at(n), c, run.time(n));
    return 0.5 * (integrate(twisted_density(dt)) + integrate(twisted_density(dx)));
}

double twisted_E4(const TwistedSpinorField& psi)
{
    Field<double> rho = twisted_density(psi);
    Field<double> m(rho.grid);
    for (const auto& comp : psi)
        for (int i = 0; i < m.size(); ++i)
            m[i] += chirality(comp[i]);
    double s = 0.0;
    for (int i = 0; i < m.size(); ++i)
        s += rho[i] * rho[i] + m[i] * m[i];
    return s * rho.grid.dx;
}

double tilde_e3_bound(const TwistedRun& run, const Connection& c, int n)
{
    const double t = run.time(n);
    const Grid& g = run.levels.at(n)[0].grid;
    double r2 = 0.0;
    for (int i = 0; i < g.N; ++i)
        r2 += curvature_at(c, t, g.x(i)).squaredNorm();
    r2 *= g.dx;
    return twisted_E3(run, c, n) + 0.5 * max_abs(twisted_density(run.levels.at(n))) * r2;
}

double max_abs(const TwistedSpinorField& f)
{
    double m = 0.0;
    for (const auto& comp : f)
        m = std::max(m, max_abs(comp));
    return m;
}

} // namespace d11
