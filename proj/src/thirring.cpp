#include "dirac11/thirring.hpp"

#include <cmath>

#include "dirac11/errors.hpp"
#include "dirac11/linear_dirac.hpp"

namespace d11 {

Spinor thirring_rhs_geometric(const Spinor& s, double lambda, double kappa)
{
    const CliffordRep& rep = default_rep();
    Spinor gt = clifford_mul({1, 0}, s, rep);
    Spinor gx = clifford_mul({0, 1}, s, rep);
    cplx at = indef_product(s, gt, rep);
    cplx ax = indef_product(s, gx, rep);
    return lambda * s + kappa * (at * gt - ax * gx);
}

Field<Spinor> thirring_rhs(const Field<Spinor>& psi, double lambda, double kappa)
{
    return map_field(psi, [=](const Spinor& s) { return thirring_rhs_point(s, lambda, kappa); });
}

namespace {

Spinor nonlinear_phase(const Spinor& s, double k, double tau)
{
    const double pu = -2.0 * k * std::norm(s.v) * tau;
    const double pv = -2.0 * k * std::norm(s.u) * tau;
    return {s.u * std::polar(1.0, pu), s.v * std::polar(1.0, pv)};
}

Spinor local_velocity(const Spinor& s, double lambda, double k)
{
    const cplx mi(0, -1);
    return {mi * (lambda * s.v + 2.0 * k * std::norm(s.v) * s.u), mi * (lambda * s.u + 2.0 * k * std::norm(s.u) * s.v)};
}

} // namespace

Spinor thirring_local(const Spinor& s, double lambda, double kappa, double tau, ThirringIntegrator integ,
                      const Potential* V)
{
    double k = kappa;
    if (V && *V)
        k *= (*V)(beta_norm_sq(s), chirality(s));
    if (integ == ThirringIntegrator::midpoint) {
        Spinor mid = s + (0.5 * tau) * local_velocity(s, lambda, k);
        if (V && *V)
            k = kappa * (*V)(beta_norm_sq(mid), chirality(mid));
        return s + tau * local_velocity(mid, lambda, k);
    }
    Spinor a = mass_rotate(s, lambda, 0.5 * tau);
    if (V && *V)
        k = kappa * (*V)(beta_norm_sq(a), chirality(a));
    Spinor b = nonlinear_phase(a, k, tau);
    return mass_rotate(b, lambda, 0.5 * tau);
}

Field<Spinor> thirring_step(const Field<Spinor>& psi, double lambda, double kappa, double dt,
                            ThirringIntegrator integ, const Potential* V)
{
    if (std::abs(dt - psi.grid.dx) > 1e-12 * psi.grid.dx)
        throw std::invalid_argument("step requires dt == dx");
    Field<Spinor> a(psi.grid);
    for (int i = 0; i < psi.size(); ++i)
        a[i] = thirring_local(psi[i], lambda, kappa, 0.5 * dt, integ, V);
    Field<Spinor> b = free_transport_step(a);
    for (auto& s : b.values)
        s = thirring_local(s, lambda, kappa, 0.5 * dt, integ, V);
    return b;
}

Trajectory<Spinor> run_thirring(const ThirringProblem& p, int steps)
{
    Trajectory<Spinor> tr;
    tr.dt = p.grid.dx;
    tr.levels.reserve(steps + 1);
    tr.levels.push_back(p.initial);
    const Potential* V = p.potential ? &p.potential : nullptr;
    for (int s = 0; s < steps; ++s) {
        tr.levels.push_back(thirring_step(tr.levels.back(), p.lambda, p.kappa, tr.dt, p.integrator, V));
        if (!all_finite(tr.levels.back()))
            throw InstabilityError(s + 1, "non-finite spinor values");
    }
    return tr;
}

namespace {

Field<Spinor> evolve(Field<Spinor> psi, int steps, double lambda, double kappa, ThirringIntegrator integ)
{
    for (int s = 0; s < steps; ++s)
        psi = thirring_step(psi, lambda, kappa, psi.grid.dx, integ);
    return psi;
}

int steps_for(double T, double dt)
{
    double n = T / dt;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
        throw std::invalid_argument("final time is not a whole number of steps");
    return (int)std::llround(n);
}

} // namespace

double scaling_check(const Field<Spinor>& psi0, double r, double T, double lambda, double kappa,
                     ThirringIntegrator integ)
{
    const double r2 = r * r;
    if (!(r > 0.0) || std::abs(r2 - std::round(r2)) > 1e-12 * r2)
        throw std::invalid_argument("scaling factor must have an integer square");
    const int q = (int)std::llround(r2);
    const int N = psi0.size();
    const double dt = psi0.grid.dx;
    const int n = steps_for(T, dt);

    Field<Spinor> scaled(psi0.grid);
    for (int i = 0; i < N; ++i)
        scaled[i] = r * psi0[(int)(((long long)q * i) % N)];

    Field<Spinor> A = evolve(psi0, q * n, lambda, kappa, integ);
    Field<Spinor> B = evolve(scaled, n, lambda, kappa, integ);
    Field<Spinor> diff(psi0.grid);
    for (int i = 0; i < N; ++i)
        diff[i] = B[i] - r * A[(int)(((long long)q * i) % N)];
    return l2_norm(diff);
}

std::vector<double> perturbation_growth(const Field<Spinor>& psi0, const Field<Spinor>& delta, double T,
                                        double lambda, double kappa, ThirringIntegrator integ)
{
    const int n = steps_for(T, psi0.grid.dx);
    Field<Spinor> a = psi0;
    Field<Spinor> b = axpy(psi0, 1.0, delta);
    std::vector<double> out;
    auto record = [&] {
        double s = 0.0;
        for (int i = 0; i < a.size(); ++i)
            s += beta_norm_sq(a[i] - b[i]);
        out.push_back(s * a.grid.dx);
    };
    record();
    for (int k = 0; k < n; ++k) {
        a = thirring_step(a, lambda, kappa, a.grid.dx, integ);
        b = thirring_step(b, lambda, kappa, b.grid.dx, integ);
        record();
    }
    return out;
}

double thirring_E1(const Field<Spinor>& psi)
{
    return energy_E1(psi);
}

Field<double> thirring_box_residual(const Trajectory<Spinor>& tr, int n, double lambda)
{
    History<double> h{density(tr.levels.at(n - 1)), density(tr.levels.at(n)), density(tr.levels.at(n + 1)),
                      tr.dt};
    Field<double> w = map_field(tr.levels.at(n), [](const Spinor& s) { return thirring_w(s); });
    Field<double> rhs = central_diff(w);
    for (auto& v : rhs.values)
        v *= -2.0 * lambda;
    return box_residual(h, rhs);
}

Field<double> thirring_mt_residual(const Trajectory<Spinor>& tr, int n, double lambda)
{
    auto m = [](const Field<Spinor>& f) { return map_field(f, [](const Spinor& s) { return chirality(s); }); };
    Field<double> mt = time_diff(History<double>{m(tr.levels.at(n - 1)), m(tr.levels.at(n)), m(tr.levels.at(n + 1)),
                                                 tr.dt});
    Field<double> rx = central_diff(density(tr.levels.at(n)));
    Field<double> out(mt.grid);
    for (int i = 0; i < out.size(); ++i)
        out[i] = mt[i] - rx[i] + 2.0 * lambda * thirring_w(tr.levels.at(n)[i]);
    return out;
}

double thirring_L6(const Field<Spinor>& psi)
{
    return integrate(map_field(psi, [](const Spinor& s) {
        double r = beta_norm_sq(s), m = chirality(s);
        return r * r * r / 3.0 + m * m * r;
    }));
}

double thirring_L6_source(const Field<Spinor>& psi)
{
    return integrate(
        map_field(psi, [](const Spinor& s) { return beta_norm_sq(s) * chirality(s) * thirring_w(s); }));
}

double thirring_L6_residual(const Trajectory<Spinor>& tr, int n, double lambda, double sign)
{
    double rate = (thirring_L6(tr.levels.at(n + 1)) - thirring_L6(tr.levels.at(n - 1))) / (2.0 * tr.dt);
    return rate - sign * 4.0 * lambda * thirring_L6_source(tr.levels.at(n));
}

double thirring_H1(const Trajectory<Spinor>& tr, int n)
{
    return 2.0 * energy_E3(tr, n);
}

} // namespace d11
