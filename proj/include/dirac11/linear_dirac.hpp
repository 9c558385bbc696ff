#pragma once

#include <functional>

#include "dirac11/grid.hpp"

namespace d11 {

struct LinearDiracProblem {
    Grid grid;
    double lambda = 0.0;
    Field<Spinor> initial;
};

// Exact characteristic transport at dt = dx: u moves one cell right, v one cell left.
Field<Spinor> free_transport_step(const Field<Spinor>& psi);

// Exact solution of i u' = lambda v, i v' = lambda u over time tau.
inline Spinor mass_rotate(const Spinor& s, double lambda, double tau)
{
    const double c = std::cos(lambda * tau);
    const cplx is(0.0, std::sin(lambda * tau));
    return {c * s.u - is * s.v, c * s.v - is * s.u};
}
void mass_rotate(Field<Spinor>& psi, double lambda, double tau);

// Strang splitting of i D psi = lambda psi; requires dt == dx.
Field<Spinor> massive_step(const Field<Spinor>& psi, double lambda, double dt);

Trajectory<Spinor> run_linear(const LinearDiracProblem& p, int steps);

struct PlaneWave {
    Grid grid;
    double k = 0.0;
    double omega = 0.0;
    Spinor chi;

    Spinor value(double t, double x) const;
    Field<Spinor> at(double t) const;
};

// Throws std::invalid_argument for mode = 0 with lambda = 0.
PlaneWave plane_wave(const Grid& g, int mode, double lambda, int branch);

enum class RhsModel { free, massive };

// gamma_t d_t psi - gamma_x d_x psi (+ i lambda psi) at the middle level, centered stencils.
Field<Spinor> dirac_residual(const History<Spinor>& h, double lambda, RhsModel model);

using SpinorSampler = std::function<Spinor(double t, double x)>;

// |sum <xi, D psi> + <D xi, psi>| dt dx over an Nt x N space-time torus of period T in time.
double spacetime_pairing_defect(const SpinorSampler& xi, const SpinorSampler& psi, const Grid& g, double T,
                                int Nt);

// Energies. Those with time derivatives are evaluated at level n of a trajectory
// with centered stencils and need n-1..n+1 (E5: n-2..n+2).
double energy_E1(const Field<Spinor>& psi);
double energy_E4(const Field<Spinor>& psi);
double energy_E2(const Trajectory<Spinor>& tr, int n);
double energy_E3(const Trajectory<Spinor>& tr, int n);
double energy_E5(const Trajectory<Spinor>& tr, int n);
// sign = +1 gives the conserved Klein-Gordon energy, -1 the opposite-sign variant.
double energy_E6(const Trajectory<Spinor>& tr, int n, double lambda, double sign = 1.0);

// Pointwise |psi|^2_beta and e(psi) = (|d_t psi|^2 + |d_x psi|^2)/2.
Field<double> density(const Field<Spinor>& psi);
Field<double> derivative_density(const History<Spinor>& h);

} // namespace d11
