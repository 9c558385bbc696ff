#pragma once

#include <functional>

#include "dirac11/grid.hpp"

namespace d11 {

// Zero-order substep of the split scheme:
//   split    - Strang split of the exact mass rotation and the exact nonlinear phase (norm exact)
//   midpoint - one explicit midpoint step of the full local system
enum class ThirringIntegrator { split, midpoint };

// Real potential V(|psi|^2_beta, <d_x.psi, psi>) multiplying the cubic term.
using Potential = std::function<double(double rho, double m)>;

struct ThirringProblem {
    Grid grid;
    double lambda = 0.0;
    double kappa = 0.0;
    Potential potential;
    ThirringIntegrator integrator = ThirringIntegrator::split;
    Field<Spinor> initial;
};

// lambda psi + kappa (<psi, gamma_t psi> gamma_t psi - <psi, gamma_x psi> gamma_x psi)
Spinor thirring_rhs_geometric(const Spinor& s, double lambda, double kappa);
// Component form (lambda u + 2 kappa |u|^2 v, lambda v + 2 kappa |v|^2 u).
inline Spinor thirring_rhs_point(const Spinor& s, double lambda, double kappa)
{
    return {lambda * s.u + 2.0 * kappa * std::norm(s.u) * s.v, lambda * s.v + 2.0 * kappa * std::norm(s.v) * s.u};
}
Field<Spinor> thirring_rhs(const Field<Spinor>& psi, double lambda, double kappa);

// Local system i u' = lambda v + 2 k |v|^2 u, i v' = lambda u + 2 k |u|^2 v over time tau,
// with k = kappa V(rho, m) when a potential is given.
Spinor thirring_local(const Spinor& s, double lambda, double kappa, double tau, ThirringIntegrator integ,
                      const Potential* V = nullptr);

// Strang step; requires dt == dx.
Field<Spinor> thirring_step(const Field<Spinor>& psi, double lambda, double kappa, double dt,
                            ThirringIntegrator integ = ThirringIntegrator::split, const Potential* V = nullptr);

// Throws InstabilityError at the first step producing non-finite values.
Trajectory<Spinor> run_thirring(const ThirringProblem& p, int steps);

// Compares r psi(r^2 T, r^2 x) with the evolution of r psi0(r^2 x) up to T, both on the grid
// of psi0 (r^2 must be an integer). Returns the L2 discrepancy at time T.
double scaling_check(const Field<Spinor>& psi0, double r, double T, double lambda, double kappa,
                     ThirringIntegrator integ = ThirringIntegrator::split);

// int |psi - xi|^2_beta dx per step for xi started from psi0 + delta.
std::vector<double> perturbation_growth(const Field<Spinor>& psi0, const Field<Spinor>& delta, double T,
                                        double lambda, double kappa,
                                        ThirringIntegrator integ = ThirringIntegrator::split);

// Pointwise invariants: rho = |psi|^2_beta, m = <d_x.psi, psi>, w = <i d_x.d_t.psi, psi> = 2 Im(conj(u) v).
inline double thirring_w(const Spinor& s) { return 2.0 * std::imag(std::conj(s.u) * s.v); }

double thirring_E1(const Field<Spinor>& psi);
// Box residual of rho at level n with right side -2 lambda d_x w.
Field<double> thirring_box_residual(const Trajectory<Spinor>& tr, int n, double lambda);
// d_t m - d_x rho + 2 lambda w at level n.
Field<double> thirring_mt_residual(const Trajectory<Spinor>& tr, int n, double lambda);
// int (rho^3/3 + m^2 rho) dx
double thirring_L6(const Field<Spinor>& psi);
// int rho m w dx
double thirring_L6_source(const Field<Spinor>& psi);
// d/dt L6 - sign * 4 lambda int rho m w at level n (needs n-1..n+1); sign = -1 is the identity
// of the adopted convention.
double thirring_L6_residual(const Trajectory<Spinor>& tr, int n, double lambda, double sign = -1.0);
// int (|d_t psi|^2_beta + |d_x psi|^2_beta) dx at level n.
double thirring_H1(const Trajectory<Spinor>& tr, int n);

} // namespace d11
