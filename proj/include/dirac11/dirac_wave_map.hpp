#pragma once

#include "dirac11/grid.hpp"

namespace d11 {

using VecQ = Eigen::VectorXd;

enum class TargetKind { sphere, flat_torus };

// Explicitly embedded target in R^q: the unit sphere S^{q-1} or a flat torus (II = 0).
struct Target {
    TargetKind kind = TargetKind::sphere;
    int q = 3;

    static Target sphere(int q) { return {TargetKind::sphere, q}; }
    static Target flat_torus(int q) { return {TargetKind::flat_torus, q}; }

    VecQ second_fundamental_form(const VecQ& p, const VecQ& X, const VecQ& Y) const;
    VecQ shape_operator(const VecQ& p, const VecQ& xi, const VecQ& X) const;
    VecQ curvature(const VecQ& A, const VecQ& B, const VecQ& C) const;
    VecQ project(const VecQ& p, const VecQ& W) const;
};

constexpr int kMaxAmbient = 8;

// One time level of a Dirac-wave map: the map and the vector spinor, component-wise.
struct DWLevel {
    VecField phi;
    MultiSpinorField psi;
};

struct DWState {
    Grid grid;
    double t = 0.0;
    int step = 0;
    VecField phi;
    VecField phi_prev;
    MultiSpinorField psi;
    double last_projection = 0.0;
};

// -(|phi_t|^2 - |phi_x|^2) phi plus the curvature force; the ambient right side of box phi.
// Returns the tangential part; the removed normal part's max is written to normal_residual.
VecField dwm_rhs_map(const VecField& phi, const VecField& phi_t, const MultiSpinorField& psi, const Target& target,
                     double* normal_residual = nullptr);

// 1/2 V(gamma_t, phi_t) - 1/2 V(gamma_x, phi_x) from the pairing matrices H^{cd} = <psi^c, i gamma psi^d>.
VecField curvature_contraction(const VecField& phi_t, const VecField& phi_x, const MultiSpinorField& psi);
// Same quantity through Im(u conj<d_+ phi, u>) + Im(v conj<d_- phi, v>).
VecField curvature_force(const VecField& phi_t, const VecField& phi_x, const MultiSpinorField& psi);

// II(phi_t, gamma_t psi) - II(phi_x, gamma_x psi).
MultiSpinorField dwm_rhs_spinor(const VecField& phi, const VecField& phi_t, const VecField& phi_x,
                                const MultiSpinorField& psi, const Target& target);

// Start-up from (phi0, phi1 = phi_t(0), psi0) with a second-order Taylor back step.
DWState dwm_init(const VecField& phi0, const VecField& phi1, const MultiSpinorField& psi0, const Target& target);
// Start-up with a known previous map level.
DWState dwm_init_exact(const VecField& phi0, const VecField& phi_prev, const MultiSpinorField& psi0);

// Leapfrog predictor-corrector for the map, normalized onto the target; the spinor is parallel
// transported along characteristics by the rotation taking phi(t, x -/+ dx) to phi(t + dt, x).
// Requires dt == dx. Throws InstabilityError on non-finite values or constraint drift above 1e-6.
DWState dwm_step(const DWState& s, const Target& target);

struct DWRun {
    std::vector<DWLevel> levels;
    VecField phi_before;
    Target target;
    double dt = 0.0;
    double t0 = 0.0;
    double max_projection = 0.0;
    int size() const { return (int)levels.size(); }
    double time(int n) const { return t0 + n * dt; }
};

DWRun run_dwm(DWState s, const Target& target, int steps);

// Rotation of w taking the unit vector p to the unit vector q (identity on their orthogonal complement).
void transport_rotation(const double* p, const double* q, const cplx* w, cplx* out, int dim);

// psi(t, x) = psi1 + (t gamma_t + x gamma_x) psi2
Field<Spinor> twistor_field(const Grid& g, double t, const Spinor& psi1, const Spinor& psi2);
// Max over interior points of |nabla_X psi - 1/2 X.D psi| for X in {d_t, d_x}, and of |D psi - 2 psi2|.
struct TwistorDefect {
    double p_t = 0.0;
    double p_x = 0.0;
    double dirac = 0.0;
};
TwistorDefect twistor_defect(const Grid& g, double t, double dt, const Spinor& psi1, const Spinor& psi2);

// Geodesic wave map theta = a t + b x on S^2 with psi = gamma_t chi (x) phi_t - gamma_x chi (x) phi_x.
struct UncoupledSolution {
    Grid grid;
    double a = 0.0;
    double b = 0.0;
    Spinor chi1;
    Spinor chi2;

    VecField phi(double t) const;
    VecField phi_t(double t) const;
    VecField phi_x(double t) const;
    MultiSpinorField psi(double t) const;
    DWLevel level(double t) const;
};

// Residuals of both Euler-Lagrange equations at level n of sampled levels (needs n-1..n+1).
struct DWResidual {
    double map = 0.0;
    double spinor = 0.0;
};
DWResidual dwm_residuals(const std::vector<DWLevel>& levels, int n, double dt, const Target& target);

// Monitors at level n of a run; centered stencils.
VecField dw_phi_t(const DWRun& run, int n);
MultiSpinorField dw_psi_t(const DWRun& run, int n);
double dw_E1(const DWLevel& l);
// sigma weights the spinor contribution 1/2 Re<psi, i gamma_t nabla_t psi>.
double dw_energy(const DWRun& run, int n, double sigma = 1.0);
Field<double> dw_phi_energy_density(const DWRun& run, int n);
// e(phi) - (J_v - J_u)/2 with J = Im sum conj(w) d_x w; its box vanishes on solutions.
Field<double> dw_box_density(const DWRun& run, int n);
// e(phi) - Re<i gamma_t nabla_t psi, psi>, using the time derivative.
Field<double> dw_box_density_literal(const DWRun& run, int n);
Field<double> dw_box_residual(const DWRun& run, int n, bool literal = false);

struct StressTensor {
    Field<double> tt, tx, xx;
};
StressTensor dw_stress(const DWRun& run, int n, bool literal = false);
// (d_t T_tt - d_x T_xt, d_t T_tx - d_x T_xx) at level n; needs n-2..n+2.
std::pair<Field<double>, Field<double>> dw_stress_divergence(const DWRun& run, int n, bool literal = false);

double dw_E_psi_12(const DWRun& run, int n);
double dw_E_psi_14(const DWRun& run, int n);
double dw_E_phi_22(const DWRun& run, int n);
double dw_bound_psi_12(const DWRun& run, int n);
double dw_bound_phi_22(const DWRun& run, int n);
// int (|eta|^2_beta + |w|^2 + |dw|^2) dx for the differences of two runs at level n.
double dw_difference_norm(const DWRun& a, const DWRun& b, int n);

double sphere_defect(const DWLevel& l);
double tangency_defect(const DWLevel& l);

// Sigma in {+1, -1} giving the smaller E_DW drift along a run.
double calibrate_sigma(const DWRun& run);

// Pinned constant for differential-inequality audits, from the initial data.
double dw_audit_constant(const DWRun& run, double factor);

} // namespace d11
