#pragma once

#include <functional>

#include "dirac11/grid.hpp"

namespace d11 {

using MatR = Eigen::MatrixXcd;
using MatSampler = std::function<MatR(double t, double x)>;

// Metric connection d + A on the trivial rank-r bundle; A_t, A_x skew-Hermitian.
struct Connection {
    int r = 1;
    MatSampler A_t;
    MatSampler A_x;
    // Optional closed-form derivatives; finite differences are used when empty.
    MatSampler dt_A_x;
    MatSampler dx_A_t;
    bool time_independent = false;
};

Connection flat_connection(int r);
// A_t = i a sin(2 pi m x / L), A_x = 0.
Connection abelian_curved(double a, int mode, double L);
// Rank 2, time dependent: A_t = i a cos(w t) sin(k x) s1, A_x = i a cos(k x) s3.
Connection nonabelian_example(double a, int mode, double L, double w);
using ScalarSampler = std::function<double(double t, double x)>;
// Gauge transform A -> U A U^-1 - (dU) U^-1 with U = exp(i f(t,x) H), H Hermitian r x r.
Connection gauge_transform(const Connection& c, const MatR& H, ScalarSampler f, ScalarSampler f_t, ScalarSampler f_x);

// R(d_t, d_x) = d_t A_x - d_x A_t + [A_t, A_x]
MatR curvature_at(const Connection& c, double t, double x);
Field<MatR> curvature(const Connection& c, const Grid& g, double t);

using TwistedSpinorField = MultiSpinorField;

// Strang step of i D^F psi = lambda psi (lambda = 0 gives D^F psi = 0). The zero-order
// substeps are exact exponentials of skew-Hermitian generators, evaluated at (t, x_i)
// before transport and (t + dt, x_i) after it. Requires dt == dx.
class TwistedStepper {
public:
    TwistedStepper(const Connection& c, const Grid& g, double lambda);
    TwistedSpinorField step(const TwistedSpinorField& psi, double t) const;

private:
    std::vector<MatR> propagators(double t) const;

    Connection conn_;
    Grid grid_;
    double lambda_;
    double dt_;
    std::vector<MatR> fixed_;
};

TwistedSpinorField twisted_step(const TwistedSpinorField& psi, const Connection& c, double lambda, double t,
                                double dt);

Trajectory<Spinor> component(const std::vector<TwistedSpinorField>& levels, int a);

struct TwistedRun {
    std::vector<TwistedSpinorField> levels;
    double dt = 0.0;
    double t0 = 0.0;
    int size() const { return (int)levels.size(); }
    double time(int n) const { return t0 + n * dt; }
};

TwistedRun run_twisted(const TwistedSpinorField& psi0, const Connection& c, double lambda, int steps);

// Covariant derivatives at level n of a run.
TwistedSpinorField cov_dt(const TwistedRun& run, const Connection& c, int n);
TwistedSpinorField cov_dx(const TwistedSpinorField& f, const Connection& c, double t);

// (D^F)^2 psi - [nabla_t^2 psi - nabla_x^2 psi - gamma_t gamma_x R psi] at level n (needs n-2..n+2).
TwistedSpinorField weitzenboeck_defect(const TwistedRun& run, const Connection& c, int n);

double twisted_E1(const TwistedSpinorField& psi);
double twisted_E2(const TwistedRun& run, int n);
double twisted_E3(const TwistedRun& run, const Connection& c, int n);
double twisted_E4(const TwistedSpinorField& psi);
Field<double> twisted_density(const TwistedSpinorField& psi);

// Right-hand bound E3 + max|psi|^2_beta / 2 * int |R|^2 at level n.
double tilde_e3_bound(const TwistedRun& run, const Connection& c, int n);

double max_abs(const TwistedSpinorField& f);

} // namespace d11
