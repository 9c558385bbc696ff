#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace d11 {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

// One fiber value of the spinor bundle over R^{1,1}.
struct Spinor {
    cplx u{};
    cplx v{};

    Spinor& operator+=(const Spinor& o) { u += o.u; v += o.v; return *this; }
    Spinor& operator-=(const Spinor& o) { u -= o.u; v -= o.v; return *this; }
    Spinor& operator*=(cplx s) { u *= s; v *= s; return *this; }
    Spinor& operator*=(double s) { u *= s; v *= s; return *this; }
    bool operator==(const Spinor&) const = default;
};

inline Spinor operator+(Spinor a, const Spinor& b) { return a += b; }
inline Spinor operator-(Spinor a, const Spinor& b) { return a -= b; }
inline Spinor operator-(const Spinor& a) { return {-a.u, -a.v}; }
inline Spinor operator*(cplx s, Spinor a) { return a *= s; }
inline Spinor operator*(Spinor a, cplx s) { return a *= s; }
inline Spinor operator*(double s, Spinor a) { return a *= s; }
inline Spinor operator*(Spinor a, double s) { return a *= s; }
inline Spinor operator/(Spinor a, double s) { return a *= (1.0 / s); }

bool is_finite(const Spinor& s);

struct TangentVector {
    double t = 0.0;
    double x = 0.0;
};

// g(X,Y) with signature (+,-).
inline double metric(TangentVector a, TangentVector b) { return a.t * b.t - a.x * b.x; }

struct CliffordRep {
    Mat2 gamma_t;
    Mat2 gamma_x;
    Mat2 pairing;
};

// gamma_t = [[0,1],[1,0]], gamma_x = [[0,1],[-1,0]], pairing = [[0,1],[1,0]].
const CliffordRep& default_rep();

Spinor mat_apply(const Mat2& m, const Spinor& s);
Mat2 clifford_matrix(TangentVector X, const CliffordRep& rep = default_rep());

Spinor clifford_mul(TangentVector X, const Spinor& psi, const CliffordRep& rep);
// Default-rep fast path.
inline Spinor clifford_mul(TangentVector X, const Spinor& psi)
{
    return {(X.t + X.x) * psi.v, (X.t - X.x) * psi.u};
}
inline Spinor gamma_t_mul(const Spinor& s) { return {s.v, s.u}; }
inline Spinor gamma_x_mul(const Spinor& s) { return {s.v, -s.u}; }

// <xi, psi> = psi^dagger A xi: linear in xi, antilinear in psi.
cplx indef_product(const Spinor& xi, const Spinor& psi, const CliffordRep& rep);
inline cplx indef_product(const Spinor& xi, const Spinor& psi)
{
    return std::conj(psi.u) * xi.v + std::conj(psi.v) * xi.u;
}

inline double beta_norm_sq(const Spinor& s) { return std::norm(s.u) + std::norm(s.v); }

// <d_x . psi, psi> = |v|^2 - |u|^2 in the default rep.
inline double chirality(const Spinor& s) { return std::norm(s.v) - std::norm(s.u); }

// Names of violated invariants, empty when the representation is admissible.
std::vector<std::string> validate_rep(const CliffordRep& rep, double tol = 1e-12);

} // namespace d11
