#include "dirac11/clifford.hpp"

#include <cmath>

namespace d11 {

bool is_finite(const Spinor& s)
{
    return std::isfinite(s.u.real()) && std::isfinite(s.u.imag()) && std::isfinite(s.v.real()) &&
           std::isfinite(s.v.imag());
}

const CliffordRep& default_rep()
{
    static const CliffordRep rep = [] {
        CliffordRep r;
        r.gamma_t << 0, 1, 1, 0;
        r.gamma_x << 0, 1, -1, 0;
        r.pairing << 0, 1, 1, 0;
        return r;
    }();
    return rep;
}

Spinor mat_apply(const Mat2& m, const Spinor& s)
{
    return {m(0, 0) * s.u + m(0, 1) * s.v, m(1, 0) * s.u + m(1, 1) * s.v};
}

Mat2 clifford_matrix(TangentVector X, const CliffordRep& rep)
{
    return X.t * rep.gamma_t + X.x * rep.gamma_x;
}

Spinor clifford_mul(TangentVector X, const Spinor& psi, const CliffordRep& rep)
{
    return mat_apply(clifford_matrix(X, rep), psi);
}

cplx indef_product(const Spinor& xi, const Spinor& psi, const CliffordRep& rep)
{
    Spinor a = mat_apply(rep.pairing, xi);
    return std::conj(psi.u) * a.u + std::conj(psi.v) * a.v;
}

std::vector<std::string> validate_rep(const CliffordRep& rep, double tol)
{
    std::vector<std::string> bad;
    const Mat2 id = Mat2::Identity();
    auto close = [tol](const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff() <= tol; };
    const Mat2& gt = rep.gamma_t;
    const Mat2& gx = rep.gamma_x;
    const Mat2& A = rep.pairing;
    if (!close(gt * gt, id))
        bad.push_back("gamma_t_square");
    if (!close(gx * gx, -id))
        bad.push_back("gamma_x_square");
    if (!close(gt * gx + gx * gt, Mat2::Zero()))
        bad.push_back("anticommutation");
    if (!close(A.adjoint(), A))
        bad.push_back("pairing_hermitian");
    if (!close(A * gt, gt.adjoint() * A))
        bad.push_back("compatibility_t");
    if (!close(A * gx, gx.adjoint() * A))
        bad.push_back("compatibility_x");
    if (!close(A * gt, id))
        bad.push_back("normalization");
    return bad;
}

} // namespace d11
