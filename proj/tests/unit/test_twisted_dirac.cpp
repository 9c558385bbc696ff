#include "doctest.h"
#include "dirac11/linear_dirac.hpp"
#include "dirac11/monitors.hpp"
#include "dirac11/synth.hpp"
#include "dirac11/twisted_dirac.hpp"

#include <numbers>

using namespace d11;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double max_weitzenboeck(int N, const Connection& c, double amp)
{
    Grid g = Grid::make(kTwoPi, N);
    TwistedSpinorField psi0;
    for (int a = 0; a < c.r; ++a)
        psi0.push_back(random_spinor_field(g, 20 + a, 3, amp));
    TwistedRun run = run_twisted(psi0, c, 0.0, 8);
    return max_abs(weitzenboeck_defect(run, c, 4));
}

} // namespace

TEST_CASE("curvature")
{
    Grid g = Grid::make(kTwoPi, 32);
    CHECK(curvature_at(flat_connection(2), 0.3, 0.4).norm() == 0.0);

    Connection c = abelian_curved(0.5, 1, kTwoPi);
    // A_t = i a sin(kx): R = -d_x A_t = -i a k cos(kx).
    for (double x : {0.0, 0.7, 2.1}) {
        cplx expect(0, -0.5 * std::cos(x));
        CHECK(std::abs(curvature_at(c, 0.0, x)(0, 0) - expect) < 1e-13);
    }

    Connection nab = nonabelian_example(0.4, 1, kTwoPi, 1.3);
    MatR H(2, 2);
    H << 0.5, cplx(0.2, -0.1), cplx(0.2, 0.1), -0.3;
    auto f = [](double t, double x) { return std::sin(x) + 0.3 * t; };
    auto ft = [](double, double) { return 0.3; };
    auto fx = [](double, double x) { return std::cos(x); };
    Connection gauged = gauge_transform(nab, H, f, ft, fx);
    Eigen::ComplexEigenSolver<MatR> es(H);
    for (double t : {0.0, 0.9})
        for (double x : {0.2, 1.7, 4.0}) {
            MatR U = es.eigenvectors() *
                     (es.eigenvalues() * cplx(0, f(t, x))).array().exp().matrix().asDiagonal() *
                     es.eigenvectors().inverse();
            MatR expect = U * curvature_at(nab, t, x) * U.inverse();
            CHECK((curvature_at(gauged, t, x) - expect).norm() <= 1e-10);
        }
    (void)g;
}

TEST_CASE("flat rank one twisted step is the massive step")
{
    Grid g = Grid::make(kTwoPi, 64);
    Field<Spinor> psi = random_spinor_field(g, 2, 3, 1.0);
    TwistedSpinorField out = twisted_step({psi}, flat_connection(1), 0.7, 0.0, g.dx);
    Field<Spinor> ref = massive_step(psi, 0.7, g.dx);
    double d = 0.0;
    for (int i = 0; i < g.N; ++i)
        d = std::max(d, std::sqrt(beta_norm_sq(out[0][i] - ref[i])));
    CHECK(d <= 1e-14);
}

TEST_CASE("twisted E1 conservation on a curved connection")
{
    Grid g = Grid::make(kTwoPi, 64);
    Connection c = abelian_curved(0.5, 1, kTwoPi);
    for (double lambda : {0.0, 1.0}) {
        TwistedRun run = run_twisted({random_spinor_field(g, 3, 3, 0.5)}, c, lambda, 10 * g.N);
        double e0 = twisted_E1(run.levels.front());
        CHECK(std::abs(twisted_E1(run.levels.back()) - e0) <= 1e-10 * e0);
    }
}

TEST_CASE("Weitzenboeck defect is second order")
{
    CHECK(max_weitzenboeck(64, flat_connection(1), 0.5) <= 1e-9);
    Connection c = abelian_curved(0.5, 1, kTwoPi);
    CHECK(max_weitzenboeck(64, c, 0.5) / max_weitzenboeck(128, c, 0.5) == doctest::Approx(4.0).epsilon(0.15));
    CHECK(max_weitzenboeck(64, abelian_curved(0.5, 1, kTwoPi), 0.0) == 0.0);
}

TEST_CASE("tilde E3 audit and its negative control")
{
    Grid g = Grid::make(kTwoPi, 64);
    Connection c = abelian_curved(0.5, 1, kTwoPi);
    RunHistory h;
    h.model = "twisted";
    h.connection = c;
    h.twisted = run_twisted({random_spinor_field(g, 5, 3, 0.5)}, c, 0.0, 64);
    CHECK(audit(evaluate("tE3_audit", h)).pass);

    Rng rng(1);
    for (auto& lvl : h.twisted.levels)
        for (auto& s : lvl[0].values)
            s += Spinor{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK_FALSE(audit(evaluate("tE3_audit", h)).pass);
}
