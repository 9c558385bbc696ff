#include "doctest.h"
#include "dirac11/errors.hpp"
#include "dirac11/linear_dirac.hpp"
#include "dirac11/synth.hpp"
#include "dirac11/thirring.hpp"

#include <numbers>

using namespace d11;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double max_diff(const Field<Spinor>& a, const Field<Spinor>& b)
{
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i)
        d = std::max(d, std::sqrt(beta_norm_sq(a[i] - b[i])));
    return d;
}

} // namespace

TEST_CASE("right side")
{
    Rng rng(2);
    for (int k = 0; k < 200; ++k) {
        Spinor s{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        Spinor lin = thirring_rhs_point(s, 0.8, 0.0);
        CHECK(std::sqrt(beta_norm_sq(lin - 0.8 * s)) < 1e-15);
        Spinor geo = thirring_rhs_geometric(s, 0.8, 1.7), pt = thirring_rhs_point(s, 0.8, 1.7);
        CHECK(std::sqrt(beta_norm_sq(geo - pt)) < 1e-13);
        CHECK(std::abs(indef_product(pt, s).imag()) < 1e-14);
    }
    Spinor up = thirring_rhs_point(Spinor{1.0, 0.0}, 0.0, 1.0);
    CHECK(up == Spinor{});
}

TEST_CASE("kappa = 0 reduces to the linear scheme")
{
    Grid g = Grid::make(kTwoPi, 64);
    Field<Spinor> psi = random_spinor_field(g, 3, 3, 1.0);
    CHECK(max_diff(thirring_step(psi, 1.2, 0.0, g.dx), massive_step(psi, 1.2, g.dx)) <= 1e-12);
    // The midpoint substep only approximates the rotation.
    double d = max_diff(thirring_step(psi, 1.2, 0.0, g.dx, ThirringIntegrator::midpoint), massive_step(psi, 1.2, g.dx));
    CHECK(d <= 1e-3);
}

TEST_CASE("split local step preserves the beta norm")
{
    Spinor s{{0.4, 0.9}, {-0.3, 0.2}};
    Spinor r = thirring_local(s, 1.0, 2.0, 0.1, ThirringIntegrator::split);
    CHECK(beta_norm_sq(r) == doctest::Approx(beta_norm_sq(s)).epsilon(1e-15));
    auto mid = [&](double tau) {
        return std::abs(beta_norm_sq(thirring_local(s, 1.0, 2.0, tau, ThirringIntegrator::midpoint)) - beta_norm_sq(s));
    };
    CHECK(mid(0.1) / mid(0.05) >= 12.0);
}

TEST_CASE("right mover with v = 0 is transported exactly")
{
    Grid g = Grid::make(kTwoPi, 64);
    Field<Spinor> psi = map_field(random_spinor_field(g, 4, 3, 1.0), [](const Spinor& s) { return Spinor{s.u, 0.0}; });
    CHECK(max_diff(thirring_step(psi, 0.0, 1.0, g.dx), shift(psi, 1)) <= 1e-15);
}

TEST_CASE("E1 drift converges")
{
    auto drift = [](int N, ThirringIntegrator integ) {
        Grid g = Grid::make(kTwoPi, N);
        Trajectory<Spinor> tr =
            run_thirring({g, 1.0, 1.0, {}, integ, random_spinor_field(g, 7, 3, 0.5)}, (int)std::llround(10.0 / g.dx));
        double e0 = thirring_E1(tr.levels.front()), m = 0.0;
        for (const auto& l : tr.levels)
            m = std::max(m, std::abs(thirring_E1(l) - e0) / e0);
        return m;
    };
    CHECK(drift(256, ThirringIntegrator::split) <= 1e-12);
    double c = drift(256, ThirringIntegrator::midpoint), f = drift(512, ThirringIntegrator::midpoint);
    CHECK(drift(512, ThirringIntegrator::split) <= 1e-6);
    CHECK(c / f >= 4.0);
}

TEST_CASE("scaling check")
{
    Grid g = Grid::make(kTwoPi, 64);
    Field<Spinor> psi = random_spinor_field(g, 5, 2, 0.5);
    CHECK(scaling_check(psi, 1.0, 16 * g.dx, 0.0, 1.0) == 0.0);
    CHECK(scaling_check(psi, 2.0, 16 * g.dx, 0.0, 1.0) < 1e-10);
    CHECK(scaling_check(psi, 2.0, 16 * g.dx, 1.0, 1.0) > 1e-3);
}

TEST_CASE("perturbation growth")
{
    Grid g = Grid::make(kTwoPi, 64);
    Field<Spinor> psi = random_spinor_field(g, 5, 3, 0.5);
    for (double v : perturbation_growth(psi, Field<Spinor>(g), 32 * g.dx, 1.0, 1.0))
        CHECK(v == 0.0);
    std::vector<double> flat = perturbation_growth(psi, random_spinor_field(g, 6, 3, 1e-3), 32 * g.dx, 1.0, 0.0);
    for (double v : flat)
        CHECK(std::abs(v - flat[0]) <= 1e-10 * flat[0]);
}

TEST_CASE("massless identities hold exactly on the CFL = 1 scheme")
{
    Grid g = Grid::make(kTwoPi, 128);
    Trajectory<Spinor> tr = run_thirring({g, 0.0, 1.0, {}, ThirringIntegrator::split, random_spinor_field(g, 7, 3, 0.5)}, 4);
    CHECK(max_abs(thirring_mt_residual(tr, 2, 0.0)) <= 1e-12);
    CHECK(max_abs(thirring_box_residual(tr, 2, 0.0)) <= 1e-9);
}

TEST_CASE("blow-up is reported as instability")
{
    Grid g = Grid::make(kTwoPi, 64);
    ThirringProblem p{g, 0.0, 1e308, {}, ThirringIntegrator::split, random_spinor_field(g, 1, 8, 100.0)};
    CHECK_THROWS_AS(run_thirring(p, 16), InstabilityError);
}
