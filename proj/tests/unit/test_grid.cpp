#include "doctest.h"
#include "dirac11/synth.hpp"

#include <numbers>

using namespace d11;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;
}

TEST_CASE("grid construction")
{
    CHECK_THROWS_AS(Grid::make(1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make(1.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make(0.0, 64), std::invalid_argument);
    Grid g = Grid::make(2.0, 64);
    CHECK(g.dx == doctest::Approx(2.0 / 64));
    CHECK_THROWS_AS(Field<double>(g, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("shift round trips")
{
    Grid g = Grid::make(kTwoPi, 64);
    Field<Spinor> f = random_spinor_field(g, 2, 4, 1.0);
    CHECK(shift(f, 0) == f);
    CHECK(shift(shift(f, 5), -5) == f);
    CHECK(shift(f, 64) == f);
    CHECK(shift(f, 3)[3] == f[0]);
    CHECK(central_diff(shift(f, 7)) == shift(central_diff(f), 7));
}

TEST_CASE("central_diff is second order")
{
    auto err = [](int N) {
        Grid g = Grid::make(3.0, N);
        const double k = kTwoPi / 3.0;
        auto f = sample<double>(g, [&](double x) { return std::sin(k * x); });
        auto c = sample<cplx>(g, [&](double x) { return std::exp(cplx(0, k * x)); });
        auto df = central_diff(f);
        auto dc = central_diff(c);
        double e = 0.0, ec = 0.0;
        for (int i = 0; i < N; ++i) {
            e = std::max(e, std::abs(df[i] - k * std::cos(k * g.x(i))));
            ec = std::max(ec, std::abs(dc[i] - cplx(0, k) * c[i]));
        }
        return std::pair{e, ec};
    };
    auto [a, ac] = err(64);
    auto [b, bc] = err(128);
    CHECK(a / b >= 3.5);
    CHECK(a / b <= 4.5);
    CHECK(ac / bc >= 3.5);
    CHECK(ac / bc <= 4.5);
    Grid g = Grid::make(3.0, 32);
    CHECK(max_abs(central_diff(Field<double>(g, std::vector<double>(32, 2.5)))) == 0.0);
}

TEST_CASE("integrate")
{
    Grid g = Grid::make(5.0, 64);
    const double k = kTwoPi / 5.0;
    CHECK(integrate(Field<double>(g, std::vector<double>(64, 1.0))) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(std::abs(integrate(sample<double>(g, [&](double x) { return std::sin(k * x); }))) <= 1e-12 * 5.0);
    double s2 = integrate(sample<double>(g, [&](double x) { return std::pow(std::sin(k * x), 2); }));
    CHECK(std::abs(s2 - 2.5) <= 1e-10);
}

TEST_CASE("discrete integration by parts")
{
    Grid g = Grid::make(kTwoPi, 128);
    Rng rng(4);
    Trig a = random_trig(rng, g.L, 6, 1.0), b = random_trig(rng, g.L, 6, 1.0);
    auto f = sample<double>(g, a), h = sample<double>(g, b);
    auto prod = [&](const Field<double>& p, const Field<double>& q) {
        Field<double> o(g);
        for (int i = 0; i < g.N; ++i)
            o[i] = p[i] * q[i];
        return integrate(o);
    };
    CHECK(std::abs(prod(central_diff(f), h) + prod(f, central_diff(h))) <= 1e-12);
}

TEST_CASE("box_residual oracles")
{
    SUBCASE("linear in t, constant in x")
    {
        Grid g = Grid::make(1.0, 16);
        History<double> h{Field<double>(g, std::vector<double>(16, 1.0)), Field<double>(g, std::vector<double>(16, 1.5)),
                          Field<double>(g, std::vector<double>(16, 2.0)), 0.1};
        CHECK(max_abs(box_residual(h)) == 0.0);
    }
    auto travelling = [](int N) {
        Grid g = Grid::make(2.0, N);
        const double k = kTwoPi / 2.0, dt = g.dx / 2;
        auto lvl = [&](double t) { return sample<double>(g, [&](double x) { return std::sin(k * (x - t)); }); };
        return max_abs(box_residual(History<double>{lvl(-dt), lvl(0), lvl(dt), dt}));
    };
    double r = travelling(64) / travelling(128);
    CHECK(r == doctest::Approx(4.0).epsilon(0.1));
    auto standing = [](int N) {
        Grid g = Grid::make(2.0, N);
        const double k = kTwoPi / 2.0, w = 3.0, dt = g.dx / 2;
        auto lvl = [&](double t) {
            return sample<double>(g, [&](double x) { return std::sin(k * x) * std::cos(w * t); });
        };
        Field<double> rhs = sample<double>(g, [&](double x) { return (k * k - w * w) * std::sin(k * x); });
        return max_abs(box_residual(History<double>{lvl(-dt), lvl(0), lvl(dt), dt}, rhs));
    };
    CHECK(standing(64) / standing(128) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("synthetic data is deterministic and band limited")
{
    Grid g = Grid::make(kTwoPi, 64);
    CHECK(random_spinor_field(g, 9, 3, 0.5) == random_spinor_field(g, 9, 3, 0.5));
    CHECK_FALSE(random_spinor_field(g, 9, 3, 0.5) == random_spinor_field(g, 10, 3, 0.5));
    Rng rng(1);
    Trig t = random_trig(rng, 2.0, 3, 1.0);
    const double h = 1e-5;
    CHECK(t.derivative(0.3) == doctest::Approx((t(0.3 + h) - t(0.3 - h)) / (2 * h)).epsilon(1e-8));
    CHECK(t(0.3) == doctest::Approx(t(2.3)).epsilon(1e-13));
}
