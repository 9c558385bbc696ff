#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dirac11/clifford.hpp"

namespace d11 {

struct Grid {
    double L = 0.0;
    int N = 0;
    double dx = 0.0;

    // Throws std::invalid_argument unless L > 0 and N is even and >= 8.
    static Grid make(double L, int N);
    double x(int i) const { return i * dx; }
    bool operator==(const Grid& o) const { return L == o.L && N == o.N; }
};

inline double magnitude(double a) { return std::abs(a); }
inline double magnitude(cplx a) { return std::abs(a); }
inline double magnitude(const Spinor& s) { return std::sqrt(beta_norm_sq(s)); }

inline bool finite_value(double a) { return std::isfinite(a); }
inline bool finite_value(cplx a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }
inline bool finite_value(const Spinor& s) { return is_finite(s); }

template <class V>
struct Field {
    Grid grid;
    std::vector<V> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.N, V{}) {}
    Field(const Grid& g, std::vector<V> vals) : grid(g), values(std::move(vals))
    {
        if ((int)values.size() != g.N)
            throw std::invalid_argument("field size does not match grid");
    }

    int size() const { return grid.N; }
    V& operator[](int i) { return values[i]; }
    const V& operator[](int i) const { return values[i]; }
    // Periodic access.
    const V& at(int i) const
    {
        int n = grid.N;
        return values[((i % n) + n) % n];
    }
    bool operator==(const Field& o) const { return grid == o.grid && values == o.values; }
};

template <class V>
struct History {
    Field<V> prev;
    Field<V> cur;
    Field<V> next;
    double dt = 0.0;
};

// Consecutive time levels t0 + n dt.
template <class V>
struct Trajectory {
    std::vector<Field<V>> levels;
    double dt = 0.0;
    double t0 = 0.0;

    int size() const { return (int)levels.size(); }
    double time(int n) const { return t0 + n * dt; }
    History<V> history(int n) const { return {levels.at(n - 1), levels.at(n), levels.at(n + 1), dt}; }
};

template <class V, class F>
auto map_field(const Field<V>& f, F fn)
{
    using R = decltype(fn(f[0]));
    Field<R> out(f.grid);
    for (int i = 0; i < f.size(); ++i)
        out[i] = fn(f[i]);
    return out;
}

template <class V>
bool all_finite(const Field<V>& f)
{
    for (const auto& v : f.values)
        if (!finite_value(v))
            return false;
    return true;
}

// out[i] = f[(i - cells) mod N]
template <class V>
Field<V> shift(const Field<V>& f, int cells)
{
    const int n = f.size();
    Field<V> out(f.grid);
    int s = ((cells % n) + n) % n;
    for (int i = 0; i < n; ++i) {
        int j = i - s;
        out[i] = f[j < 0 ? j + n : j];
    }
    return out;
}

template <class V>
Field<V> central_diff(const Field<V>& f)
{
    const int n = f.size();
    const double c = 1.0 / (2.0 * f.grid.dx);
    Field<V> out(f.grid);
    for (int i = 0; i < n; ++i) {
        int ip = i + 1 == n ? 0 : i + 1;
        int im = i == 0 ? n - 1 : i - 1;
        out[i] = (f[ip] - f[im]) * c;
    }
    return out;
}

// (f[i+1] - 2 f[i] + f[i-1]) / dx^2
template <class V>
Field<V> second_diff(const Field<V>& f)
{
    const int n = f.size();
    const double c = 1.0 / (f.grid.dx * f.grid.dx);
    Field<V> out(f.grid);
    for (int i = 0; i < n; ++i) {
        int ip = i + 1 == n ? 0 : i + 1;
        int im = i == 0 ? n - 1 : i - 1;
        out[i] = (f[ip] - f[i] * 2.0 + f[im]) * c;
    }
    return out;
}

template <class V>
Field<V> axpy(const Field<V>& a, double s, const Field<V>& b)
{
    Field<V> out(a.grid);
    for (int i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i] * s;
    return out;
}

// (next - prev) / (2 dt) at the middle level.
template <class V>
Field<V> time_diff(const History<V>& h)
{
    Field<V> out(h.cur.grid);
    const double c = 1.0 / (2.0 * h.dt);
    for (int i = 0; i < out.size(); ++i)
        out[i] = (h.next[i] - h.prev[i]) * c;
    return out;
}

template <class V>
Field<V> box_residual(const History<V>& h, const Field<V>& rhs)
{
    const int n = h.cur.size();
    const double ct = 1.0 / (h.dt * h.dt);
    const double cx = 1.0 / (h.cur.grid.dx * h.cur.grid.dx);
    Field<V> out(h.cur.grid);
    for (int i = 0; i < n; ++i) {
        int ip = i + 1 == n ? 0 : i + 1;
        int im = i == 0 ? n - 1 : i - 1;
        out[i] = (h.next[i] - h.cur[i] * 2.0 + h.prev[i]) * ct - (h.cur[ip] - h.cur[i] * 2.0 + h.cur[im]) * cx -
                 rhs[i];
    }
    return out;
}

template <class V>
Field<V> box_residual(const History<V>& h)
{
    return box_residual(h, Field<V>(h.cur.grid));
}

// Rectangle rule dx * sum f[i].
double integrate(const Field<double>& f);

template <class V>
double max_abs(const Field<V>& f)
{
    double m = 0.0;
    for (const auto& v : f.values)
        m = std::max(m, magnitude(v));
    return m;
}

// sqrt(dx * sum |f[i]|^2)
template <class V>
double l2_norm(const Field<V>& f)
{
    double s = 0.0;
    for (const auto& v : f.values) {
        double a = magnitude(v);
        s += a * a;
    }
    return std::sqrt(s * f.grid.dx);
}

template <class V>
Field<V> sample(const Grid& g, auto&& fn)
{
    Field<V> out(g);
    for (int i = 0; i < g.N; ++i)
        out[i] = fn(g.x(i));
    return out;
}

// Component-wise containers for r- or q-component spinors and q-vectors.
using MultiSpinorField = std::vector<Field<Spinor>>;
using VecField = std::vector<Field<double>>;

} // namespace d11
