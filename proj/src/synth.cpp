#include "dirac11/synth.hpp"

#include <numbers>

namespace d11 {

double Trig::operator()(double x) const
{
    const double k0 = 2.0 * std::numbers::pi / L;
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * std::cos(k0 * k * x) + b[k] * std::sin(k0 * k * x);
    return s;
}

double Trig::derivative(double x) const
{
    const double k0 = 2.0 * std::numbers::pi / L;
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += k0 * k * (b[k] * std::cos(k0 * k * x) - a[k] * std::sin(k0 * k * x));
    return s;
}

Trig random_trig(Rng& rng, double L, int max_mode, double amp)
{
    Trig t;
    t.L = L;
    for (int k = 0; k <= max_mode; ++k) {
        t.a.push_back(rng.uniform(-amp, amp) / (1.0 + k));
        t.b.push_back(k == 0 ? 0.0 : rng.uniform(-amp, amp) / (1.0 + k));
    }
    return t;
}

SpinorSynth random_spinor_synth(Rng& rng, double L, int max_mode, double amp)
{
    SpinorSynth s;
    s.ur = random_trig(rng, L, max_mode, amp);
    s.ui = random_trig(rng, L, max_mode, amp);
    s.vr = random_trig(rng, L, max_mode, amp);
    s.vi = random_trig(rng, L, max_mode, amp);
    return s;
}

Field<Spinor> random_spinor_field(const Grid& g, std::uint64_t seed, int max_mode, double amp)
{
    Rng rng(seed);
    SpinorSynth s = random_spinor_synth(rng, g.L, max_mode, amp);
    return sample<Spinor>(g, s);
}

} // namespace d11
