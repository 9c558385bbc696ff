#pragma once

#include <cstdint>
#include <random>

#include "dirac11/grid.hpp"

namespace d11 {

// Portable uniform doubles: the standard distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
    std::mt19937_64 eng_;
};

// Random trigonometric polynomial with modes 0..max_mode; coefficient of mode k
// is drawn from [-amp, amp] / (1 + k).
struct Trig {
    double L = 1.0;
    std::vector<double> a, b;
    double operator()(double x) const;
    double derivative(double x) const;
};

Trig random_trig(Rng& rng, double L, int max_mode, double amp);

struct SpinorSynth {
    Trig ur, ui, vr, vi;
    Spinor operator()(double x) const { return {{ur(x), ui(x)}, {vr(x), vi(x)}}; }
};

SpinorSynth random_spinor_synth(Rng& rng, double L, int max_mode, double amp);
Field<Spinor> random_spinor_field(const Grid& g, std::uint64_t seed, int max_mode, double amp);

} // namespace d11
