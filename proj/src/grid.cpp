#include "dirac11/grid.hpp"

#include <string>

namespace d11 {

Grid Grid::make(double L, int N)
{
    if (!(L > 0.0) || !std::isfinite(L))
        throw std::invalid_argument("grid length must be positive, got " + std::to_string(L));
    if (N < 8 || N % 2 != 0)
        throw std::invalid_argument("grid cell count must be even and >= 8, got " + std::to_string(N));
    return Grid{L, N, L / N};
}

double integrate(const Field<double>& f)
{
    double s = 0.0;
    for (double v : f.values)
        s += v;
    return s * f.grid.dx;
}

} // namespace d11
