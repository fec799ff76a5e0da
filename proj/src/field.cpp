#include "qcf/field.hpp"

#include <cmath>

namespace qcf {

double RectGridField::interpolate(Complex z) const {
    const double fx = (z.real() - window.x0) / h;
    const double fy = (z.imag() - window.y0) / h;
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
    if (fx < -1e-12 || fy < -1e-12 || fx > nx - 1 + 1e-12 || fy > ny - 1 + 1e-12)
        throw std::domain_error("RectGridField: query outside grid hull");
    const double tx = fx - i, ty = fy - j;
    return (1.0 - tx) * (1.0 - ty) * at(i, j) + tx * (1.0 - ty) * at(i + 1, j) +
           (1.0 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

ScalarField RectGridField::field() const {
    return {[g = *this](Complex z) { return g.interpolate(z); }, nullptr};
}

}  // namespace qcf
