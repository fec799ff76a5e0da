#pragma once

#include <functional>
#include <vector>

#include "qcf/geometry.hpp"

namespace qcf {

// Evaluable scalar field u(z), with an analytic gradient when available and a
// central-difference fallback otherwise.
struct ScalarField {
    std::function<double(Complex)> value;
    std::function<Vec2(Complex)> gradient;  // may be empty
    double fd_step = 1e-6;

    double operator()(Complex z) const { return value(z); }

    Vec2 grad(Complex z) const {
        if (gradient) return gradient(z);
        const double h = fd_step;
        return {(value(z + h) - value(z - h)) / (2.0 * h),
                (value(z + Complex(0.0, h)) - value(z - Complex(0.0, h))) / (2.0 * h)};
    }
};

// Uniform rectangle grid with bilinear interpolation.
struct RectGridField {
    Rect window;
    double h = 0.0;
    int nx = 0, ny = 0;               // node counts
    std::vector<double> values;       // row-major, index j*nx + i

    double at(int i, int j) const { return values[static_cast<size_t>(j) * nx + i]; }
    double& at(int i, int j) { return values[static_cast<size_t>(j) * nx + i]; }
    Complex node(int i, int j) const { return {window.x0 + i * h, window.y0 + j * h}; }

    double interpolate(Complex z) const;
    ScalarField field() const;
};

}  // namespace qcf
