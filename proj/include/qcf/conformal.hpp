#pragma once

#include <functional>

#include "qcf/field.hpp"
#include "qcf/geometry.hpp"

namespace qcf {

// Analytic map into the unit disk with evaluable derivative.
struct ConformalMap {
    DomainDescriptor source = DomainDescriptor::unit_disk();
    std::function<Complex(Complex)> value;
    std::function<Complex(Complex)> derivative;  // may be empty; complex FD fallback

    Complex operator()(Complex w) const { return value(w); }
    Complex deriv(Complex w) const {
        if (derivative) return derivative(w);
        const double h = 1e-6;
        return (value(w + h) - value(w - h)) / (2.0 * h);
    }
};

ConformalMap disk_identity();

// F(w) = (w-1)/(w+1) maps the right half-plane onto the unit disk.
ConformalMap halfplane_to_disk();

// F(w) = exp(-lambda w), lambda > 0, maps the right half-plane onto the
// punctured unit disk.
ConformalMap halfplane_to_punctured_disk(double lambda);

// Composite map of the annulus r < |w| < 1 (principal branch of log) into the
// unit disk; single-valued off the negative-real branch cut.
ConformalMap annulus_to_disk(double r);

// u(z) = log(8 |F'|^2 / (1 - |F|^2)^2): a solution of Laplacian u = e^u
// wherever F is analytic with F' != 0.
ScalarField liouville_transplant(const ConformalMap& F);

}  // namespace qcf
