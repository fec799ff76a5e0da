#pragma once

#include <functional>

#include "qcf/geometry.hpp"
#include "qcf/quadrature.hpp"

namespace qcf {

// An evaluable quasiconformal map with analytic Jacobian data and, where the
// family admits one, a closed-route inverse.
struct PlanarMap {
    enum class Family { Identity, Radial, Horizontal, Vertical, LogSpiral };

    Family family = Family::Identity;
    DomainDescriptor domain = DomainDescriptor::plane();
    std::function<Complex(Complex)> forward;
    std::function<Mat2(Complex)> jacobian;
    std::function<double(Complex)> jacobian_det;
    std::function<Complex(Complex)> dilatation;  // declared mu(z)
    std::function<Complex(Complex)> inverse;     // may be empty

    Complex operator()(Complex z) const { return forward(z); }
    bool has_inverse() const { return static_cast<bool>(inverse); }
};

PlanarMap identity_map();

// omega(z) = (z/|z|) exp(-int_{|z|}^1 (1+k)/(1-k) dtau/tau) on the unit disk,
// normalized by omega(0) = 0, omega(1) = 1. k is evaluated on (0,1] only.
PlanarMap radial_map(std::function<Complex(double)> k, const QuadratureSpec& quad = {});

// omega(z) = phi(x) + iy with phi(x) = int_0^x (1+mu)/(1-mu) dt; fixes 0, i, infinity.
PlanarMap horizontal_map(std::function<Complex(double)> mu, const QuadratureSpec& quad = {});

// g(z) = x + i psi(y) with psi(y) = int_0^y (1-nu)/(1+nu) dt; fixes 0, 1, infinity.
PlanarMap vertical_map(std::function<Complex(double)> nu, const QuadratureSpec& quad = {});

// omega(z) = z exp(2i log|z|): volume-preserving self-map of the unit disk
// with dilatation (1+i)/2 * z/conj(z).
PlanarMap log_spiral_map();

// Central finite differences; O(h^2) for smooth families.
Mat2 numeric_jacobian(const PlanarMap& map, Complex z, double h = 1e-5);

// mu = omega_zbar / omega_z from finite differences; throws when |omega_z| is
// below 1e-12.
Complex numeric_dilatation(const PlanarMap& map, Complex z, double h = 1e-5);

// Jacobian matrix from the Wirtinger derivatives omega_z and omega_zbar.
Mat2 jacobian_from_wirtinger(Complex wz, Complex wzbar);

}  // namespace qcf
