#pragma once

#include <functional>

#include "qcf/field.hpp"
#include "qcf/geometry.hpp"
#include "qcf/quadrature.hpp"
#include "qcf/tensor_beltrami.hpp"

namespace qcf {

// Right-hand side f(u) of the semilinear equation.
struct Nonlinearity {
    enum class Tag { Zero, Exp, Power, ExpScaled };

    Tag tag = Tag::Zero;
    double q = 0.0;  // Power exponent, in (0,1)
    double a = 1.0;  // ExpScaled rate

    static Nonlinearity zero() { return {Tag::Zero}; }
    static Nonlinearity exp() { return {Tag::Exp}; }
    // f(u) = u^q for u >= 0, 0 for u < 0 (dead-zone convention).
    static Nonlinearity power(double q);
    static Nonlinearity exp_scaled(double a) { return {Tag::ExpScaled, 0.0, a}; }

    double operator()(double u) const;
    double deriv(double u) const;
};

// Boundary blow-up solution of div(A grad u) = e^u on the unit disk for every
// radial volume-preserving tensor family, u(z) = log(8 / (1-|z|^2)^2).
double lb_disk(Complex z);
Vec2 lb_disk_grad(Complex z);
ScalarField lb_disk_field();

// Blow-up solution on the annulus r < |z| < 1.
double lb_annulus(Complex z, double r);
ScalarField lb_annulus_field(double r);

// Blow-up solution on the punctured disk 0 < |z| < 1 (r -> 0 limit of the annulus).
double lb_punctured_disk(Complex z);
ScalarField lb_punctured_disk_field();

// Blow-up solutions on the right half-plane, u = log(2/x^2) and the lambda family.
double halfplane_blowup_log(Complex z);
double halfplane_blowup_lambda(Complex z, double lambda);
ScalarField halfplane_blowup_log_field();
ScalarField halfplane_blowup_lambda_field(double lambda);

// Dead-zone solution of div(A grad u) = u^q, 0 < q < 1, for the x-only
// volume-preserving tensor family:
//   u = gamma (y - phi(x))^{2/(1-q)} above the free boundary y = phi(x), else 0,
// with phi(x) = -sign * int_0^x 2 nu / sqrt(1 - nu^2) dt, i.e. phi' = a12.
class DeadZoneSolution {
  public:
    DeadZoneSolution(double q, std::function<double(double)> nu, int sign,
                     const QuadratureSpec& quad = {});

    double gamma() const { return gamma_; }
    double exponent() const { return 2.0 / (1.0 - q_); }
    double free_boundary(double x) const;              // phi(x)
    double free_boundary_slope(double x) const;        // phi'(x) = a12(x)
    double value(Complex z) const;
    Vec2 gradient(Complex z) const;
    ScalarField field() const;
    TensorEntries tensor_at(double x) const;           // admissible A(x)
    ConductivityTensor tensor() const;

  private:
    double q_;
    std::function<double(double)> nu_;
    int sign_;
    QuadratureSpec quad_;
    double gamma_;
};

// Fundamental solution of u_t = a^2 div(A grad u) for radial volume-preserving
// tensors: u(z,t) = exp(-|z|^2/(4 a^2 t)) / (4 pi a^2 t).
double heat_kernel(Complex z, double t, double a);

enum class KellerOsserman { Satisfied, Violated, Inconclusive };

// Numerical test of convergence of int_{t0}^inf (int_0^t f)^{-1/2} dt under a
// doubling truncation schedule (sufficient case h = f).
KellerOsserman keller_osserman_check(const std::function<double(double)>& f, double t0);

}  // namespace qcf
