#pragma once

#include <functional>

#include "qcf/geometry.hpp"

namespace qcf {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 48;
};

// Adaptive Gauss-Kronrod (G7,K15) panel subdivision for complex-valued
// integrands on a finite interval. Throws std::runtime_error when the
// tolerance cannot be reached within max_depth.
Complex integrate(const std::function<Complex(double)>& f, double a, double b,
                  const QuadratureSpec& spec = {});

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureSpec& spec = {});

}  // namespace qcf
