#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcf/exact_solutions.hpp"
#include "qcf/field.hpp"
#include "qcf/geometry.hpp"
#include "qcf/qc_atlas.hpp"
#include "qcf/tensor_beltrami.hpp"

namespace qcf {

enum class ExecutionPolicy { Serial, Parallel };

// Uniform sampling grid restricted to the domain interior. Points within
// `margin` of the boundary, or of the declared singular set, are excluded.
struct GridSpec {
    DomainDescriptor domain = DomainDescriptor::unit_disk();
    double h = 1.0 / 64.0;
    double margin = 0.1;
    std::optional<Rect> window;  // required for unbounded domains
    std::function<double(Complex)> singular_distance;  // optional extra exclusion

    Rect sampling_window() const;
    std::vector<Complex> interior_points() const;
};

struct WorstPoint {
    Complex z;
    double value = 0.0;
};

struct ResidualReport {
    std::string problem_id;
    double h = 0.0;
    double margin = 0.0;
    double linf = 0.0;
    double l2 = 0.0;  // discrete L2: sqrt(h^2 sum r^2)
    size_t sample_count = 0;
    std::vector<WorstPoint> worst;                     // up to 5, largest first
    std::vector<std::pair<Complex, double>> samples;   // per-point residuals
    std::optional<double> order;
    bool order_warning = false;
};

// Residual of the conservative central-difference divergence D_h(A grad u)
// minus f(u). Fluxes use face-centered differences of u with A averaged from
// the face endpoints; exact on affine u with constant A.
ResidualReport strong_residual(const ScalarField& u, const ConductivityTensor& A,
                               const Nonlinearity& f, const GridSpec& grid,
                               ExecutionPolicy policy = ExecutionPolicy::Parallel,
                               const std::string& problem_id = "strong");

// 5-point Laplacian of T minus J(w) f(T(w)).
ResidualReport laplace_residual(const ScalarField& T, const ScalarField& J,
                                const Nonlinearity& f, const GridSpec& grid,
                                ExecutionPolicy policy = ExecutionPolicy::Parallel,
                                const std::string& problem_id = "laplace");

// Residual of the centered time difference minus a^2 D_h(A grad u) minus f(u),
// with time step equal to the grid spacing.
ResidualReport heat_residual(const std::function<double(Complex, double)>& u,
                             const ConductivityTensor& A, double a, const Nonlinearity& f,
                             const GridSpec& grid, const std::vector<double>& times,
                             ExecutionPolicy policy = ExecutionPolicy::Parallel,
                             const std::string& problem_id = "heat");

// Smooth compactly supported profile (1-|s|^2)^3 on |s| < 1.
struct TestBump {
    Complex center;
    double radius = 0.0;

    double value(Complex z) const;
    Vec2 gradient(Complex z) const;
};

struct WeakResidual {
    double value = 0.0;  // W(phi)
    double scale = 0.0;  // integral of the absolute integrands
};

// W(phi) = int <A grad u, grad phi> + int f(u) phi over the bump support,
// midpoint tensor-product quadrature at spacing grid.h.
std::vector<WeakResidual> weak_residual(const ScalarField& u, const ConductivityTensor& A,
                                        const Nonlinearity& f, const std::vector<TestBump>& bumps,
                                        const GridSpec& grid,
                                        ExecutionPolicy policy = ExecutionPolicy::Parallel);

struct IdentityDefect {
    double lhs = 0.0;
    double rhs = 0.0;
    double defect = 0.0;
    double scale = 0.0;
};

// Both sides of the weak factorization identity, quadrature-evaluated by
// independent rules (midpoint vs trapezoid); checks first that omega and A
// agree (dilatation mismatch <= 1e-3) and throws otherwise.
std::vector<IdentityDefect> factorization_identity_check(
    const ScalarField& T, const PlanarMap& omega, const ConductivityTensor& A,
    const std::vector<TestBump>& bumps, const GridSpec& grid,
    ExecutionPolicy policy = ExecutionPolicy::Parallel);

struct StreamFunctionResult {
    RectGridField v;
    double max_loop_defect = 0.0;  // worst circulation of H A grad u over sampled rectangles
    double scale = 0.0;            // max |H A grad u| over the grid
};

// Conjugate function v with grad v = H A grad u, reconstructed by trapezoid
// path integration over the grid window from the base point. Large loop
// defects signal that u is not a homogeneous solution.
StreamFunctionResult stream_function(const ScalarField& u, const ConductivityTensor& A,
                                     const GridSpec& grid, Complex base,
                                     int loop_samples = 10, unsigned seed = 1234);

struct OrderEstimate {
    double order = 0.0;
    bool warning = false;  // residuals not monotonically decreasing
};

// Least-squares slope of log(Linf) vs log(h); requires >= 3 reports.
OrderEstimate convergence_order(const std::vector<ResidualReport>& reports);

}  // namespace qcf
