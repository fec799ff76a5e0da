#pragma once

#include <cstdint>
#include <functional>

#include "qcf/exact_solutions.hpp"
#include "qcf/field.hpp"
#include "qcf/qc_atlas.hpp"
#include "qcf/tensor_beltrami.hpp"

namespace qcf {

struct SolveOptions {
    enum class Scheme { Picard, Newton };

    Scheme scheme = Scheme::Picard;
    double relaxation = 0.8;  // in (0,1]
    int max_iterations = 2000;
    // Linf bound on the discrete residual. The evaluation floor is about
    // |T| eps / h^2, so defaults much below 1e-9 stall at fine spacings.
    double tolerance = 1e-8;
    double h = 1.0 / 64.0;
    // Observes each iterate (active-node values in a fixed order), starting
    // with the initial one.
    std::function<void(int iteration, const std::vector<double>& values)> iterate_callback;
};

// Uniform Cartesian grid masked to an implicitly defined region (level > 0),
// with a continuous boundary-value closure. The unit-disk case uses
// level = rho^2 - |w|^2.
struct MaskedGridField {
    Rect window;
    double h = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values;
    std::vector<uint8_t> active;
    std::function<double(Complex)> level;
    std::function<double(Complex)> boundary_value;

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    Complex node(int i, int j) const { return {window.x0 + i * h, window.y0 + j * h}; }
    bool is_active(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny && active[idx(i, j)];
    }
    // Bilinear; reliable for points at distance >= h inside the region.
    double interpolate(Complex w) const;
    ScalarField field() const;
};

struct DiskSolveResult {
    MaskedGridField T;
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    bool diverged = false;
    std::vector<double> residual_history;
};

// Solves laplacian T = J f(T) on the disk |w| < rho with T = psi(theta) on the
// circle, via a Shortley-Weller 5-point stencil and a monotone fixed-shift
// Picard scheme (or Newton with line search).
DiskSolveResult solve_dirichlet(const ScalarField& J, const Nonlinearity& f,
                                const std::function<double(double)>& psi, double rho,
                                const SolveOptions& opts);

// General core over an implicit region; boundary data given on the zero level set.
DiskSolveResult solve_dirichlet_region(const Rect& window,
                                       const std::function<double(Complex)>& level,
                                       const ScalarField& J, const Nonlinearity& f,
                                       const std::function<double(Complex)>& boundary_value,
                                       const SolveOptions& opts);

// u(z) = T(omega(z)) with bilinear interpolation for grid-backed T.
ScalarField compose(const MaskedGridField& T, const PlanarMap& omega);
ScalarField compose(const ScalarField& T, const PlanarMap& omega);

// psi = phi o omega^{-1}.
std::function<double(Complex)> pullback_boundary(const std::function<double(Complex)>& phi,
                                                 const PlanarMap& omega);

struct FactorizeResult {
    PlanarMap omega;
    DiskSolveResult solve;
    ScalarField u;          // composed solution T(omega(z))
    double image_radius = 0.0;  // radius of the transplanted disk (disk pipeline)
};

// Full pipeline of the factorization: A -> mu -> atlas map -> transplanted
// Dirichlet solve -> composed solution, on the sub-disk |z| < rho. Supports
// tensors whose dilatation is radial (including constants k(|z|) z/conj z) or
// zero; other structures are rejected.
FactorizeResult factorize_disk(const ConductivityTensor& A, double rho, const Nonlinearity& f,
                               const std::function<double(Complex)>& phi,
                               const SolveOptions& opts);

// Same pipeline for x-only (or constant) dilatations on a rectangle window,
// transplanting to the sheared image region of the horizontal atlas map.
FactorizeResult factorize_rect(const ConductivityTensor& A, const Rect& window,
                               const Nonlinearity& f,
                               const std::function<double(Complex)>& phi,
                               const SolveOptions& opts);

}  // namespace qcf
