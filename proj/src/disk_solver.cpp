#include "qcf/disk_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

namespace qcf {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double bisect_crossing(const std::function<double(Complex)>& level, Complex inside,
                       Complex outside) {
    double lo = 0.0, hi = 1.0;  // level(inside) > 0 >= level(outside)
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (level(inside + mid * (outside - inside)) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct Discretization {
    MaskedGridField grid;
    std::vector<int> unknown;    // node -> unknown index, -1 if inactive
    std::vector<size_t> nodes;   // unknown -> node index
    SpMat L;                     // Delta_h restricted to unknowns
    Eigen::VectorXd b;           // boundary contributions: Delta_h T = L T + b
};

Discretization discretize(const Rect& window, double h,
                          const std::function<double(Complex)>& level,
                          const std::function<double(Complex)>& boundary_value) {
    Discretization d;
    MaskedGridField& g = d.grid;
    g.window = window;
    g.h = h;
    g.nx = static_cast<int>(std::round(window.width() / h)) + 1;
    g.ny = static_cast<int>(std::round(window.height() / h)) + 1;
    g.level = level;
    g.boundary_value = boundary_value;
    g.values.assign(static_cast<size_t>(g.nx) * g.ny, 0.0);
    g.active.assign(g.values.size(), 0);
    d.unknown.assign(g.values.size(), -1);

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (level(g.node(i, j)) > 0.0) {
                g.active[g.idx(i, j)] = 1;
                d.unknown[g.idx(i, j)] = static_cast<int>(d.nodes.size());
                d.nodes.push_back(g.idx(i, j));
            }

    const int n = static_cast<int>(d.nodes.size());
    d.b = Eigen::VectorXd::Zero(n);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(n) * 5);

    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int row = 0; row < n; ++row) {
        const size_t node = d.nodes[row];
        const int i = static_cast<int>(node % g.nx);
        const int j = static_cast<int>(node / g.nx);
        const Complex zp = g.node(i, j);

        double spacing[4];     // fraction of h toward each neighbor
        double bval[4];        // boundary value when the arm hits the boundary
        bool is_bdry[4];
        for (int a = 0; a < 4; ++a) {
            const int ni = i + di[a], nj = j + dj[a];
            if (g.is_active(ni, nj)) {
                spacing[a] = 1.0;
                is_bdry[a] = false;
                bval[a] = 0.0;
            } else {
                const Complex zn(zp.real() + di[a] * h, zp.imag() + dj[a] * h);
                double theta = bisect_crossing(level, zp, zn);
                theta = std::max(theta, 1e-6);  // avoid degenerate stencils
                spacing[a] = theta;
                is_bdry[a] = true;
                bval[a] = boundary_value(zp + theta * (zn - zp));
            }
        }
        double diag = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            const int ap = 2 * axis, am = 2 * axis + 1;
            const double hp = spacing[ap] * h, hm = spacing[am] * h;
            const double cp = 2.0 / (hp * (hp + hm));
            const double cm = 2.0 / (hm * (hp + hm));
            diag -= cp + cm;
            if (is_bdry[ap])
                d.b[row] += cp * bval[ap];
            else
                trips.emplace_back(row, d.unknown[g.idx(i + di[ap], j + dj[ap])], cp);
            if (is_bdry[am])
                d.b[row] += cm * bval[am];
            else
                trips.emplace_back(row, d.unknown[g.idx(i + di[am], j + dj[am])], cm);
        }
        trips.emplace_back(row, row, diag);
    }
    d.L.resize(n, n);
    d.L.setFromTriplets(trips.begin(), trips.end());
    return d;
}

// Fill inactive nodes next to the region with their nearest boundary value so
// that bilinear interpolation stays continuous up to the boundary.
void fill_boundary_collar(MaskedGridField& g) {
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.active[g.idx(i, j)]) continue;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int a = 0; a < 4; ++a) {
                if (!g.is_active(i + di[a], j + dj[a])) continue;
                const Complex zin = g.node(i + di[a], j + dj[a]);
                const Complex zout = g.node(i, j);
                const double theta = bisect_crossing(g.level, zin, zout);
                g.values[g.idx(i, j)] = g.boundary_value(zin + theta * (zout - zin));
                break;
            }
        }
}

}  // namespace

double MaskedGridField::interpolate(Complex w) const {
    const double fx = (w.real() - window.x0) / h;
    const double fy = (w.imag() - window.y0) / h;
    if (fx < -1e-9 || fy < -1e-9 || fx > nx - 1 + 1e-9 || fy > ny - 1 + 1e-9)
        throw std::domain_error("MaskedGridField: query outside grid hull");
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
    const double tx = fx - i, ty = fy - j;
    return (1.0 - tx) * (1.0 - ty) * values[idx(i, j)] + tx * (1.0 - ty) * values[idx(i + 1, j)] +
           (1.0 - tx) * ty * values[idx(i, j + 1)] + tx * ty * values[idx(i + 1, j + 1)];
}

ScalarField MaskedGridField::field() const {
    return {[g = *this](Complex w) { return g.interpolate(w); }, nullptr};
}

DiskSolveResult solve_dirichlet_region(const Rect& window,
                                       const std::function<double(Complex)>& level,
                                       const ScalarField& J, const Nonlinearity& f,
                                       const std::function<double(Complex)>& boundary_value,
                                       const SolveOptions& opts) {
    if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0))
        throw std::invalid_argument("solve_dirichlet: relaxation in (0,1]");
    if (opts.max_iterations < 1) throw std::invalid_argument("solve_dirichlet: max iterations >= 1");
    if (!(opts.tolerance > 0.0)) throw std::invalid_argument("solve_dirichlet: tolerance > 0");

    Discretization d = discretize(window, opts.h, level, boundary_value);
    const int n = static_cast<int>(d.nodes.size());
    if (n == 0) throw std::invalid_argument("solve_dirichlet: empty region");

    Eigen::VectorXd Jv(n);
    for (int row = 0; row < n; ++row) {
        const size_t node = d.nodes[row];
        Jv[row] = J(d.grid.node(static_cast<int>(node % d.grid.nx),
                                static_cast<int>(node / d.grid.nx)));
        if (!(Jv[row] >= 0.0))
            throw std::invalid_argument("solve_dirichlet: weight J must be >= 0");
    }

    Eigen::SparseLU<SpMat> lu;
    lu.compute(d.L);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve_dirichlet: Laplacian factorization failed");

    // Harmonic extension of the boundary data: the Picard starting point and
    // a discrete supersolution for f >= 0.
    Eigen::VectorXd T = lu.solve(-d.b);

    DiskSolveResult res;
    auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        Eigen::VectorXd r = d.L * v + d.b;
        for (int row = 0; row < n; ++row) r[row] -= Jv[row] * f(v[row]);
        return r;
    };

    Eigen::VectorXd r = residual(T);
    double rnorm = r.lpNorm<Eigen::Infinity>();
    res.residual_history.push_back(rnorm);
    auto observe = [&](int it, const Eigen::VectorXd& v) {
        if (opts.iterate_callback)
            opts.iterate_callback(it, std::vector<double>(v.data(), v.data() + v.size()));
    };
    observe(0, T);

    Eigen::VectorXd best = T;
    double best_norm = rnorm;
    int growth_streak = 0;

    if (f.tag != Nonlinearity::Tag::Zero) {
        // Fixed shift c >= J f'(T) keeps the Picard sweep monotone from the
        // harmonic-extension supersolution.
        double shift = 0.0;
        for (int row = 0; row < n; ++row) shift = std::max(shift, Jv[row] * f.deriv(T[row]));

        Eigen::SparseLU<SpMat> lu_shift;
        SpMat Ls = d.L;
        if (opts.scheme == SolveOptions::Scheme::Picard) {
            SpMat I(n, n);
            I.setIdentity();
            Ls = d.L - shift * I;
            lu_shift.compute(Ls);
            if (lu_shift.info() != Eigen::Success)
                throw std::runtime_error("solve_dirichlet: shifted factorization failed");
        }

        for (int it = 0; it < opts.max_iterations && rnorm > opts.tolerance; ++it) {
            Eigen::VectorXd delta;
            if (opts.scheme == SolveOptions::Scheme::Picard) {
                delta = lu_shift.solve(-r);
                T += opts.relaxation * delta;
                r = residual(T);
                rnorm = r.lpNorm<Eigen::Infinity>();
            } else {
                std::vector<Triplet> trips;
                for (int k = 0; k < d.L.outerSize(); ++k)
                    for (SpMat::InnerIterator itr(d.L, k); itr; ++itr)
                        trips.emplace_back(static_cast<int>(itr.row()),
                                           static_cast<int>(itr.col()), itr.value());
                for (int row = 0; row < n; ++row)
                    trips.emplace_back(row, row, -Jv[row] * f.deriv(T[row]));
                SpMat Jac(n, n);
                Jac.setFromTriplets(trips.begin(), trips.end());
                Eigen::SparseLU<SpMat> lu_newton;
                lu_newton.compute(Jac);
                if (lu_newton.info() != Eigen::Success)
                    throw std::runtime_error("solve_dirichlet: Newton factorization failed");
                delta = lu_newton.solve(-r);
                double alpha = opts.relaxation;
                for (int ls = 0; ls < 8; ++ls) {
                    Eigen::VectorXd cand = T + alpha * delta;
                    Eigen::VectorXd rc = residual(cand);
                    const double cn = rc.lpNorm<Eigen::Infinity>();
                    if (cn < rnorm || ls == 7) {
                        T = cand;
                        r = rc;
                        rnorm = cn;
                        break;
                    }
                    alpha *= 0.5;
                }
            }
            res.iterations = it + 1;
            res.residual_history.push_back(rnorm);
            observe(it + 1, T);
            if (rnorm < best_norm) {
                best_norm = rnorm;
                best = T;
                growth_streak = 0;
            } else if (++growth_streak >= 10) {
                res.diverged = true;
                break;
            }
        }
    }

    if (rnorm > best_norm) {
        T = best;
        rnorm = best_norm;
    }
    res.converged = rnorm <= opts.tolerance;
    res.final_residual = rnorm;

    res.T = d.grid;
    for (int row = 0; row < n; ++row) res.T.values[d.nodes[row]] = T[row];
    fill_boundary_collar(res.T);
    return res;
}

DiskSolveResult solve_dirichlet(const ScalarField& J, const Nonlinearity& f,
                                const std::function<double(double)>& psi, double rho,
                                const SolveOptions& opts) {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("solve_dirichlet: rho in (0,1]");
    const Rect window{-rho, rho, -rho, rho};
    auto level = [rho](Complex w) { return rho * rho - std::norm(w); };
    auto bval = [psi](Complex w) { return psi(std::arg(w)); };
    return solve_dirichlet_region(window, level, J, f, bval, opts);
}

ScalarField compose(const MaskedGridField& T, const PlanarMap& omega) {
    return {[T, fwd = omega.forward](Complex z) { return T.interpolate(fwd(z)); }, nullptr};
}

ScalarField compose(const ScalarField& T, const PlanarMap& omega) {
    return {[T, fwd = omega.forward](Complex z) { return T(fwd(z)); }, nullptr};
}

std::function<double(Complex)> pullback_boundary(const std::function<double(Complex)>& phi,
                                                 const PlanarMap& omega) {
    if (!omega.has_inverse())
        throw std::invalid_argument("pullback_boundary: map has no evaluable inverse");
    return [phi, inv = omega.inverse](Complex w) { return phi(inv(w)); };
}

FactorizeResult factorize_disk(const ConductivityTensor& A, double rho, const Nonlinearity& f,
                               const std::function<double(Complex)>& phi,
                               const SolveOptions& opts) {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("factorize: rho in (0,1]");

    FactorizeResult res;
    const FieldStructure structure = A.structure();
    bool is_identity = false;
    if (structure == FieldStructure::Constant) {
        if (std::abs(mu_from_tensor(A, Complex(0.25, 0.1))) < 1e-13)
            is_identity = true;
        else
            throw std::invalid_argument(
                "factorize_disk: constant anisotropic tensors transplant to non-disk regions; "
                "use factorize_rect");
    }

    if (is_identity) {
        res.omega = identity_map();
    } else if (structure == FieldStructure::Radial) {
        // by value: the returned map outlives the caller's tensor
        auto k = [A](double t) { return mu_from_tensor(A, Complex(t, 0.0)); };
        res.omega = radial_map(k);
    } else {
        throw std::invalid_argument("factorize_disk: no atlas family matches the tensor structure");
    }

    res.image_radius = std::abs(res.omega(Complex(rho, 0.0)));

    // Volume-preserving families have J == 1 exactly; otherwise evaluate
    // 1/J_omega at the inverse image.
    bool vol_preserving = true;
    for (double t : {0.15, 0.4, 0.65, 0.9}) {
        const Complex mu = res.omega.dilatation(Complex(t, 0.0));
        if (std::abs(mu.real() - std::norm(mu)) > 1e-12) vol_preserving = false;
    }
    ScalarField J;
    if (vol_preserving) {
        J = {[](Complex) { return 1.0; }, nullptr};
    } else {
        J = {[omega = res.omega](Complex w) { return 1.0 / omega.jacobian_det(omega.inverse(w)); },
             nullptr};
    }

    auto psi = pullback_boundary(phi, res.omega);
    res.solve = solve_dirichlet_region(
        {-res.image_radius, res.image_radius, -res.image_radius, res.image_radius},
        [r = res.image_radius](Complex w) { return r * r - std::norm(w); }, J, f, psi, opts);
    res.u = compose(res.solve.T, res.omega);
    return res;
}

FactorizeResult factorize_rect(const ConductivityTensor& A, const Rect& window,
                               const Nonlinearity& f,
                               const std::function<double(Complex)>& phi,
                               const SolveOptions& opts) {
    const FieldStructure structure = A.structure();
    if (structure != FieldStructure::XOnly && structure != FieldStructure::Constant)
        throw std::invalid_argument("factorize_rect: tensor dilatation must depend on x only");

    FactorizeResult res;
    auto mu = [A](double x) { return mu_from_tensor(A, Complex(x, 0.0)); };
    res.omega = horizontal_map(mu);

    bool vol_preserving = true;
    for (double x : {window.x0 + 0.1 * window.width(), window.x0 + 0.5 * window.width(),
                     window.x0 + 0.9 * window.width()}) {
        const Complex m = mu(x);
        if (std::abs(m.real() - std::norm(m)) > 1e-12) vol_preserving = false;
    }
    ScalarField J;
    if (vol_preserving) {
        J = {[](Complex) { return 1.0; }, nullptr};
    } else {
        J = {[omega = res.omega](Complex w) { return 1.0 / omega.jacobian_det(omega.inverse(w)); },
             nullptr};
    }

    // Image region: pull the query back through the inverse and test the window.
    auto inv = res.omega.inverse;
    auto level = [inv, window](Complex w) {
        const Complex z = inv(w);
        return std::min(std::min(z.real() - window.x0, window.x1 - z.real()),
                        std::min(z.imag() - window.y0, window.y1 - z.imag()));
    };
    // Bounding box of the image of the window corners and edge midpoints.
    Rect image{1e300, -1e300, 1e300, -1e300};
    for (double fx : {0.0, 0.5, 1.0})
        for (double fy : {0.0, 0.5, 1.0}) {
            const Complex w = res.omega(Complex(window.x0 + fx * window.width(),
                                                window.y0 + fy * window.height()));
            image.x0 = std::min(image.x0, w.real());
            image.x1 = std::max(image.x1, w.real());
            image.y0 = std::min(image.y0, w.imag());
            image.y1 = std::max(image.y1, w.imag());
        }

    auto psi = pullback_boundary(phi, res.omega);
    res.solve = solve_dirichlet_region(image, level, J, f, psi, opts);
    res.u = compose(res.solve.T, res.omega);
    return res;
}

}  // namespace qcf
