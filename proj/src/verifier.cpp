#include "qcf/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcf {

namespace {

template <typename Fn>
std::vector<double> map_points(const std::vector<Complex>& pts, const Fn& fn,
                               ExecutionPolicy policy) {
    std::vector<double> out(pts.size());
    const long n = static_cast<long>(pts.size());
    if (policy == ExecutionPolicy::Parallel) {
#ifdef QCF_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long i = 0; i < n; ++i) out[i] = fn(pts[i]);
    } else {
        for (long i = 0; i < n; ++i) out[i] = fn(pts[i]);
    }
    return out;
}

// Deterministic reduction: fixed iteration order, lexicographic argmax ties.
ResidualReport assemble_report(std::string id, const GridSpec& grid,
                               const std::vector<Complex>& pts, std::vector<double> residuals) {
    for (size_t i = 0; i < residuals.size(); ++i) {
        if (!std::isfinite(residuals[i])) {
            std::ostringstream msg;
            msg << id << ": non-finite residual at (" << pts[i].real() << ", " << pts[i].imag()
                << ")";
            throw std::runtime_error(msg.str());
        }
    }
    ResidualReport rep;
    rep.problem_id = std::move(id);
    rep.h = grid.h;
    rep.margin = grid.margin;
    rep.sample_count = pts.size();
    double sq = 0.0;
    for (size_t i = 0; i < residuals.size(); ++i) {
        const double a = std::abs(residuals[i]);
        if (a > rep.linf) rep.linf = a;
        sq += residuals[i] * residuals[i];
        rep.samples.emplace_back(pts[i], residuals[i]);
    }
    rep.l2 = std::sqrt(grid.h * grid.h * sq);
    std::vector<size_t> idx(pts.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return std::abs(residuals[a]) > std::abs(residuals[b]);
    });
    for (size_t i = 0; i < std::min<size_t>(5, idx.size()); ++i)
        rep.worst.push_back({pts[idx[i]], residuals[idx[i]]});
    return rep;
}

struct FaceFlux {
    const ScalarField& u;
    const ConductivityTensor& A;
    double h;

    // Conservative divergence of A grad u at z: centered differences of
    // face-centered fluxes, A averaged from the face endpoints.
    double divergence(Complex z) const {
        const Complex ih(0.0, 1.0);
        auto avg = [](const TensorEntries& a, const TensorEntries& b) {
            return TensorEntries{0.5 * (a.a11 + b.a11), 0.5 * (a.a12 + b.a12),
                                 0.5 * (a.a22 + b.a22)};
        };
        const TensorEntries Ac = A.at(z);
        const double uc = u(z);

        auto xflux = [&](double sgn) {
            const Complex zn = z + sgn * h;
            const Complex face = z + sgn * 0.5 * h;
            const TensorEntries Af = avg(Ac, A.at(zn));
            const double ux = sgn * (u(zn) - uc) / h;
            const double uy = (u(face + ih * h) - u(face - ih * h)) / (2.0 * h);
            return Af.a11 * ux + Af.a12 * uy;
        };
        auto yflux = [&](double sgn) {
            const Complex zn = z + sgn * ih * h;
            const Complex face = z + sgn * 0.5 * ih * h;
            const TensorEntries Af = avg(Ac, A.at(zn));
            const double uy = sgn * (u(zn) - uc) / h;
            const double ux = (u(face + h) - u(face - h)) / (2.0 * h);
            return Af.a12 * ux + Af.a22 * uy;
        };
        return (xflux(1.0) - xflux(-1.0)) / h + (yflux(1.0) - yflux(-1.0)) / h;
    }
};

}  // namespace

Rect GridSpec::sampling_window() const {
    if (window) return *window;
    switch (domain.kind) {
        case DomainDescriptor::Kind::UnitDisk:
        case DomainDescriptor::Kind::Annulus:
        case DomainDescriptor::Kind::PuncturedDisk:
            return {-1.0, 1.0, -1.0, 1.0};
        default:
            throw std::invalid_argument("GridSpec: unbounded domain requires an explicit window");
    }
}

std::vector<Complex> GridSpec::interior_points() const {
    if (!(h > 0.0)) throw std::invalid_argument("GridSpec: h must be positive");
    if (margin < 2.0 * h) throw std::invalid_argument("GridSpec: margin must be >= 2h");
    const Rect w = sampling_window();
    const int nx = static_cast<int>(std::round(w.width() / h));
    const int ny = static_cast<int>(std::round(w.height() / h));
    std::vector<Complex> pts;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const Complex z(w.x0 + i * h, w.y0 + j * h);
            if (!domain.contains(z)) continue;
            if (domain.boundary_distance(z) < margin) continue;
            if (singular_distance && singular_distance(z) < margin) continue;
            pts.push_back(z);
        }
    }
    return pts;
}

ResidualReport strong_residual(const ScalarField& u, const ConductivityTensor& A,
                               const Nonlinearity& f, const GridSpec& grid,
                               ExecutionPolicy policy, const std::string& problem_id) {
    const auto pts = grid.interior_points();
    const FaceFlux flux{u, A, grid.h};
    auto residuals = map_points(
        pts, [&](Complex z) { return flux.divergence(z) - f(u(z)); }, policy);
    return assemble_report(problem_id, grid, pts, std::move(residuals));
}

ResidualReport laplace_residual(const ScalarField& T, const ScalarField& J,
                                const Nonlinearity& f, const GridSpec& grid,
                                ExecutionPolicy policy, const std::string& problem_id) {
    const auto pts = grid.interior_points();
    const double h = grid.h;
    auto residuals = map_points(
        pts,
        [&](Complex z) {
            const Complex ih(0.0, 1.0);
            const double lap = (T(z + h) + T(z - h) + T(z + ih * h) + T(z - ih * h) -
                                4.0 * T(z)) / (h * h);
            return lap - J(z) * f(T(z));
        },
        policy);
    return assemble_report(problem_id, grid, pts, std::move(residuals));
}

ResidualReport heat_residual(const std::function<double(Complex, double)>& u,
                             const ConductivityTensor& A, double a, const Nonlinearity& f,
                             const GridSpec& grid, const std::vector<double>& times,
                             ExecutionPolicy policy, const std::string& problem_id) {
    const auto space = grid.interior_points();
    const double h = grid.h;
    const double dt = h;  // joint refinement in (h, dt)
    std::vector<Complex> pts;
    std::vector<double> residuals;
    for (double t : times) {
        if (!(t - dt > 0.0)) throw std::invalid_argument("heat_residual: t - dt must stay > 0");
        ScalarField ut{[&u, t](Complex z) { return u(z, t); }, nullptr};
        const FaceFlux flux{ut, A, h};
        auto r = map_points(
            space,
            [&](Complex z) {
                const double du_dt = (u(z, t + dt) - u(z, t - dt)) / (2.0 * dt);
                return du_dt - a * a * flux.divergence(z) - f(u(z, t));
            },
            policy);
        pts.insert(pts.end(), space.begin(), space.end());
        residuals.insert(residuals.end(), r.begin(), r.end());
    }
    return assemble_report(problem_id, grid, pts, std::move(residuals));
}

double TestBump::value(Complex z) const {
    const double s2 = std::norm((z - center) / radius);
    if (s2 >= 1.0) return 0.0;
    const double t = 1.0 - s2;
    return t * t * t;
}

Vec2 TestBump::gradient(Complex z) const {
    const Complex s = (z - center) / radius;
    const double s2 = std::norm(s);
    if (s2 >= 1.0) return {0.0, 0.0};
    const double t = 1.0 - s2;
    const double c = -6.0 * t * t / radius;
    return {c * s.real(), c * s.imag()};
}

std::vector<WeakResidual> weak_residual(const ScalarField& u, const ConductivityTensor& A,
                                        const Nonlinearity& f, const std::vector<TestBump>& bumps,
                                        const GridSpec& grid, ExecutionPolicy policy) {
    std::vector<WeakResidual> out;
    for (const TestBump& bump : bumps) {
        const int n = std::max(2, static_cast<int>(std::round(2.0 * bump.radius / grid.h)));
        const double hq = 2.0 * bump.radius / n;
        std::vector<Complex> nodes;
        nodes.reserve(static_cast<size_t>(n) * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                nodes.emplace_back(bump.center.real() - bump.radius + (i + 0.5) * hq,
                                   bump.center.imag() - bump.radius + (j + 0.5) * hq);
        auto vals = map_points(
            nodes,
            [&](Complex z) {
                const Vec2 gphi = bump.gradient(z);
                const double phi = bump.value(z);
                if (phi == 0.0 && gphi.x == 0.0 && gphi.y == 0.0) return 0.0;
                return dot(A.at(z).apply(u.grad(z)), gphi) + f(u(z)) * phi;
            },
            policy);
        auto mags = map_points(
            nodes,
            [&](Complex z) {
                const Vec2 gphi = bump.gradient(z);
                const double phi = bump.value(z);
                if (phi == 0.0 && gphi.x == 0.0 && gphi.y == 0.0) return 0.0;
                return std::abs(dot(A.at(z).apply(u.grad(z)), gphi)) + std::abs(f(u(z)) * phi);
            },
            policy);
        WeakResidual w;
        for (double v : vals) w.value += v;
        for (double m : mags) w.scale += m;
        w.value *= hq * hq;
        w.scale *= hq * hq;
        out.push_back(w);
    }
    return out;
}

std::vector<IdentityDefect> factorization_identity_check(
    const ScalarField& T, const PlanarMap& omega, const ConductivityTensor& A,
    const std::vector<TestBump>& bumps, const GridSpec& grid, ExecutionPolicy policy) {
    // Agreement check: the declared dilatation of omega must match the one
    // generated by A.
    for (const TestBump& bump : bumps) {
        for (Complex probe : {bump.center, bump.center + 0.3 * bump.radius,
                              bump.center + Complex(0.0, 0.4) * bump.radius}) {
            const Complex mismatch = omega.dilatation(probe) - mu_from_tensor(A, probe);
            if (std::abs(mismatch) > 1e-3) {
                std::ostringstream msg;
                msg << "factorization_identity_check: omega is not agreed with A at ("
                    << probe.real() << ", " << probe.imag() << "), |mu mismatch| = "
                    << std::abs(mismatch);
                throw std::invalid_argument(msg.str());
            }
        }
    }

    std::vector<IdentityDefect> out;
    for (const TestBump& bump : bumps) {
        const int n = std::max(2, static_cast<int>(std::round(2.0 * bump.radius / grid.h)));
        const double hq = 2.0 * bump.radius / n;

        // midpoint nodes for the left side
        std::vector<Complex> mid_nodes;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                mid_nodes.emplace_back(bump.center.real() - bump.radius + (i + 0.5) * hq,
                                       bump.center.imag() - bump.radius + (j + 0.5) * hq);
        // corner nodes for the right side (integrand vanishes on the support edge)
        std::vector<Complex> corner_nodes;
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                corner_nodes.emplace_back(bump.center.real() - bump.radius + i * hq,
                                          bump.center.imag() - bump.radius + j * hq);

        auto lhs_vals = map_points(
            mid_nodes,
            [&](Complex z) {
                const Vec2 gphi = bump.gradient(z);
                if (gphi.x == 0.0 && gphi.y == 0.0) return 0.0;
                const Vec2 grad_comp = omega.jacobian(z).transpose() * T.grad(omega(z));
                return dot(A.at(z).apply(grad_comp), gphi);
            },
            policy);
        auto rhs_vals = map_points(
            corner_nodes,
            [&](Complex z) {
                const Vec2 gphi = bump.gradient(z);
                if (gphi.x == 0.0 && gphi.y == 0.0) return 0.0;
                const Vec2 v = omega.jacobian(z).inverse() * T.grad(omega(z));
                return dot(v, gphi) * omega.jacobian_det(z);
            },
            policy);

        IdentityDefect d;
        double lhs_abs = 0.0;
        for (double v : lhs_vals) d.lhs += v, lhs_abs += std::abs(v);
        for (double v : rhs_vals) d.rhs += v;
        d.lhs *= hq * hq;
        d.rhs *= hq * hq;
        lhs_abs *= hq * hq;
        d.defect = std::abs(d.lhs - d.rhs);
        d.scale = std::max(lhs_abs, 1e-300);
        out.push_back(d);
    }
    return out;
}

OrderEstimate convergence_order(const std::vector<ResidualReport>& reports) {
    if (reports.size() < 3)
        throw std::invalid_argument("convergence_order: needs >= 3 refinements");
    OrderEstimate est;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(reports.size());
    for (const auto& r : reports) {
        const double x = std::log(r.h);
        const double y = std::log(std::max(r.linf, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    est.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    for (size_t i = 0; i + 1 < reports.size(); ++i)
        if (reports[i + 1].linf >= reports[i].linf) est.warning = true;
    return est;
}

}  // namespace qcf
