#include <cmath>
#include <random>

#include "qcf/verifier.hpp"

namespace qcf {

namespace {

// grad v = H A grad u with H = rotation by pi/2.
Vec2 conjugate_gradient(const ScalarField& u, const ConductivityTensor& A, Complex z) {
    const Vec2 flux = A.at(z).apply(u.grad(z));
    return {-flux.y, flux.x};
}

}  // namespace

StreamFunctionResult stream_function(const ScalarField& u, const ConductivityTensor& A,
                                     const GridSpec& grid, Complex base, int loop_samples,
                                     unsigned seed) {
    const Rect w = grid.sampling_window();
    const double h = grid.h;
    const int nx = static_cast<int>(std::round(w.width() / h));
    const int ny = static_cast<int>(std::round(w.height() / h));

    StreamFunctionResult res;
    res.v.window = w;
    res.v.h = h;
    res.v.nx = nx + 1;
    res.v.ny = ny + 1;
    res.v.values.assign(static_cast<size_t>(nx + 1) * (ny + 1), 0.0);

    std::vector<Vec2> g(static_cast<size_t>(nx + 1) * (ny + 1));
    const long total = static_cast<long>(g.size());
#ifdef QCF_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long idx = 0; idx < total; ++idx) {
        const int i = static_cast<int>(idx % (nx + 1));
        const int j = static_cast<int>(idx / (nx + 1));
        g[idx] = conjugate_gradient(u, A, res.v.node(i, j));
    }
    auto grad_at = [&](int i, int j) -> const Vec2& {
        return g[static_cast<size_t>(j) * (nx + 1) + i];
    };
    for (const Vec2& v : g) res.scale = std::max(res.scale, norm(v));

    const int i0 = std::clamp(static_cast<int>(std::round((base.real() - w.x0) / h)), 0, nx);
    const int j0 = std::clamp(static_cast<int>(std::round((base.imag() - w.y0) / h)), 0, ny);

    // base row by trapezoid in x, then every column in y
    for (int i = i0 + 1; i <= nx; ++i)
        res.v.at(i, j0) = res.v.at(i - 1, j0) + 0.5 * h * (grad_at(i - 1, j0).x + grad_at(i, j0).x);
    for (int i = i0 - 1; i >= 0; --i)
        res.v.at(i, j0) = res.v.at(i + 1, j0) - 0.5 * h * (grad_at(i, j0).x + grad_at(i + 1, j0).x);
    for (int i = 0; i <= nx; ++i) {
        for (int j = j0 + 1; j <= ny; ++j)
            res.v.at(i, j) = res.v.at(i, j - 1) + 0.5 * h * (grad_at(i, j - 1).y + grad_at(i, j).y);
        for (int j = j0 - 1; j >= 0; --j)
            res.v.at(i, j) = res.v.at(i, j + 1) - 0.5 * h * (grad_at(i, j).y + grad_at(i, j + 1).y);
    }

    // loop integrals around random grid rectangles; exact conjugates give O(h^2)
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick_x(0, nx - 1), pick_y(0, ny - 1);
    for (int s = 0; s < loop_samples; ++s) {
        int ia = pick_x(rng), ib = pick_x(rng), ja = pick_y(rng), jb = pick_y(rng);
        if (ia > ib) std::swap(ia, ib);
        if (ja > jb) std::swap(ja, jb);
        ++ib;
        ++jb;
        double loop = 0.0;
        for (int i = ia; i < ib; ++i)
            loop += 0.5 * h * (grad_at(i, ja).x + grad_at(i + 1, ja).x);
        for (int j = ja; j < jb; ++j)
            loop += 0.5 * h * (grad_at(ib, j).y + grad_at(ib, j + 1).y);
        for (int i = ib; i > ia; --i)
            loop -= 0.5 * h * (grad_at(i - 1, jb).x + grad_at(i, jb).x);
        for (int j = jb; j > ja; --j)
            loop -= 0.5 * h * (grad_at(ia, j - 1).y + grad_at(ia, j).y);
        res.max_loop_defect = std::max(res.max_loop_defect, std::abs(loop));
    }
    return res;
}

}  // namespace qcf
