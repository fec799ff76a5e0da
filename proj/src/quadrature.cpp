#include "qcf/quadrature.hpp"

#include <cmath>
#include <queue>

namespace qcf {

namespace {

// Kronrod 15-point nodes on [0,1] (positive half) with Kronrod weights and
// the embedded Gauss-7 weights (zero at Kronrod-only nodes).
struct Node {
    double x, wg, wk;
};

constexpr Node kNodes[8] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978554},
    {0.207784955007898468, 0.0, 0.204432940075298892},
    {0.586087235467691130, 0.0, 0.169004726639267903},
    {0.864864423359769073, 0.0, 0.104790010322250184},
    {0.991455371120812639, 0.0, 0.022935322010529225},
};

struct PanelResult {
    Complex value;
    double error;
};

// No Kronrod node lies within (1 - 0.991455..)/2 of a panel endpoint, so a
// feature parked in that gap is invisible to the embedded error estimate no
// matter how the panel is split (bisection keeps it glued to the same
// endpoint). Extrapolating the 15-node interpolant to the endpoints and
// comparing against f there exposes such features: the defect is spectrally
// small for smooth integrands and O(jump) for a jump hiding in the gap.
struct EndpointExtrapolation {
    double chi[15], clo[15];  // coefficients of f(node_i) in P(+1), P(-1)

    EndpointExtrapolation() {
        double x[15], w[15];
        x[0] = kNodes[0].x;
        for (int i = 1; i < 8; ++i) {
            x[2 * i - 1] = -kNodes[i].x;
            x[2 * i] = kNodes[i].x;
        }
        for (int i = 0; i < 15; ++i) {
            w[i] = 1.0;
            for (int j = 0; j < 15; ++j)
                if (j != i) w[i] /= x[i] - x[j];
        }
        double dh = 0.0, dl = 0.0;
        for (int i = 0; i < 15; ++i) {
            chi[i] = w[i] / (1.0 - x[i]);
            clo[i] = w[i] / (-1.0 - x[i]);
            dh += chi[i];
            dl += clo[i];
        }
        for (int i = 0; i < 15; ++i) {
            chi[i] /= dh;
            clo[i] /= dl;
        }
    }
};

PanelResult gk15(const std::function<Complex(double)>& f, double a, double b) {
    static const EndpointExtrapolation ext;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex fv[15];
    fv[0] = f(mid);
    Complex g7 = kNodes[0].wg * fv[0];
    Complex k15 = kNodes[0].wk * fv[0];
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i].x;
        fv[2 * i - 1] = f(mid - dx);
        fv[2 * i] = f(mid + dx);
        const Complex s = fv[2 * i - 1] + fv[2 * i];
        g7 += kNodes[i].wg * s;
        k15 += kNodes[i].wk * s;
    }
    g7 *= half;
    k15 *= half;
    double error = std::abs(k15 - g7);

    // Hidden mass in a gap is at most gap width times the defect; skip
    // non-finite endpoint values (integrable endpoint singularities).
    const double gap = half * (1.0 - kNodes[7].x);
    Complex hi = 0.0, lo = 0.0;
    for (int i = 0; i < 15; ++i) {
        hi += ext.chi[i] * fv[i];
        lo += ext.clo[i] * fv[i];
    }
    const Complex fa = f(a), fb = f(b);
    if (std::isfinite(std::abs(fa))) error += gap * std::abs(fa - lo);
    if (std::isfinite(std::abs(fb))) error += gap * std::abs(fb - hi);
    return {k15, error};
}

struct Panel {
    double a, b;
    int depth;
    Complex value;
    double error;

    bool operator<(const Panel& o) const { return error < o.error; }
};

// Globally adaptive: always split the worst panel, so localized trouble
// (jumps, integrable endpoint singularities) only refines where needed.
// The Kronrod-Gauss difference can fluke to zero on a jump placed just so
// inside a panel; a uniform verification split guards the final answer
// against such spurious terminations. The split point is deliberately
// off-center: a midpoint split preserves enough of the node symmetry that
// a jump can fool the original panel and both halves the same way, and the
// irrational ratio breaks that alignment.
constexpr double kVerifySplit = 0.61803398874989485;  // 1/golden ratio
Complex adapt(const std::function<Complex(double)>& f, double a, double b,
              const QuadratureSpec& spec) {
    std::vector<Panel> heap;
    auto push = [&heap](Panel p) {
        heap.push_back(p);
        std::push_heap(heap.begin(), heap.end());
    };
    const PanelResult first = gk15(f, a, b);
    push({a, b, 0, first.value, first.error});
    Complex total = first.value;
    double total_error = first.error;

    for (;;) {
        while (total_error > spec.abs_tol && total_error > spec.rel_tol * std::abs(total)) {
            std::pop_heap(heap.begin(), heap.end());
            const Panel worst = heap.back();
            heap.pop_back();
            if (worst.depth >= spec.max_depth)
                throw std::runtime_error("quadrature: panel subdivision did not converge");
            const double mid = 0.5 * (worst.a + worst.b);
            const PanelResult lo = gk15(f, worst.a, mid);
            const PanelResult hi = gk15(f, mid, worst.b);
            total += lo.value + hi.value - worst.value;
            total_error += lo.error + hi.error - worst.error;
            push({worst.a, mid, worst.depth + 1, lo.value, lo.error});
            push({mid, worst.b, worst.depth + 1, hi.value, hi.error});
        }

        std::vector<Panel> refined;
        refined.reserve(2 * heap.size());
        Complex confirmed = 0.0;
        double confirmed_error = 0.0;
        int max_seen = 0;
        for (const Panel& p : heap) {
            const double mid = p.a + kVerifySplit * (p.b - p.a);
            const PanelResult lo = gk15(f, p.a, mid);
            const PanelResult hi = gk15(f, mid, p.b);
            confirmed += lo.value + hi.value;
            confirmed_error += lo.error + hi.error;
            refined.push_back({p.a, mid, p.depth + 1, lo.value, lo.error});
            refined.push_back({mid, p.b, p.depth + 1, hi.value, hi.error});
            max_seen = std::max(max_seen, p.depth);
        }
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(confirmed));
        if (std::abs(confirmed - total) <= tol && confirmed_error <= tol) return confirmed;
        if (max_seen >= spec.max_depth)
            throw std::runtime_error("quadrature: panel subdivision did not converge");
        heap = std::move(refined);
        std::make_heap(heap.begin(), heap.end());
        total = confirmed;
        total_error = confirmed_error;
    }
}

}  // namespace

Complex integrate(const std::function<Complex(double)>& f, double a, double b,
                  const QuadratureSpec& spec) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, spec);
    return adapt(f, a, b, spec);
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureSpec& spec) {
    return integrate([&f](double t) { return Complex(f(t), 0.0); }, a, b, spec).real();
}

}  // namespace qcf
