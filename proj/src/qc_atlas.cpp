#include "qcf/qc_atlas.hpp"

#include <cmath>
#include <memory>

namespace qcf {

namespace {

Complex coefficient_ratio(Complex k) {
    const Complex denom = 1.0 - k;
    if (std::abs(k) >= 1.0) throw std::domain_error("atlas map: |coefficient| >= 1 encountered");
    return (1.0 + k) / denom;
}

// Solves m(x) = target for a strictly increasing C^1 function with slope in
// [1/K, K]; Newton with bisection safeguard.
double solve_monotone(const std::function<double(double)>& m,
                      const std::function<double(double)>& slope, double target) {
    // bracket
    double lo = target, hi = target;
    double step = std::max(1.0, std::abs(target));
    while (m(lo) > target) lo -= step, step *= 2.0;
    step = std::max(1.0, std::abs(target));
    while (m(hi) < target) hi += step, step *= 2.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = m(x) - target;
        if (std::abs(fx) < 1e-14 * (1.0 + std::abs(target))) return x;
        (fx > 0.0 ? hi : lo) = x;
        double xn = x - fx / slope(x);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return x;
}

}  // namespace

Mat2 jacobian_from_wirtinger(Complex wz, Complex wzbar) {
    const Complex wx = wz + wzbar;
    const Complex wy = Complex(0.0, 1.0) * (wz - wzbar);
    return {wx.real(), wy.real(), wx.imag(), wy.imag()};
}

PlanarMap identity_map() {
    PlanarMap m;
    m.family = PlanarMap::Family::Identity;
    m.domain = DomainDescriptor::plane();
    m.forward = [](Complex z) { return z; };
    m.jacobian = [](Complex) { return Mat2::identity(); };
    m.jacobian_det = [](Complex) { return 1.0; };
    m.dilatation = [](Complex) { return Complex(0.0); };
    m.inverse = [](Complex w) { return w; };
    return m;
}

PlanarMap radial_map(std::function<Complex(double)> k, const QuadratureSpec& quad) {
    auto shared_k = std::make_shared<std::function<Complex(double)>>(std::move(k));

    // int_{rho}^{1} (1+k)/(1-k) dtau/tau in the substitution s = log tau.
    auto integral = [shared_k, quad](double rho) -> Complex {
        return integrate([shared_k](double s) { return coefficient_ratio((*shared_k)(std::exp(s))); },
                         std::log(rho), 0.0, quad);
    };

    // Volume-preserving iff Re k = |k|^2, which makes Re (1+k)/(1-k) = 1.
    bool volume_preserving = true;
    for (double t : {1e-3, 0.11, 0.37, 0.52, 0.78, 0.93, 0.999}) {
        const Complex kv = (*shared_k)(t);
        if (std::abs(kv.real() - std::norm(kv)) > 1e-12) volume_preserving = false;
    }

    PlanarMap m;
    m.family = PlanarMap::Family::Radial;
    m.domain = DomainDescriptor::unit_disk();
    m.forward = [integral](Complex z) -> Complex {
        const double r = std::abs(z);
        if (r < 1e-12) return 0.0;
        return (z / r) * std::exp(-integral(r));
    };
    m.dilatation = [shared_k](Complex z) -> Complex {
        const double r = std::abs(z);
        if (r == 0.0) throw std::domain_error("radial dilatation undefined at the origin");
        return (*shared_k)(r) * (z / std::conj(z));
    };
    m.jacobian = [shared_k, fwd = m.forward](Complex z) {
        const double r = std::abs(z);
        if (r == 0.0) throw std::domain_error("radial jacobian undefined at the origin");
        const Complex kv = (*shared_k)(r);
        const Complex w = fwd(z);
        const Complex wz = w / ((1.0 - kv) * z);
        const Complex wzbar = kv * w / ((1.0 - kv) * std::conj(z));
        return jacobian_from_wirtinger(wz, wzbar);
    };
    m.jacobian_det = [shared_k, fwd = m.forward](Complex z) {
        const double r = std::abs(z);
        if (r == 0.0) throw std::domain_error("radial jacobian undefined at the origin");
        const Complex kv = (*shared_k)(r);
        return (1.0 - std::norm(kv)) / std::norm(1.0 - kv) * std::norm(fwd(z)) / (r * r);
    };
    m.inverse = [integral, volume_preserving](Complex w) -> Complex {
        const double aw = std::abs(w);
        if (aw < 1e-12) return 0.0;
        double rho;
        if (volume_preserving) {
            rho = aw;  // |omega(z)| = |z|
        } else {
            // Re of the integral is decreasing in rho; |omega| = exp(-Re I(rho)).
            double lo = 1e-15, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (std::exp(-integral(mid).real()) < aw ? lo : hi) = mid;
            }
            rho = 0.5 * (lo + hi);
        }
        const double theta = std::arg(w) + integral(rho).imag();
        return std::polar(rho, theta);
    };
    return m;
}

PlanarMap horizontal_map(std::function<Complex(double)> mu, const QuadratureSpec& quad) {
    auto shared_mu = std::make_shared<std::function<Complex(double)>>(std::move(mu));
    auto ratio = [shared_mu](double x) { return coefficient_ratio((*shared_mu)(x)); };
    auto phi = [ratio, quad](double x) { return integrate(ratio, 0.0, x, quad); };

    PlanarMap m;
    m.family = PlanarMap::Family::Horizontal;
    m.domain = DomainDescriptor::plane();
    m.forward = [phi](Complex z) {
        const Complex p = phi(z.real());
        return Complex(p.real(), z.imag() + p.imag());
    };
    m.dilatation = [shared_mu](Complex z) { return (*shared_mu)(z.real()); };
    m.jacobian = [ratio](Complex z) {
        const Complex g = ratio(z.real());
        return Mat2{g.real(), 0.0, g.imag(), 1.0};
    };
    m.jacobian_det = [ratio](Complex z) { return ratio(z.real()).real(); };
    m.inverse = [phi, ratio](Complex w) {
        const double x = solve_monotone([phi](double t) { return phi(t).real(); },
                                        [ratio](double t) { return ratio(t).real(); }, w.real());
        return Complex(x, w.imag() - phi(x).imag());
    };
    return m;
}

PlanarMap vertical_map(std::function<Complex(double)> nu, const QuadratureSpec& quad) {
    auto shared_nu = std::make_shared<std::function<Complex(double)>>(std::move(nu));
    auto ratio = [shared_nu](double y) -> Complex {
        const Complex nv = (*shared_nu)(y);
        if (std::abs(nv) >= 1.0) throw std::domain_error("vertical_map: |nu| >= 1 encountered");
        return (1.0 - nv) / (1.0 + nv);
    };
    auto psi = [ratio, quad](double y) { return integrate(ratio, 0.0, y, quad); };

    PlanarMap m;
    m.family = PlanarMap::Family::Vertical;
    m.domain = DomainDescriptor::plane();
    m.forward = [psi](Complex z) {
        const Complex p = psi(z.imag());  // g = x + i psi(y)
        return Complex(z.real() - p.imag(), p.real());
    };
    m.dilatation = [shared_nu](Complex z) { return (*shared_nu)(z.imag()); };
    m.jacobian = [ratio](Complex z) {
        const Complex g = ratio(z.imag());
        return Mat2{1.0, -g.imag(), 0.0, g.real()};
    };
    m.jacobian_det = [ratio](Complex z) { return ratio(z.imag()).real(); };
    m.inverse = [psi, ratio](Complex w) {
        const double y = solve_monotone([psi](double t) { return psi(t).real(); },
                                        [ratio](double t) { return ratio(t).real(); }, w.imag());
        return Complex(w.real() + psi(y).imag(), y);
    };
    return m;
}

PlanarMap log_spiral_map() {
    PlanarMap m;
    m.family = PlanarMap::Family::LogSpiral;
    m.domain = DomainDescriptor::unit_disk();
    m.forward = [](Complex z) -> Complex {
        const double r = std::abs(z);
        if (r == 0.0) return 0.0;  // by continuity
        return z * std::exp(Complex(0.0, 2.0 * std::log(r)));
    };
    m.dilatation = [](Complex z) -> Complex {
        if (z == Complex(0.0)) throw std::domain_error("log-spiral dilatation undefined at 0");
        return Complex(0.5, 0.5) * z / std::conj(z);
    };
    m.jacobian = [](Complex z) {
        if (z == Complex(0.0)) throw std::domain_error("log-spiral jacobian undefined at 0");
        const Complex spiral = std::exp(Complex(0.0, 2.0 * std::log(std::abs(z))));
        const Complex wz = Complex(1.0, 1.0) * spiral;
        const Complex wzbar = Complex(0.0, 1.0) * (z / std::conj(z)) * spiral;
        return jacobian_from_wirtinger(wz, wzbar);
    };
    m.jacobian_det = [](Complex) { return 1.0; };
    m.inverse = [](Complex w) -> Complex {
        const double r = std::abs(w);
        if (r == 0.0) return 0.0;
        return w * std::exp(Complex(0.0, -2.0 * std::log(r)));
    };
    return m;
}

Mat2 numeric_jacobian(const PlanarMap& map, Complex z, double h) {
    const Complex dx = (map(z + h) - map(z - h)) / (2.0 * h);
    const Complex dy = (map(z + Complex(0.0, h)) - map(z - Complex(0.0, h))) / (2.0 * h);
    return {dx.real(), dy.real(), dx.imag(), dy.imag()};
}

Complex numeric_dilatation(const PlanarMap& map, Complex z, double h) {
    const Complex wx = (map(z + h) - map(z - h)) / (2.0 * h);
    const Complex wy = (map(z + Complex(0.0, h)) - map(z - Complex(0.0, h))) / (2.0 * h);
    const Complex wz = 0.5 * (wx - Complex(0.0, 1.0) * wy);
    const Complex wzbar = 0.5 * (wx + Complex(0.0, 1.0) * wy);
    if (std::abs(wz) < 1e-12) throw std::domain_error("numeric_dilatation: degenerate omega_z");
    return wzbar / wz;
}

}  // namespace qcf
