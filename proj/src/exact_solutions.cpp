#include "qcf/exact_solutions.hpp"

#include <cmath>
#include <vector>

namespace qcf {

Nonlinearity Nonlinearity::power(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("power nonlinearity: q in (0,1)");
    return {Tag::Power, q};
}

double Nonlinearity::operator()(double u) const {
    switch (tag) {
        case Tag::Zero: return 0.0;
        case Tag::Exp: return std::exp(u);
        case Tag::Power: return u > 0.0 ? std::pow(u, q) : 0.0;
        case Tag::ExpScaled: return std::exp(a * u);
    }
    return 0.0;
}

double Nonlinearity::deriv(double u) const {
    switch (tag) {
        case Tag::Zero: return 0.0;
        case Tag::Exp: return std::exp(u);
        case Tag::Power: return u > 0.0 ? q * std::pow(u, q - 1.0) : 0.0;
        case Tag::ExpScaled: return a * std::exp(a * u);
    }
    return 0.0;
}

double lb_disk(Complex z) {
    const double m2 = std::norm(z);
    if (m2 >= 1.0) throw std::domain_error("lb_disk: |z| must be < 1");
    return std::log(8.0) - 2.0 * std::log1p(-m2);
}

Vec2 lb_disk_grad(Complex z) {
    const double denom = 1.0 - std::norm(z);
    return {4.0 * z.real() / denom, 4.0 * z.imag() / denom};
}

ScalarField lb_disk_field() {
    return {[](Complex z) { return lb_disk(z); }, [](Complex z) { return lb_disk_grad(z); }};
}

double lb_annulus(Complex z, double r) {
    const double az = std::abs(z);
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("lb_annulus: r in (0,1)");
    if (!(az > r && az < 1.0)) throw std::domain_error("lb_annulus: |z| outside (r,1)");
    const double lr = std::log(r);
    const double s = std::sin(M_PI / lr * std::log(az));
    return std::log(2.0 * M_PI * M_PI / (az * az * lr * lr * s * s));
}

ScalarField lb_annulus_field(double r) {
    ScalarField u;
    u.value = [r](Complex z) { return lb_annulus(z, r); };
    u.gradient = [r](Complex z) {
        const double az = std::abs(z);
        const double c = M_PI / std::log(r);
        const double du = -2.0 / az - 2.0 * c / (az * std::tan(c * std::log(az)));
        return Vec2{du * z.real() / az, du * z.imag() / az};
    };
    return u;
}

double lb_punctured_disk(Complex z) {
    const double az = std::abs(z);
    if (!(az > 0.0 && az < 1.0)) throw std::domain_error("lb_punctured_disk: |z| outside (0,1)");
    const double l = std::log(az);
    return std::log(2.0 / (az * az * l * l));
}

ScalarField lb_punctured_disk_field() {
    ScalarField u;
    u.value = [](Complex z) { return lb_punctured_disk(z); };
    u.gradient = [](Complex z) {
        const double az = std::abs(z);
        const double du = -2.0 / az - 2.0 / (az * std::log(az));
        return Vec2{du * z.real() / az, du * z.imag() / az};
    };
    return u;
}

double halfplane_blowup_log(Complex z) {
    const double x = z.real();
    if (!(x > 0.0)) throw std::domain_error("halfplane_blowup: Re z must be > 0");
    return std::log(2.0 / (x * x));
}

double halfplane_blowup_lambda(Complex z, double lambda) {
    const double x = z.real();
    if (!(x > 0.0)) throw std::domain_error("halfplane_blowup: Re z must be > 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("halfplane_blowup: lambda > 0");
    return std::log(8.0 * lambda * lambda) - 2.0 * lambda * x -
           2.0 * std::log1p(-std::exp(-2.0 * lambda * x));
}

ScalarField halfplane_blowup_log_field() {
    ScalarField u;
    u.value = [](Complex z) { return halfplane_blowup_log(z); };
    u.gradient = [](Complex z) { return Vec2{-2.0 / z.real(), 0.0}; };
    return u;
}

ScalarField halfplane_blowup_lambda_field(double lambda) {
    ScalarField u;
    u.value = [lambda](Complex z) { return halfplane_blowup_lambda(z, lambda); };
    u.gradient = [lambda](Complex z) {
        const double e = std::exp(-2.0 * lambda * z.real());
        return Vec2{-2.0 * lambda - 4.0 * lambda * e / (1.0 - e), 0.0};
    };
    return u;
}

DeadZoneSolution::DeadZoneSolution(double q, std::function<double(double)> nu, int sign,
                                   const QuadratureSpec& quad)
    : q_(q), nu_(std::move(nu)), sign_(sign >= 0 ? 1 : -1), quad_(quad) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("dead zone: q in (0,1)");
    gamma_ = std::pow((1.0 - q) * (1.0 - q) / (2.0 * (1.0 + q)), 1.0 / (1.0 - q));
}

double DeadZoneSolution::free_boundary_slope(double x) const {
    const double n = nu_(x);
    if (!(std::abs(n) < 1.0)) throw std::domain_error("dead zone: |nu| >= 1 encountered");
    return -sign_ * 2.0 * n / std::sqrt(1.0 - n * n);
}

double DeadZoneSolution::free_boundary(double x) const {
    return integrate_real([this](double t) { return free_boundary_slope(t); }, 0.0, x, quad_);
}

double DeadZoneSolution::value(Complex z) const {
    const double d = z.imag() - free_boundary(z.real());
    return d > 0.0 ? gamma_ * std::pow(d, exponent()) : 0.0;
}

Vec2 DeadZoneSolution::gradient(Complex z) const {
    const double d = z.imag() - free_boundary(z.real());
    if (d <= 0.0) return {0.0, 0.0};
    const double dy = gamma_ * exponent() * std::pow(d, exponent() - 1.0);
    return {-free_boundary_slope(z.real()) * dy, dy};
}

ScalarField DeadZoneSolution::field() const {
    return {[*this](Complex z) { return value(z); }, [*this](Complex z) { return gradient(z); }};
}

TensorEntries DeadZoneSolution::tensor_at(double x) const {
    const double n = nu_(x);
    TensorEntries e;
    e.a11 = 1.0;
    e.a12 = free_boundary_slope(x);
    e.a22 = (1.0 + 3.0 * n * n) / (1.0 - n * n);
    return e;
}

ConductivityTensor DeadZoneSolution::tensor() const {
    double sup = 0.0;
    for (int i = -500; i <= 500; ++i) sup = std::max(sup, std::abs(nu_(i * 0.01)));
    const double K = ellipticity_constant(Complex(sup, 0.0));
    auto self = *this;
    return ConductivityTensor([self](Complex z) { return self.tensor_at(z.real()); }, K,
                              FieldStructure::XOnly);
}

double heat_kernel(Complex z, double t, double a) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
    if (!(a > 0.0)) throw std::invalid_argument("heat_kernel: a must be > 0");
    const double s = 4.0 * a * a * t;
    return std::exp(-std::norm(z) / s) / (M_PI * s);
}

KellerOsserman keller_osserman_check(const std::function<double(double)>& f, double t0) {
    if (!(t0 > 0.0)) throw std::invalid_argument("keller_osserman_check: t0 must be > 0");
    const std::vector<double> schedule = {10.0, 20.0, 40.0, 80.0, 160.0};

    // Decidable only in the sufficient case h = f: require f positive and
    // nondecreasing on samples of [t0, T_max].
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = t0 + (schedule.back() - t0) * i / 400.0;
        const double ft = f(t);
        if (!(ft > 0.0) || ft < prev * (1.0 - 1e-12)) return KellerOsserman::Inconclusive;
        prev = ft;
    }

    QuadratureSpec quad;
    quad.abs_tol = 1e-12;
    quad.rel_tol = 1e-8;
    auto inner = [&](double t) { return integrate_real(f, 0.0, t, quad); };
    auto outer = [&](double a, double b) {
        return integrate_real([&](double t) { return 1.0 / std::sqrt(inner(t)); }, a, b, quad);
    };

    std::vector<double> deltas;
    for (size_t j = 0; j + 1 < schedule.size(); ++j)
        deltas.push_back(outer(schedule[j], schedule[j + 1]));

    double max_ratio = 0.0, min_ratio = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j + 1 < deltas.size(); ++j) {
        const double ratio = deltas[j] > 0.0 ? deltas[j + 1] / deltas[j] : 0.0;
        max_ratio = std::max(max_ratio, ratio);
        min_ratio = std::min(min_ratio, ratio);
    }
    if (max_ratio <= 0.75) return KellerOsserman::Satisfied;
    if (min_ratio >= 0.9) return KellerOsserman::Violated;
    return KellerOsserman::Inconclusive;
}

}  // namespace qcf
