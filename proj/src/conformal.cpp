#include "qcf/conformal.hpp"

#include <cmath>

namespace qcf {

ConformalMap disk_identity() {
    ConformalMap F;
    F.source = DomainDescriptor::unit_disk();
    F.value = [](Complex w) { return w; };
    F.derivative = [](Complex) { return Complex(1.0); };
    return F;
}

ConformalMap halfplane_to_disk() {
    ConformalMap F;
    F.source = DomainDescriptor::right_half_plane();
    F.value = [](Complex w) {
        if (w == Complex(-1.0)) throw std::domain_error("halfplane_to_disk: pole at w = -1");
        return (w - 1.0) / (w + 1.0);
    };
    F.derivative = [](Complex w) { return 2.0 / ((w + 1.0) * (w + 1.0)); };
    return F;
}

ConformalMap halfplane_to_punctured_disk(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("halfplane_to_punctured_disk: lambda > 0");
    ConformalMap F;
    F.source = DomainDescriptor::right_half_plane();
    F.value = [lambda](Complex w) { return std::exp(-lambda * w); };
    F.derivative = [lambda](Complex w) { return -lambda * std::exp(-lambda * w); };
    return F;
}

ConformalMap annulus_to_disk(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("annulus_to_disk: r must lie in (0,1)");
    const double c = M_PI / std::log(r);
    auto tau = [c](Complex w) {
        // i exp((pi/log r) i log w), principal branch of log.
        return Complex(0.0, 1.0) * std::exp(Complex(0.0, c) * std::log(w));
    };
    ConformalMap F;
    F.source = DomainDescriptor::annulus(r);
    F.value = [tau, r](Complex w) {
        const double aw = std::abs(w);
        if (!(aw > r && aw < 1.0)) throw std::domain_error("annulus_to_disk: |w| outside (r,1)");
        const Complex t = tau(w);
        return (t + 1.0) / (t - 1.0);
    };
    F.derivative = [tau, c](Complex w) {
        const Complex t = tau(w);
        const Complex dt = t * Complex(0.0, c) / w;
        return -2.0 * dt / ((t - 1.0) * (t - 1.0));
    };
    return F;
}

ScalarField liouville_transplant(const ConformalMap& F) {
    ScalarField u;
    u.value = [F](Complex z) {
        const Complex fz = F(z);
        const Complex dfz = F.deriv(z);
        const double m2 = std::norm(fz);
        if (m2 >= 1.0) throw std::domain_error("liouville_transplant: |F| >= 1 at point");
        if (dfz == Complex(0.0)) throw std::domain_error("liouville_transplant: F' = 0 at point");
        return std::log(8.0 * std::norm(dfz) / ((1.0 - m2) * (1.0 - m2)));
    };
    return u;
}

}  // namespace qcf
