#include "qcf/tensor_beltrami.hpp"

#include <cmath>

namespace qcf {

namespace {

constexpr double kDetTolerance = 1e-9;  // relative, for user-supplied tensors

void validate_entries(const TensorEntries& e) {
    if (!std::isfinite(e.a11) || !std::isfinite(e.a12) || !std::isfinite(e.a22))
        throw std::invalid_argument("conductivity tensor: non-finite entries");
    if (e.a11 <= 0.0)
        throw std::invalid_argument("conductivity tensor: a11 must be positive");
    if (std::abs(e.det() - 1.0) > kDetTolerance)
        throw std::invalid_argument("conductivity tensor: det A must equal 1");
}

}  // namespace

double TensorEntries::max_eigenvalue() const {
    const double tr = a11 + a22;
    const double disc = std::sqrt(std::max(tr * tr / 4.0 - det(), 0.0));
    return tr / 2.0 + disc;
}

ConductivityTensor::ConductivityTensor(Evaluator eval, double K, FieldStructure structure)
    : eval_(std::move(eval)), K_(K), structure_(structure) {
    if (!(K >= 1.0)) throw std::invalid_argument("ellipticity constant K must be >= 1");
}

ConductivityTensor::ConductivityTensor(TensorEntries entries)
    : ConductivityTensor([entries](Complex) { return entries; },
                         entries.max_eigenvalue(), FieldStructure::Constant) {
    validate_entries(entries);
}

ConductivityTensor ConductivityTensor::identity() {
    return ConductivityTensor(TensorEntries{});
}

ConductivityTensor ConductivityTensor::radial(std::function<Complex(double)> k, double K) {
    auto eval = [k = std::move(k)](Complex z) {
        const double r = std::abs(z);
        if (r == 0.0) throw std::domain_error("radial tensor: undefined at the origin");
        const Complex phase = z / std::conj(z);
        return tensor_from_mu(k(r) * phase);
    };
    return ConductivityTensor(std::move(eval), K, FieldStructure::Radial);
}

ConductivityTensor ConductivityTensor::log_spiral() {
    return radial([](double) { return Complex(0.5, 0.5); },
                  ellipticity_constant(Complex(0.5, 0.5)));
}

ConductivityTensor ConductivityTensor::x_only(std::function<Complex(double)> mu, double K) {
    auto eval = [mu = std::move(mu)](Complex z) { return tensor_from_mu(mu(z.real())); };
    return ConductivityTensor(std::move(eval), K, FieldStructure::XOnly);
}

TensorEntries ConductivityTensor::at(Complex z) const {
    TensorEntries e = eval_(z);
    validate_entries(e);
    return e;
}

Complex mu_from_tensor(const TensorEntries& e) {
    validate_entries(e);
    // Algebraic inverse. det(I + A) = 2 + tr A + (det A - 1); the direct
    // product form cancels catastrophically for large entries.
    const long double a11 = e.a11, a12 = e.a12, a22 = e.a22;
    const long double det_ipa = 2.0L + a11 + a22 + (a11 * a22 - a12 * a12 - 1.0L);
    if (det_ipa <= 0.0L)
        throw std::invalid_argument("mu_from_tensor: det(I + A) must be positive");
    long double re = (a22 - a11) / det_ipa;
    long double im = -2.0L * a12 / det_ipa;

    // The entry rounding of a near-degenerate tensor perturbs det A away from
    // 1, and the algebraic inverse maps that perturbation into the radial
    // direction of mu, where the forward map amplifies it by K^2. Two
    // Gauss-Newton steps against the input entries pick the dilatation whose
    // tensor actually matches, which keeps the round trip at the entry
    // rounding floor.
    for (int step = 0; step < 2; ++step) {
        const long double d = 1.0L - (re * re + im * im);
        if (d <= 0.0L) break;
        const long double n11 = (1.0L - re) * (1.0L - re) + im * im;
        const long double n22 = (1.0L + re) * (1.0L + re) + im * im;
        const long double r1 = n11 / d - a11;
        const long double r2 = -2.0L * im / d - a12;
        const long double r3 = n22 / d - a22;
        // rows: d(a11, a12, a22) / d(re, im)
        const long double j1r = (-2.0L * (1.0L - re) + n11 * 2.0L * re / d) / d;
        const long double j1i = (2.0L * im + n11 * 2.0L * im / d) / d;
        const long double j2r = -4.0L * im * re / (d * d);
        const long double j2i = -2.0L / d - 4.0L * im * im / (d * d);
        const long double j3r = (2.0L * (1.0L + re) + n22 * 2.0L * re / d) / d;
        const long double j3i = (2.0L * im + n22 * 2.0L * im / d) / d;
        const long double h11 = j1r * j1r + j2r * j2r + j3r * j3r;
        const long double h12 = j1r * j1i + j2r * j2i + j3r * j3i;
        const long double h22 = j1i * j1i + j2i * j2i + j3i * j3i;
        const long double g1 = j1r * r1 + j2r * r2 + j3r * r3;
        const long double g2 = j1i * r1 + j2i * r2 + j3i * r3;
        const long double hdet = h11 * h22 - h12 * h12;
        if (hdet <= 0.0L) break;
        re -= (h22 * g1 - h12 * g2) / hdet;
        im -= (h11 * g2 - h12 * g1) / hdet;
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

Complex mu_from_tensor(const ConductivityTensor& A, Complex z) {
    return mu_from_tensor(A.at(z));
}

TensorEntries tensor_from_mu(Complex mu) {
    const long double re = mu.real(), im = mu.imag();
    const long double m2 = re * re + im * im;
    if (!(m2 < 1.0L)) throw std::invalid_argument("tensor_from_mu: |mu| must be < 1");
    const long double denom = 1.0L - m2;
    TensorEntries e;
    e.a11 = static_cast<double>(((1.0L - re) * (1.0L - re) + im * im) / denom);
    e.a12 = static_cast<double>(-2.0L * im / denom);
    e.a22 = static_cast<double>(((1.0L + re) * (1.0L + re) + im * im) / denom);

    // Componentwise rounding alone leaves det off 1 by up to ~|a12|^2 eps.
    // A few-ulp nudge of one diagonal entry (det granularity (1 + a12^2) eps)
    // recovers det = 1 to half that granularity; exact inputs are unchanged.
    const long double q12 = static_cast<long double>(e.a12) * e.a12;
    auto dev = [q12](double x11, double x22) {
        return std::abs(static_cast<long double>(x11) * x22 - q12 - 1.0L);
    };
    double b11 = e.a11, b22 = e.a22;
    long double best = dev(b11, b22);
    for (int m = -3; m <= 3; ++m) {
        if (m == 0) continue;
        double c = e.a11;
        for (int i = 0; i < std::abs(m); ++i)
            c = std::nextafter(c, m > 0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity());
        if (c > 0.0 && dev(c, e.a22) < best) {
            best = dev(c, e.a22);
            b11 = c;
            b22 = e.a22;
        }
        c = e.a22;
        for (int i = 0; i < std::abs(m); ++i)
            c = std::nextafter(c, m > 0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity());
        if (c > 0.0 && dev(e.a11, c) < best) {
            best = dev(e.a11, c);
            b11 = e.a11;
            b22 = c;
        }
    }
    e.a11 = b11;
    e.a22 = b22;
    return e;
}

double ellipticity_constant(Complex mu) {
    const double m = std::abs(mu);
    if (!(m < 1.0)) throw std::invalid_argument("ellipticity_constant: |mu| must be < 1");
    return (1.0 + m) / (1.0 - m);
}

double ellipticity_constant(const DilatationField& mu, const std::vector<Complex>& samples) {
    double K = 1.0;
    for (Complex z : samples) K = std::max(K, ellipticity_constant(mu(z)));
    return K;
}

Complex volume_preserving_coefficient(double nu, int sign) {
    if (!(std::abs(nu) < 1.0))
        throw std::invalid_argument("volume_preserving_coefficient: |nu| must be < 1");
    const double s = sign >= 0 ? 1.0 : -1.0;
    return Complex(nu * nu, s * nu * std::sqrt(1.0 - nu * nu));
}

}  // namespace qcf
