#pragma once

#include <functional>
#include <vector>

#include "qcf/geometry.hpp"

namespace qcf {

// Pointwise entries of a symmetric conductivity tensor with det = 1.
struct TensorEntries {
    double a11 = 1.0;
    double a12 = 0.0;
    double a22 = 1.0;

    // Extended-precision product difference; the naive form loses ~|a|^2 eps.
    double det() const {
        const long double p = static_cast<long double>(a11) * a22;
        const long double q = static_cast<long double>(a12) * a12;
        return static_cast<double>(p - q);
    }
    Mat2 matrix() const { return {a11, a12, a12, a22}; }
    Vec2 apply(Vec2 g) const { return {a11 * g.x + a12 * g.y, a12 * g.x + a22 * g.y}; }
    // Larger eigenvalue; the smaller one is its reciprocal when det = 1.
    double max_eigenvalue() const;
};

enum class FieldStructure { General, Radial, XOnly, YOnly, Constant };

// Symmetric det-1 matrix field A(z) with uniform ellipticity constant K.
// Entries are validated at every evaluated point; tensors with det != 1 are
// rejected, not rescaled.
class ConductivityTensor {
  public:
    using Evaluator = std::function<TensorEntries(Complex)>;

    ConductivityTensor(Evaluator eval, double K,
                       FieldStructure structure = FieldStructure::General);
    // Constant-entry tensor; K is derived from the eigenvalues.
    explicit ConductivityTensor(TensorEntries entries);

    static ConductivityTensor identity();
    // A_sp: the tensor generated by the log-spiral dilatation (1+i)/2 * z/conj(z).
    static ConductivityTensor log_spiral();
    // Radial family A generated by mu(z) = k(|z|) z/conj(z).
    static ConductivityTensor radial(std::function<Complex(double)> k, double K);
    // x-only family generated by mu(Re z).
    static ConductivityTensor x_only(std::function<Complex(double)> mu, double K);

    TensorEntries at(Complex z) const;
    double ellipticity() const { return K_; }
    FieldStructure structure() const { return structure_; }

  private:
    Evaluator eval_;
    double K_;
    FieldStructure structure_;
};

// Complex-valued dilatation field mu(z) with sup|mu| <= bound < 1.
struct DilatationField {
    std::function<Complex(Complex)> eval;
    double bound = 0.0;
    FieldStructure structure = FieldStructure::General;

    Complex operator()(Complex z) const { return eval(z); }
};

// mu = (a22 - a11 - 2i a12) / det(I + A); throws on invalid entries.
Complex mu_from_tensor(const TensorEntries& e);
Complex mu_from_tensor(const ConductivityTensor& A, Complex z);

// Inverse of the algebraic system: entries with det = 1 exactly. Requires |mu| < 1.
TensorEntries tensor_from_mu(Complex mu);

// K = (1 + |mu|) / (1 - |mu|). Requires |mu| < 1.
double ellipticity_constant(Complex mu);
// Sup of the pointwise constant over a sampling of the field.
double ellipticity_constant(const DilatationField& mu, const std::vector<Complex>& samples);

// k = nu^2 + sign * i nu sqrt(1 - nu^2); satisfies Re k = |k|^2. Requires |nu| < 1.
Complex volume_preserving_coefficient(double nu, int sign);

}  // namespace qcf
