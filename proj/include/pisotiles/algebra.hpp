#pragma once

// Exact integer-polynomial arithmetic, certified complex roots and
// Pisot/Perron classification.

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <vector>

#include "pisotiles/errors.hpp"

namespace pisotiles {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Integer polynomial, coefficients stored lowest degree first.
class IntPolynomial {
public:
    explicit IntPolynomial(std::vector<BigInt> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    bool monic() const { return coeffs_.back() == 1; }

    IntPolynomial derivative() const;
    IntPolynomial operator*(const IntPolynomial& other) const;
    bool operator==(const IntPolynomial& other) const { return coeffs_ == other.coeffs_; }

    double eval(double x) const;
    std::complex<double> eval(std::complex<double> z) const;

private:
    std::vector<BigInt> coeffs_;
};

/// Polynomial with rational coefficients, lowest degree first.  The zero
/// polynomial has an empty coefficient vector and degree -1.
struct RatPolynomial {
    std::vector<BigRat> c;

    RatPolynomial() = default;
    explicit RatPolynomial(std::vector<BigRat> coeffs);
    static RatPolynomial from(const IntPolynomial& p);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    void normalize();

    RatPolynomial operator+(const RatPolynomial& o) const;
    RatPolynomial operator-(const RatPolynomial& o) const;
    RatPolynomial operator*(const RatPolynomial& o) const;
    /// Remainder of this by a non-zero divisor.
    RatPolynomial mod(const RatPolynomial& d) const;
};

/// Certified complex roots.  Each disk (value, radius) contains exactly one
/// root; disks are pairwise disjoint; non-real roots come in exact conjugate
/// pairs.  Sorted by descending modulus, then descending real part, then
/// descending imaginary part.
struct RootSet {
    struct Root {
        std::complex<double> value;
        double radius;
        int conj_index;  // index of the conjugate root; self for real roots
    };
    std::vector<Root> roots;

    bool is_real(int i) const { return roots[i].value.imag() == 0.0; }
};

/// Subset of the roots of `poly` used as an expansion spectrum.
struct SpectrumSelection {
    IntPolynomial poly;
    std::vector<int> selected;  // indices into isolate_roots(poly)
    int multiplicity = 1;
};

enum class Verdict { Yes, No, Undecidable };

RootSet isolate_roots(const IntPolynomial& poly, double precision = 1e-12);

/// Yes iff every non-selected root has certified modulus < 1.  Undecidable
/// when a non-selected disk straddles the unit circle at current precision.
/// `selected` must be non-empty and closed under conjugation.
Verdict is_pisot_family(const RootSet& roots, const std::vector<int>& selected,
                        double tol = 0.0);
Verdict is_pisot_family(const SpectrumSelection& sel, double precision = 1e-12,
                        double tol = 0.0);

bool is_pisot_number(const IntPolynomial& poly, double precision = 1e-12);
bool is_perron_root(const IntPolynomial& poly, double precision = 1e-12);

/// p_n = sum of n-th powers of all roots, exact via Newton's identities.
std::vector<BigInt> power_sums(const IntPolynomial& poly, int n_max);

/// h with q*h == 1 (mod p), deg h < deg p.
RatPolynomial field_inverse(const RatPolynomial& q, const IntPolynomial& p);

/// Distance from x to the nearest integer, in [0, 0.5].
double dist_to_integers(double x);

}  // namespace pisotiles
