#include "pisotiles/expansion.hpp"

#include <algorithm>
#include <cmath>

namespace pisotiles {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

ExpansionMap::ExpansionMap(std::vector<double> real_blocks,
                           std::vector<std::pair<double, double>> complex_blocks,
                           int multiplicity, IntPolynomial min_poly)
    : real_blocks_(std::move(real_blocks)),
      complex_blocks_(std::move(complex_blocks)),
      J_(multiplicity),
      min_poly_(std::move(min_poly)) {
    if (J_ < 1) throw Error(ErrorCode::Parse, "multiplicity must be positive");
    if (m() == 0) throw Error(ErrorCode::Parse, "expansion map needs at least one block");
    if (!min_poly_.monic()) throw Error(ErrorCode::NonMonic, "minimal polynomial must be monic");

    std::vector<double> moduli;
    for (double l : real_blocks_) moduli.push_back(std::abs(l));
    for (auto [a, b] : complex_blocks_) moduli.push_back(std::hypot(a, b));
    min_modulus_ = *std::min_element(moduli.begin(), moduli.end());
    max_modulus_ = *std::max_element(moduli.begin(), moduli.end());
    if (min_modulus_ <= 1.0)
        throw Error(ErrorCode::Parse, "expansion map must have all eigenvalue moduli > 1");

    // every block eigenvalue must be a root of the minimal polynomial
    const RootSet rs = isolate_roots(min_poly_, 1e-9);
    std::vector<bool> matched(rs.roots.size(), false);
    auto match = [&](std::complex<double> z) {
        for (size_t i = 0; i < rs.roots.size(); ++i) {
            if (std::abs(rs.roots[i].value - z) <= 1e-6 * (1.0 + std::abs(z))) {
                matched[i] = true;
                return true;
            }
        }
        return false;
    };
    for (double l : real_blocks_)
        if (!match({l, 0.0}))
            throw Error(ErrorCode::Parse, "real block eigenvalue is not a root of min_poly");
    for (auto [a, b] : complex_blocks_)
        if (!match({a, b}) || !match({a, -b}))
            throw Error(ErrorCode::Parse, "complex block eigenvalue is not a root of min_poly");
    conjugate_complete_ =
        std::all_of(matched.begin(), matched.end(), [](bool v) { return v; }) &&
        static_cast<int>(rs.roots.size()) == m();
}

double ExpansionMap::det_abs() const {
    double det = 1.0;
    for (double l : real_blocks_) det *= std::abs(l);
    for (auto [a, b] : complex_blocks_) det *= a * a + b * b;
    double out = 1.0;
    for (int j = 0; j < J_; ++j) out *= det;
    return out;
}

Mat ExpansionMap::matrix() const {
    Mat M = Mat::Zero(d(), d());
    for (int j = 0; j < J_; ++j) {
        int off = j * m();
        for (double l : real_blocks_) {
            M(off, off) = l;
            ++off;
        }
        for (auto [a, b] : complex_blocks_) {
            M(off, off) = a;
            M(off, off + 1) = -b;
            M(off + 1, off) = b;
            M(off + 1, off + 1) = a;
            off += 2;
        }
    }
    return M;
}

void ExpansionMap::check_dim(const Vec& x) const {
    if (x.size() != d()) throw Error(ErrorCode::DimensionMismatch, "vector dimension mismatch");
}

Vec ExpansionMap::apply(const Vec& x) const {
    check_dim(x);
    Vec y(d());
    for (int j = 0; j < J_; ++j) {
        int off = j * m();
        for (double l : real_blocks_) {
            y[off] = l * x[off];
            ++off;
        }
        for (auto [a, b] : complex_blocks_) {
            y[off] = a * x[off] - b * x[off + 1];
            y[off + 1] = b * x[off] + a * x[off + 1];
            off += 2;
        }
    }
    return y;
}

Vec ExpansionMap::apply_transpose(const Vec& x) const {
    check_dim(x);
    Vec y(d());
    for (int j = 0; j < J_; ++j) {
        int off = j * m();
        for (double l : real_blocks_) {
            y[off] = l * x[off];
            ++off;
        }
        for (auto [a, b] : complex_blocks_) {
            y[off] = a * x[off] + b * x[off + 1];
            y[off + 1] = -b * x[off] + a * x[off + 1];
            off += 2;
        }
    }
    return y;
}

Vec ExpansionMap::apply_inverse(const Vec& x) const {
    check_dim(x);
    Vec y(d());
    for (int j = 0; j < J_; ++j) {
        int off = j * m();
        for (double l : real_blocks_) {
            y[off] = x[off] / l;
            ++off;
        }
        for (auto [a, b] : complex_blocks_) {
            const double n2 = a * a + b * b;
            y[off] = (a * x[off] + b * x[off + 1]) / n2;
            y[off + 1] = (-b * x[off] + a * x[off + 1]) / n2;
            off += 2;
        }
    }
    return y;
}

double ExpansionMap::block_norm(const Vec& x) const {
    check_dim(x);
    double best = 0.0;
    for (int j = 0; j < J_; ++j) {
        int off = j * m();
        for (int k = 0; k < s(); ++k, ++off) best = std::max(best, std::abs(x[off]));
        for (int k = 0; k < t(); ++k, off += 2)
            best = std::max(best, std::hypot(x[off], x[off + 1]));
    }
    return best;
}

FImage ExpansionMap::f_transform(const Vec& x) const {
    check_dim(x);
    int block = -1;
    for (int j = 0; j < J_; ++j) {
        const double nrm = x.segment(j * m(), m()).cwiseAbs().maxCoeff();
        if (nrm > 1e-14 * (1.0 + x.cwiseAbs().maxCoeff())) {
            if (block >= 0)
                throw Error(ErrorCode::NotInSingleBlock, "vector spans more than one H_j block");
            block = j;
        }
    }
    if (block < 0) block = 0;  // zero vector lives in every block
    FImage out;
    out.j = block;
    out.entries.resize(m());
    const int off = block * m();
    for (int k = 0; k < s(); ++k) out.entries[k] = x[off + k];
    for (int k = 0; k < t(); ++k) {
        const double u = x[off + s() + 2 * k], v = x[off + s() + 2 * k + 1];
        out.entries[s() + 2 * k] = std::complex<double>(u, v) / kSqrt2;
        out.entries[s() + 2 * k + 1] = std::complex<double>(u, -v) / kSqrt2;
    }
    return out;
}

Vec ExpansionMap::f_inverse(const FImage& z) const {
    if (z.entries.size() != m())
        throw Error(ErrorCode::DimensionMismatch, "F-image has wrong length");
    if (z.j < 0 || z.j >= J_) throw Error(ErrorCode::IndexOutOfRange, "block index out of range");
    Vec x = Vec::Zero(d());
    const int off = z.j * m();
    for (int k = 0; k < s(); ++k) x[off + k] = z.entries[k].real();
    for (int k = 0; k < t(); ++k) {
        const std::complex<double> w = z.entries[s() + 2 * k];
        x[off + s() + 2 * k] = kSqrt2 * w.real();
        x[off + s() + 2 * k + 1] = kSqrt2 * w.imag();
    }
    return x;
}

CVec ExpansionMap::f_eigenvalues() const {
    CVec D(m());
    for (int k = 0; k < s(); ++k) D[k] = real_blocks_[k];
    for (int k = 0; k < t(); ++k) {
        D[s() + 2 * k] = std::complex<double>(complex_blocks_[k].first, complex_blocks_[k].second);
        D[s() + 2 * k + 1] = std::conj(D[s() + 2 * k]);
    }
    return D;
}

Vec ExpansionMap::alpha(int j) const {
    if (j < 0 || j >= J_) throw Error(ErrorCode::IndexOutOfRange, "copy index out of range");
    Vec a = Vec::Zero(d());
    a.segment(j * m(), m()).setOnes();
    return a;
}

std::vector<Vec> ExpansionMap::alpha_vectors() const {
    std::vector<Vec> out;
    for (int j = 0; j < J_; ++j) out.push_back(alpha(j));
    return out;
}

Vec ExpansionMap::beta_for(const Vec& alpha_like) const {
    FImage fa = f_transform(alpha_like);
    for (int k = 0; k < m(); ++k)
        if (std::abs(fa.entries[k]) < 1e-300)
            throw Error(ErrorCode::ZeroCoordinate, "F-image has a vanishing coordinate");
    FImage fb;
    fb.j = fa.j;
    fb.entries.resize(m());
    for (int k = 0; k < m(); ++k) fb.entries[k] = 1.0 / std::conj(fa.entries[k]);
    return f_inverse(fb);
}

Vec ExpansionMap::beta(int j) const { return beta_for(alpha(j)); }

std::vector<Vec> ExpansionMap::beta_vectors() const {
    std::vector<Vec> out;
    for (int j = 0; j < J_; ++j) out.push_back(beta(j));
    return out;
}

VandermondeFamily ExpansionMap::vandermonde_family(const Vec& x, double tol) const {
    FImage fx = f_transform(x);  // validates single-block membership
    VandermondeFamily out;
    Vec v = x;
    Mat M(m(), m());
    for (int k = 0; k < m(); ++k) {
        out.family.push_back(v);
        M.col(k) = v.segment(fx.j * m(), m());
        v = apply(v);
    }
    out.det = M.determinant();
    out.independent = std::abs(out.det) > tol;
    return out;
}

Vec ExpansionMap::project(const Vec& x, int j) const {
    check_dim(x);
    if (j < 0 || j >= J_) throw Error(ErrorCode::IndexOutOfRange, "copy index out of range");
    Vec y = Vec::Zero(d());
    y.segment(j * m(), m()) = x.segment(j * m(), m());
    return y;
}

Mat fit_tau(const ExpansionMap& phi, const std::vector<Vec>& y_points, double tol) {
    const int d = phi.d(), m = phi.m(), J = phi.J();
    if (static_cast<int>(y_points.size()) != J)
        throw Error(ErrorCode::DimensionMismatch, "need one base point per block copy");
    Mat Y(d, d), W(d, d);
    for (int j = 0; j < J; ++j) {
        Vec y = y_points[j];
        Vec a = phi.alpha(j);
        for (int k = 0; k < m; ++k) {
            Y.col(j * m + k) = y;
            W.col(j * m + k) = a;
            y = phi.apply(y);
            a = phi.apply(a);
        }
    }
    Eigen::FullPivLU<Mat> lu(Y);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < tol)
        throw Error(ErrorCode::DegenerateBasis, "base points do not span R^d");
    return W * lu.inverse();
}

}  // namespace pisotiles
