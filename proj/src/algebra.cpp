#include "pisotiles/algebra.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pisotiles {

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty() || coeffs_.back() == 0)
        throw Error(ErrorCode::Parse, "polynomial must have a non-zero leading coefficient");
}

IntPolynomial IntPolynomial::derivative() const {
    if (degree() == 0) throw Error(ErrorCode::Internal, "derivative of a constant");
    std::vector<BigInt> d(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<int>(i);
    return IntPolynomial(std::move(d));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& other) const {
    std::vector<BigInt> out(coeffs_.size() + other.coeffs_.size() - 1, BigInt(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < other.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * other.coeffs_[j];
    return IntPolynomial(std::move(out));
}

double IntPolynomial::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * x + it->convert_to<double>();
    return acc;
}

std::complex<double> IntPolynomial::eval(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * z + it->convert_to<double>();
    return acc;
}

RatPolynomial::RatPolynomial(std::vector<BigRat> coeffs) : c(std::move(coeffs)) { normalize(); }

RatPolynomial RatPolynomial::from(const IntPolynomial& p) {
    std::vector<BigRat> c(p.coeffs().begin(), p.coeffs().end());
    return RatPolynomial(std::move(c));
}

void RatPolynomial::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

RatPolynomial RatPolynomial::operator+(const RatPolynomial& o) const {
    std::vector<BigRat> out(std::max(c.size(), o.c.size()), BigRat(0));
    for (size_t i = 0; i < c.size(); ++i) out[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) out[i] += o.c[i];
    return RatPolynomial(std::move(out));
}

RatPolynomial RatPolynomial::operator-(const RatPolynomial& o) const {
    std::vector<BigRat> out(std::max(c.size(), o.c.size()), BigRat(0));
    for (size_t i = 0; i < c.size(); ++i) out[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) out[i] -= o.c[i];
    return RatPolynomial(std::move(out));
}

RatPolynomial RatPolynomial::operator*(const RatPolynomial& o) const {
    if (is_zero() || o.is_zero()) return RatPolynomial();
    std::vector<BigRat> out(c.size() + o.c.size() - 1, BigRat(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) out[i + j] += c[i] * o.c[j];
    return RatPolynomial(std::move(out));
}

RatPolynomial RatPolynomial::mod(const RatPolynomial& d) const {
    if (d.is_zero()) throw Error(ErrorCode::Internal, "polynomial division by zero");
    std::vector<BigRat> r = c;
    const int dd = d.degree();
    while (static_cast<int>(r.size()) - 1 >= dd && !r.empty()) {
        if (r.back() == 0) { r.pop_back(); continue; }
        const BigRat q = r.back() / d.c.back();
        const size_t shift = r.size() - 1 - dd;
        for (int i = 0; i <= dd; ++i) r[shift + i] -= q * d.c[i];
        r.pop_back();
    }
    return RatPolynomial(std::move(r));
}

namespace {

RatPolynomial rat_gcd(RatPolynomial a, RatPolynomial b) {
    while (!b.is_zero()) {
        RatPolynomial r = a.mod(b);
        a = std::move(b);
        b = std::move(r);
    }
    // monic normalization
    if (!a.is_zero()) {
        const BigRat lead = a.c.back();
        for (auto& x : a.c) x /= lead;
    }
    return a;
}

void require_monic(const IntPolynomial& p) {
    if (!p.monic()) throw Error(ErrorCode::NonMonic, "polynomial must be monic");
}

struct LongPoly {
    std::vector<long double> c;  // lowest first
    std::complex<long double> eval(std::complex<long double> z) const {
        std::complex<long double> acc = 0.0L;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
};

}  // namespace

RootSet isolate_roots(const IntPolynomial& poly, double precision) {
    require_monic(poly);
    const int n = poly.degree();
    if (n < 1) throw Error(ErrorCode::Parse, "degree must be at least 1");

    // squarefree check: gcd(p, p') must be constant
    RatPolynomial g = rat_gcd(RatPolynomial::from(poly), RatPolynomial::from(poly.derivative()));
    if (g.degree() > 0)
        throw Error(ErrorCode::NotSquarefree, "polynomial has a repeated root");

    // companion-matrix estimates
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -poly.coeffs()[i].convert_to<double>();
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);

    LongPoly lp, lpd;
    lp.c.resize(n + 1);
    for (int i = 0; i <= n; ++i) lp.c[i] = static_cast<long double>(poly.coeffs()[i].convert_to<double>());
    lpd.c.resize(n);
    for (int i = 1; i <= n; ++i) lpd.c[i - 1] = lp.c[i] * i;

    std::vector<RootSet::Root> roots;
    for (int i = 0; i < n; ++i) {
        std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
        for (int it = 0; it < 200; ++it) {
            const auto f = lp.eval(z);
            const auto fp = lpd.eval(z);
            if (std::abs(fp) == 0.0L) break;
            const auto step = f / fp;
            z -= step;
            if (std::abs(step) < 1e-19L * (1.0L + std::abs(z))) break;
        }
        const auto fp = lpd.eval(z);
        const long double res = std::abs(fp) > 0.0L ? std::abs(lp.eval(z) / fp) : 1.0L;
        const double radius = static_cast<double>(n * res) + 1e-15 * (1.0 + static_cast<double>(std::abs(z)));
        roots.push_back({std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag())),
                         radius, -1});
    }

    // snap near-real roots onto the axis
    for (auto& r : roots)
        if (std::abs(r.value.imag()) <= std::max(r.radius, 4e-14 * (1.0 + std::abs(r.value.real()))))
            r.value = {r.value.real(), 0.0};

    // mirror conjugate pairs exactly
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i] || roots[i].value.imag() <= 0.0) continue;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < roots.size(); ++j) {
            if (used[j] || j == i || roots[j].value.imag() >= 0.0) continue;
            const double d = std::abs(roots[j].value - std::conj(roots[i].value));
            if (d < best_d) { best_d = d; best = static_cast<int>(j); }
        }
        if (best < 0) throw Error(ErrorCode::Internal, "unpaired complex root");
        roots[best].value = std::conj(roots[i].value);
        roots[best].radius = roots[i].radius = std::max(roots[i].radius, roots[best].radius);
        used[i] = used[best] = true;
    }

    std::sort(roots.begin(), roots.end(), [](const RootSet::Root& a, const RootSet::Root& b) {
        const double ma = std::abs(a.value), mb = std::abs(b.value);
        if (ma != mb) return ma > mb;
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });

    RootSet rs;
    rs.roots = std::move(roots);
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        if (rs.roots[i].value.imag() == 0.0) {
            rs.roots[i].conj_index = static_cast<int>(i);
        } else {
            for (size_t j = 0; j < rs.roots.size(); ++j)
                if (rs.roots[j].value == std::conj(rs.roots[i].value)) {
                    rs.roots[i].conj_index = static_cast<int>(j);
                    break;
                }
        }
    }

    for (size_t i = 0; i < rs.roots.size(); ++i) {
        if (rs.roots[i].radius > precision)
            throw Error(ErrorCode::Undecidable, "root disk radius exceeds requested precision");
        for (size_t j = i + 1; j < rs.roots.size(); ++j)
            if (std::abs(rs.roots[i].value - rs.roots[j].value) <=
                rs.roots[i].radius + rs.roots[j].radius)
                throw Error(ErrorCode::Undecidable, "root disks are not disjoint");
    }
    return rs;
}

Verdict is_pisot_family(const RootSet& roots, const std::vector<int>& selected, double tol) {
    if (selected.empty())
        throw Error(ErrorCode::Parse, "selection must be non-empty");
    std::vector<bool> in_sel(roots.roots.size(), false);
    for (int i : selected) {
        if (i < 0 || i >= static_cast<int>(roots.roots.size()))
            throw Error(ErrorCode::IndexOutOfRange, "selected root index out of range");
        in_sel[i] = true;
    }
    for (int i : selected)
        if (!in_sel[roots.roots[i].conj_index])
            throw Error(ErrorCode::Parse, "selection must be closed under conjugation");

    bool undecidable = false;
    for (size_t i = 0; i < roots.roots.size(); ++i) {
        if (in_sel[i]) continue;
        const double m = std::abs(roots.roots[i].value);
        const double r = roots.roots[i].radius + tol;
        if (m + r < 1.0) continue;          // certified inside the unit circle
        if (m - r > 1.0) return Verdict::No;  // certified outside
        undecidable = true;
    }
    return undecidable ? Verdict::Undecidable : Verdict::Yes;
}

Verdict is_pisot_family(const SpectrumSelection& sel, double precision, double tol) {
    return is_pisot_family(isolate_roots(sel.poly, precision), sel.selected, tol);
}

namespace {

// Index of the dominant real root > 1, or -1.
int dominant_real_root(const RootSet& rs) {
    int best = -1;
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        if (!rs.is_real(static_cast<int>(i))) continue;
        const double v = rs.roots[i].value.real();
        if (v > 1.0 && (best < 0 || v > rs.roots[best].value.real()))
            best = static_cast<int>(i);
    }
    return best;
}

}  // namespace

bool is_pisot_number(const IntPolynomial& poly, double precision) {
    require_monic(poly);
    const RootSet rs = isolate_roots(poly, precision);
    const int dom = dominant_real_root(rs);
    if (dom < 0) throw Error(ErrorCode::NoDominantRealRoot, "no real root greater than 1");
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        if (static_cast<int>(i) == dom) continue;
        const double m = std::abs(rs.roots[i].value);
        if (m + rs.roots[i].radius >= 1.0) {
            if (m - rs.roots[i].radius > 1.0) return false;
            if (m + rs.roots[i].radius < 1.0) continue;
            // straddles the unit circle
            if (std::abs(m - 1.0) <= rs.roots[i].radius)
                throw Error(ErrorCode::Undecidable, "conjugate modulus too close to 1");
            return false;
        }
    }
    return true;
}

bool is_perron_root(const IntPolynomial& poly, double precision) {
    require_monic(poly);
    const RootSet rs = isolate_roots(poly, precision);
    const int dom = dominant_real_root(rs);
    if (dom < 0) throw Error(ErrorCode::NoDominantRealRoot, "no real root greater than 1");
    const double theta = rs.roots[dom].value.real();
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        if (static_cast<int>(i) == dom) continue;
        if (std::abs(rs.roots[i].value) + rs.roots[i].radius >= theta - rs.roots[dom].radius)
            return false;
    }
    return true;
}

std::vector<BigInt> power_sums(const IntPolynomial& poly, int n_max) {
    require_monic(poly);
    if (n_max < 1) throw Error(ErrorCode::Parse, "n_max must be >= 1");
    const int n = poly.degree();
    // elementary symmetric functions: e_k = (-1)^k * coeff of x^(n-k)
    std::vector<BigInt> e(n + 1);
    e[0] = 1;
    for (int k = 1; k <= n; ++k) {
        e[k] = poly.coeffs()[n - k];
        if (k % 2 == 1) e[k] = -e[k];
    }
    std::vector<BigInt> p(n_max + 1);
    p[0] = n;
    for (int k = 1; k <= n_max; ++k) {
        BigInt acc = 0;
        const int lim = std::min(k, n);
        for (int i = 1; i <= lim; ++i) {
            BigInt term = e[i] * (i == k ? BigInt(k) : p[k - i]);
            if (i % 2 == 0) acc -= term; else acc += term;
        }
        p[k] = acc;
    }
    return std::vector<BigInt>(p.begin() + 1, p.end());
}

RatPolynomial field_inverse(const RatPolynomial& q, const IntPolynomial& p) {
    require_monic(p);
    const RatPolynomial pr = RatPolynomial::from(p);
    RatPolynomial r0 = pr, r1 = q.mod(pr);
    if (r1.is_zero()) throw Error(ErrorCode::NotInvertible, "q is zero modulo p");
    RatPolynomial t0, t1(std::vector<BigRat>{BigRat(1)});
    while (!r1.is_zero()) {
        // r0 = quo * r1 + rem, tracked on the t-sequence
        RatPolynomial rem = r0;
        RatPolynomial quo;
        {
            std::vector<BigRat> qc(std::max(0, r0.degree() - r1.degree() + 1), BigRat(0));
            std::vector<BigRat> rc = r0.c;
            const int dd = r1.degree();
            while (static_cast<int>(rc.size()) - 1 >= dd && !rc.empty()) {
                if (rc.back() == 0) { rc.pop_back(); continue; }
                const BigRat f = rc.back() / r1.c.back();
                const size_t shift = rc.size() - 1 - dd;
                qc[shift] = f;
                for (int i = 0; i <= dd; ++i) rc[shift + i] -= f * r1.c[i];
                rc.pop_back();
            }
            quo = RatPolynomial(std::move(qc));
            rem = RatPolynomial(std::move(rc));
        }
        RatPolynomial t2 = t0 - quo * t1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.degree() > 0) {
        if (r0.degree() < p.degree())
            throw Error(ErrorCode::NotIrreducible, "gcd exposes a non-trivial factor of p");
        throw Error(ErrorCode::NotInvertible, "q is zero modulo p");
    }
    // r0 is a non-zero constant: h = t0 / r0 reduced mod p
    RatPolynomial h = t0;
    for (auto& x : h.c) x /= r0.c[0];
    return h.mod(pr);
}

double dist_to_integers(double x) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "dist_to_integers needs a finite input");
    const double d = std::abs(x - std::nearbyint(x));
    return std::min(d, 0.5);
}

}  // namespace pisotiles
