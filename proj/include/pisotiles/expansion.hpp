#pragma once

// Expansion map in real canonical block form: block arithmetic, the block-max
// norm, the complex-coordinate transform and the alpha/beta vector machinery.

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "pisotiles/algebra.hpp"

namespace pisotiles {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

/// Complex coordinates of a vector restricted to a single block copy H_j.
struct FImage {
    CVec entries;  // m values: s real slots, then t conjugate pairs
    int j;         // which copy the input lived in (0-based)
};

struct VandermondeFamily {
    std::vector<Vec> family;  // x, phi x, ..., phi^(m-1) x
    double det;               // m x m determinant in H_j coordinates
    bool independent;
};

/// Expanding linear map, block-diagonal with J identical copies of a block
/// psi made of s real scalars and t rotation-scaling 2x2 blocks.
class ExpansionMap {
public:
    ExpansionMap(std::vector<double> real_blocks,
                 std::vector<std::pair<double, double>> complex_blocks,
                 int multiplicity, IntPolynomial min_poly);

    int s() const { return static_cast<int>(real_blocks_.size()); }
    int t() const { return static_cast<int>(complex_blocks_.size()); }
    int J() const { return J_; }
    int m() const { return s() + 2 * t(); }
    int d() const { return J_ * m(); }
    const IntPolynomial& min_poly() const { return min_poly_; }
    const std::vector<double>& real_blocks() const { return real_blocks_; }
    const std::vector<std::pair<double, double>>& complex_blocks() const { return complex_blocks_; }

    bool is_diagonal() const { return complex_blocks_.empty(); }
    /// True when the block eigenvalues of one psi copy exhaust all roots of
    /// the minimal polynomial (enables the exact power-sum bridge).
    bool conjugate_complete() const { return conjugate_complete_; }

    double min_modulus() const { return min_modulus_; }
    double max_modulus() const { return max_modulus_; }
    double det_abs() const;  // |det| of the full d x d map

    Mat matrix() const;  // dense d x d representation

    Vec apply(const Vec& x) const;
    Vec apply_transpose(const Vec& x) const;
    Vec apply_inverse(const Vec& x) const;

    /// Max over sub-blocks of the Euclidean norm of the sub-block.
    double block_norm(const Vec& x) const;

    FImage f_transform(const Vec& x) const;  // x must lie in a single H_j
    Vec f_inverse(const FImage& z) const;

    /// Eigenvalues of psi in F-coordinate order (the diagonal matrix D).
    CVec f_eigenvalues() const;

    Vec alpha(int j) const;                  // 0-based copy index
    std::vector<Vec> alpha_vectors() const;  // J canonical indicator vectors
    Vec beta(int j) const;
    std::vector<Vec> beta_vectors() const;
    /// Conjugate-reciprocal dual of an arbitrary vector in a single block.
    Vec beta_for(const Vec& alpha_like) const;

    VandermondeFamily vandermonde_family(const Vec& x, double tol = 1e-9) const;

    Vec project(const Vec& x, int j) const;  // 0-based

    bool operator==(const ExpansionMap& o) const {
        return real_blocks_ == o.real_blocks_ && complex_blocks_ == o.complex_blocks_ &&
               J_ == o.J_ && min_poly_ == o.min_poly_;
    }

private:
    void check_dim(const Vec& x) const;
    std::vector<double> real_blocks_;
    std::vector<std::pair<double, double>> complex_blocks_;
    int J_;
    IntPolynomial min_poly_;
    double min_modulus_ = 0.0, max_modulus_ = 0.0;
    bool conjugate_complete_ = false;
};

/// Linear map with tau(phi^k y_j) = phi^k alpha_j; commutes with phi.
Mat fit_tau(const ExpansionMap& phi, const std::vector<Vec>& y_points, double tol = 1e-9);

}  // namespace pisotiles
