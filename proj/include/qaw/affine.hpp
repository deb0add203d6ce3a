#pragma once

#include <vector>

// Dense n x n linear algebra for small n, affine maps on R^n, and bases.

namespace qaw {

using Vec = std::vector<double>;

/// Row-major dense square matrix.
class Mat {
 public:
  Mat() = default;
  Mat(int n, double diag = 0.0);
  static Mat identity(int n);
  static Mat from_rows(const std::vector<Vec>& rows);

  int dim() const { return n_; }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  double at(int i, int j) const {
    return data_[static_cast<std::size_t>(i * n_ + j)];
  }

  Vec apply(const Vec& x) const;
  Mat multiply(const Mat& other) const;
  Mat transpose() const;

  /// Determinant via LU with partial pivoting.
  double det() const;
  /// Inverse; throws SingularMapError when |det| is below 1e-12 relative to
  /// the Hadamard bound of the matrix.
  Mat inverse() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);

/// Affine map x -> linear * x + translation with invertible linear part.
struct AffineMap {
  Mat linear;
  Vec translation;

  AffineMap(Mat lin, Vec trans);
  static AffineMap identity(int n);
  static AffineMap translate(Vec y);

  int dim() const { return linear.dim(); }
  Vec apply(const Vec& x) const;
  Vec apply_inverse(const Vec& x) const;
  /// this after other: (this o other)(x) = this(other(x)).
  AffineMap compose(const AffineMap& other) const;

  const Mat& inverse_linear() const { return inv_linear_; }

 private:
  Mat inv_linear_;
};

/// A basis of R^n given as n linearly independent vectors.
struct BasisSpec {
  std::vector<Vec> vectors;

  explicit BasisSpec(std::vector<Vec> v);
  static BasisSpec standard(int n);
  int dim() const { return static_cast<int>(vectors.size()); }
};

}  // namespace qaw
