#include "qaw/affine.hpp"

#include <cmath>
#include <utility>

#include "qaw/errors.hpp"

namespace qaw {

Mat::Mat(int n, double diag) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {
  for (int i = 0; i < n; ++i) at(i, i) = diag;
}

Mat Mat::identity(int n) { return Mat(n, 1.0); }

Mat Mat::from_rows(const std::vector<Vec>& rows) {
  int n = static_cast<int>(rows.size());
  Mat m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw DimensionError("matrix rows must form a square matrix");
    for (int j = 0; j < n; ++j)
      m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

Vec Mat::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw DimensionError("matrix-vector dimension mismatch");
  Vec y(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += at(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

Mat Mat::multiply(const Mat& other) const {
  if (other.n_ != n_) throw DimensionError("matrix-matrix dimension mismatch");
  Mat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      double a = at(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < n_; ++j) r.at(i, j) += a * other.at(k, j);
    }
  return r;
}

Mat Mat::transpose() const {
  Mat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  return r;
}

namespace {

// LU with partial pivoting; returns false on an exactly singular pivot.
bool lu_decompose(Mat& a, std::vector<int>& perm, double& det) {
  int n = a.dim();
  perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a.at(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return false;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a.at(pivot, j), a.at(col, j));
      std::swap(perm[static_cast<std::size_t>(pivot)],
                perm[static_cast<std::size_t>(col)]);
      det = -det;
    }
    det *= a.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      double f = a.at(r, col) / a.at(col, col);
      a.at(r, col) = f;
      for (int j = col + 1; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
    }
  }
  return true;
}

double hadamard_bound(const Mat& m) {
  double prod = 1.0;
  for (int i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.dim(); ++j) s += m.at(i, j) * m.at(i, j);
    prod *= std::sqrt(s);
  }
  return prod;
}

}  // namespace

double Mat::det() const {
  Mat a = *this;
  std::vector<int> perm;
  double d;
  if (!lu_decompose(a, perm, d)) return 0.0;
  return d;
}

Mat Mat::inverse() const {
  double scale = hadamard_bound(*this);
  double d = det();
  if (std::abs(d) <= 1e-12 * std::max(scale, 1e-300))
    throw SingularMapError("linear part is singular (relative tol 1e-12)");
  Mat a = *this;
  std::vector<int> perm;
  double dd;
  lu_decompose(a, perm, dd);
  Mat inv(n_);
  for (int col = 0; col < n_; ++col) {
    Vec e(static_cast<std::size_t>(n_), 0.0);
    e[static_cast<std::size_t>(col)] = 1.0;
    // forward substitution with permutation, then back substitution
    Vec y(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = e[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      for (int j = 0; j < i; ++j) s -= a.at(i, j) * y[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = y[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n_; ++j)
        s -= a.at(i, j) * inv.at(j, col);
      inv.at(i, col) = s / a.at(i, i);
    }
  }
  return inv;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

AffineMap::AffineMap(Mat lin, Vec trans)
    : linear(std::move(lin)), translation(std::move(trans)) {
  if (static_cast<int>(translation.size()) != linear.dim())
    throw DimensionError("affine map: translation dimension mismatch");
  inv_linear_ = linear.inverse();  // validates invertibility
}

AffineMap AffineMap::identity(int n) {
  return AffineMap(Mat::identity(n), Vec(static_cast<std::size_t>(n), 0.0));
}

AffineMap AffineMap::translate(Vec y) {
  int n = static_cast<int>(y.size());
  return AffineMap(Mat::identity(n), std::move(y));
}

Vec AffineMap::apply(const Vec& x) const {
  Vec y = linear.apply(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += translation[i];
  return y;
}

Vec AffineMap::apply_inverse(const Vec& x) const {
  Vec d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - translation[i];
  return inv_linear_.apply(d);
}

AffineMap AffineMap::compose(const AffineMap& other) const {
  Mat lin = linear.multiply(other.linear);
  Vec trans = linear.apply(other.translation);
  for (std::size_t i = 0; i < trans.size(); ++i) trans[i] += translation[i];
  return AffineMap(std::move(lin), std::move(trans));
}

BasisSpec::BasisSpec(std::vector<Vec> v) : vectors(std::move(v)) {
  int n = static_cast<int>(vectors.size());
  if (n == 0) throw ParameterError("basis: empty vector list");
  for (const Vec& x : vectors)
    if (static_cast<int>(x.size()) != n)
      throw DimensionError("basis: vector length must equal the count");
  Mat m = Mat::from_rows(vectors);
  m.inverse();  // throws when dependent
}

BasisSpec BasisSpec::standard(int n) {
  std::vector<Vec> v(static_cast<std::size_t>(n),
                     Vec(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  return BasisSpec(std::move(v));
}

}  // namespace qaw
