#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace nmfbs {

/// Finite-dimensional weighted inner-product space: a discrete stand-in for
/// L2 with a diagonal (lumped-mass) inner product. Weights are strictly
/// positive cell measures (e.g. h^2 on a uniform 2-D grid, h^2*dt in
/// space-time). Immutable once constructed and safe to share across threads.
class InnerProductSpace {
public:
  explicit InnerProductSpace(std::vector<double> weights,
                             bool compensated_sums = false);

  /// Uniform weight convenience constructor.
  InnerProductSpace(std::size_t dim, double weight,
                    bool compensated_sums = false);

  std::size_t dim() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  bool compensated_sums() const { return compensated_; }

private:
  std::vector<double> weights_;
  bool compensated_;
};

using SpacePtr = std::shared_ptr<const InnerProductSpace>;

SpacePtr make_space(std::vector<double> weights, bool compensated_sums = false);
SpacePtr make_uniform_space(std::size_t dim, double weight,
                            bool compensated_sums = false);
/// Euclidean space (unit weights); used by the synthetic test problems.
SpacePtr make_euclidean_space(std::size_t dim);

/// Coefficient vector bound to its space. Plain data with value semantics.
class HilbertVec {
public:
  HilbertVec() = default;
  explicit HilbertVec(SpacePtr space);
  HilbertVec(SpacePtr space, std::vector<double> coeffs);

  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }
  const SpacePtr& space() const { return space_; }

  void fill(double v);
  bool all_finite() const;

private:
  SpacePtr space_;
  std::vector<double> coeffs_;
};

/// True if x and y live in the same space (pointer identity, or equal
/// dimension and weights).
bool same_space(const HilbertVec& x, const HilbertVec& y);

/// Weighted scalar product sum_i w_i x_i y_i. Summation order is fixed
/// left-to-right; Kahan summation if the space was built with
/// compensated_sums. Throws std::invalid_argument on space mismatch.
double inner(const HilbertVec& x, const HilbertVec& y);

/// Induced norm sqrt(inner(x, x)).
double norm(const HilbertVec& x);

/// a*x + y, elementwise.
HilbertVec axpy(double a, const HilbertVec& x, const HilbertVec& y);
/// y += a*x in place.
void axpy_inplace(double a, const HilbertVec& x, HilbertVec& y);
HilbertVec scale(double a, const HilbertVec& x);
HilbertVec sub(const HilbertVec& x, const HilbertVec& y);
HilbertVec copy(const HilbertVec& x);

double max_abs(const HilbertVec& x);

}  // namespace nmfbs
