#include "nmfbs/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nmfbs {

InnerProductSpace::InnerProductSpace(std::vector<double> weights,
                                     bool compensated_sums)
    : weights_(std::move(weights)), compensated_(compensated_sums) {
  if (weights_.empty()) {
    throw std::invalid_argument("InnerProductSpace: dim must be >= 1");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument(
          "InnerProductSpace: weights must be strictly positive and finite");
    }
  }
}

InnerProductSpace::InnerProductSpace(std::size_t dim, double weight,
                                     bool compensated_sums)
    : InnerProductSpace(std::vector<double>(dim, weight), compensated_sums) {}

SpacePtr make_space(std::vector<double> weights, bool compensated_sums) {
  return std::make_shared<InnerProductSpace>(std::move(weights),
                                             compensated_sums);
}

SpacePtr make_uniform_space(std::size_t dim, double weight,
                            bool compensated_sums) {
  return std::make_shared<InnerProductSpace>(dim, weight, compensated_sums);
}

SpacePtr make_euclidean_space(std::size_t dim) {
  return make_uniform_space(dim, 1.0);
}

HilbertVec::HilbertVec(SpacePtr space)
    : space_(std::move(space)), coeffs_(space_ ? space_->dim() : 0, 0.0) {
  if (!space_) throw std::invalid_argument("HilbertVec: null space");
}

HilbertVec::HilbertVec(SpacePtr space, std::vector<double> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (!space_) throw std::invalid_argument("HilbertVec: null space");
  if (coeffs_.size() != space_->dim()) {
    throw std::invalid_argument("HilbertVec: coeffs length != space dim");
  }
}

void HilbertVec::fill(double v) { std::fill(coeffs_.begin(), coeffs_.end(), v); }

bool HilbertVec::all_finite() const {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

bool same_space(const HilbertVec& x, const HilbertVec& y) {
  if (x.space() == y.space()) return true;
  if (!x.space() || !y.space()) return false;
  return x.space()->dim() == y.space()->dim() &&
         x.space()->weights() == y.space()->weights();
}

namespace {
void require_same_space(const HilbertVec& x, const HilbertVec& y,
                        const char* op) {
  if (!same_space(x, y)) {
    throw std::invalid_argument(std::string(op) +
                                ": vectors belong to different spaces");
  }
}
}  // namespace

double inner(const HilbertVec& x, const HilbertVec& y) {
  require_same_space(x, y, "inner");
  const auto& w = x.space()->weights();
  const std::size_t n = x.size();
  if (x.space()->compensated_sums()) {
    // Kahan summation.
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double term = w[i] * x[i] * y[i] - c;
      const double t = s + term;
      c = (t - s) - term;
      s = t;
    }
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double norm(const HilbertVec& x) { return std::sqrt(inner(x, x)); }

HilbertVec axpy(double a, const HilbertVec& x, const HilbertVec& y) {
  require_same_space(x, y, "axpy");
  HilbertVec r(y.space(), y.coeffs());
  axpy_inplace(a, x, r);
  return r;
}

void axpy_inplace(double a, const HilbertVec& x, HilbertVec& y) {
  require_same_space(x, y, "axpy");
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

HilbertVec scale(double a, const HilbertVec& x) {
  HilbertVec r(x.space(), x.coeffs());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= a;
  return r;
}

HilbertVec sub(const HilbertVec& x, const HilbertVec& y) {
  require_same_space(x, y, "sub");
  HilbertVec r(x.space(), x.coeffs());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

HilbertVec copy(const HilbertVec& x) { return HilbertVec(x.space(), x.coeffs()); }

double max_abs(const HilbertVec& x) {
  double m = 0.0;
  for (double c : x.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace nmfbs
