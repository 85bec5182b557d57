#include "modalfit/pencil.hpp"

#include <string>

#include "modalfit/cholesky.hpp"
#include "modalfit/errors.hpp"

namespace modalfit {

FeasibleBox::FeasibleBox(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  validate();
}

void FeasibleBox::validate() const {
  if (lower.size() != upper.size()) throw DimensionError("box bounds have different lengths");
  for (Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw InvalidArgument("box coordinate " + std::to_string(i) + ": lower bound " +
                            std::to_string(lower[i]) + " is not below upper bound " +
                            std::to_string(upper[i]));
    }
  }
}

bool FeasibleBox::contains(const Vector& x) const {
  if (x.size() != size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

Vector FeasibleBox::project(const Vector& x) const {
  if (x.size() != size()) throw DimensionError("projection: point has wrong length");
  return x.cwiseMax(lower).cwiseMin(upper);
}

Vector FeasibleBox::midpoint() const { return 0.5 * (lower + upper); }

Vector default_start(const FeasibleBox& box) { return box.midpoint(); }

ParameterScaling::ParameterScaling(Vector reference) : reference_(std::move(reference)) {
  for (Index i = 0; i < reference_.size(); ++i) {
    if (!(reference_[i] != 0.0)) {
      throw InvalidArgument("scaling reference component " + std::to_string(i) + " is zero");
    }
  }
}

Vector ParameterScaling::to_scaled(const Vector& physical) const {
  if (physical.size() != reference_.size()) throw DimensionError("scaling: length mismatch");
  return physical.cwiseQuotient(reference_);
}

Vector ParameterScaling::to_physical(const Vector& scaled) const {
  if (scaled.size() != reference_.size()) throw DimensionError("scaling: length mismatch");
  return scaled.cwiseProduct(reference_);
}

FeasibleBox ParameterScaling::to_scaled(const FeasibleBox& physical) const {
  Vector a = to_scaled(physical.lower);
  Vector b = to_scaled(physical.upper);
  // A negative reference flips the interval.
  return FeasibleBox(a.cwiseMin(b), a.cwiseMax(b));
}

Vector ParameterScaling::gradient_to_scaled(const Vector& physical_gradient) const {
  return physical_gradient.cwiseProduct(reference_);
}

ParametricPencil::ParametricPencil(SparseSymMatrix k0, SparseSymMatrix m0,
                                   std::vector<SparseSymMatrix> dk,
                                   std::vector<SparseSymMatrix> dm,
                                   std::vector<ParameterInfo> params)
    : k0_(std::move(k0)),
      m0_(std::move(m0)),
      dk_(std::move(dk)),
      dm_(std::move(dm)),
      params_(std::move(params)) {
  if (dk_.size() != params_.size() || dm_.size() != params_.size()) {
    throw DimensionError("pencil: increment count does not match parameter count");
  }
  if (!k0_.shares_pattern(m0_)) throw InvalidArgument("pencil: K0 and M0 patterns differ");
  for (std::size_t j = 0; j < params_.size(); ++j) {
    if (!dk_[j].shares_pattern(k0_) || !dm_[j].shares_pattern(k0_)) {
      throw InvalidArgument("pencil: increments of parameter '" + params_[j].name +
                            "' do not share the common pattern");
    }
  }
}

std::pair<SparseSymMatrix, SparseSymMatrix> ParametricPencil::evaluate(const Vector& x) const {
  if (x.size() != param_count()) {
    throw DimensionError("pencil evaluate: got " + std::to_string(x.size()) +
                         " parameters, expected " + std::to_string(param_count()));
  }
  SparseSymMatrix k = k0_;
  SparseSymMatrix m = m0_;
  for (Index j = 0; j < param_count(); ++j) {
    k = k.plus_scaled(x[j], dk_[static_cast<std::size_t>(j)]);
    m = m.plus_scaled(x[j], dm_[static_cast<std::size_t>(j)]);
  }
  return {std::move(k), std::move(m)};
}

std::pair<const SparseSymMatrix&, const SparseSymMatrix&> ParametricPencil::derivative(
    Index j) const {
  if (j < 0 || j >= param_count()) {
    throw IndexError("pencil derivative: parameter index " + std::to_string(j) +
                     " out of range [0, " + std::to_string(param_count()) + ")");
  }
  return {dk_[static_cast<std::size_t>(j)], dm_[static_cast<std::size_t>(j)]};
}

ParametricPencil ParametricPencil::rescaled(const ParameterScaling& scaling) const {
  if (scaling.reference().size() != param_count()) {
    throw DimensionError("pencil rescale: scaling length does not match parameter count");
  }
  std::vector<SparseSymMatrix> dk, dm;
  for (Index j = 0; j < param_count(); ++j) {
    const double r = scaling.reference()[j];
    dk.push_back(dk_[static_cast<std::size_t>(j)].scaled(r));
    dm.push_back(dm_[static_cast<std::size_t>(j)].scaled(r));
  }
  return ParametricPencil(k0_, m0_, std::move(dk), std::move(dm), params_);
}

void ParametricPencil::check_definite_on(const FeasibleBox& box) const {
  if (box.size() != param_count()) throw DimensionError("box length does not match pencil");
  const Index l = param_count();
  if (l > 20) throw InvalidArgument("corner check limited to 20 parameters");
  for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << l); ++corner) {
    Vector x(l);
    for (Index j = 0; j < l; ++j) x[j] = (corner >> j) & 1U ? box.upper[j] : box.lower[j];
    const auto [k, m] = evaluate(x);
    try {
      (void)cholesky_factorize(k);
      (void)cholesky_factorize(m);
    } catch (const NotPositiveDefinite& e) {
      throw InvalidArgument("pencil is not definite at box corner " + std::to_string(corner) +
                            ": " + e.what());
    }
  }
}

}  // namespace modalfit
