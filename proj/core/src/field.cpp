#include "dmnls/field.hpp"

#include <algorithm>
#include <cmath>

#include "dmnls/errors.hpp"
#include "dmnls/spectral.hpp"

namespace dmnls {

Field::Field(GridPtr grid, Representation rep)
    : grid_(std::move(grid)), values_(grid_ ? grid_->size() : 0), rep_(rep) {
  if (!grid_) throw DomainError("field requires a grid");
}

Field::Field(GridPtr grid, ComplexVector values, Representation rep)
    : grid_(std::move(grid)), values_(std::move(values)), rep_(rep) {
  if (!grid_) throw DomainError("field requires a grid");
  if (values_.size() != grid_->size()) {
    throw DomainError("field length does not match grid size");
  }
}

Field Field::sample(GridPtr grid, const std::function<Complex(double)>& f) {
  Field out(std::move(grid));
  const auto x = out.grid().coordinates();
  for (std::size_t j = 0; j < out.size(); ++j) out.values_[j] = f(x[j]);
  return out;
}

void Field::transform_to(Representation rep) {
  if (rep == rep_) return;
  const auto& plan = fft_plan(values_.size());
  if (rep == Representation::Fourier) {
    plan.forward(values_);
  } else {
    plan.backward(values_);
    const double scale = 1.0 / static_cast<double>(values_.size());
    for (auto& v : values_) v *= scale;
  }
  rep_ = rep;
}

Field Field::to_fourier() const {
  Field out = *this;
  out.transform_to(Representation::Fourier);
  return out;
}

Field Field::to_physical() const {
  Field out = *this;
  out.transform_to(Representation::Physical);
  return out;
}

bool Field::is_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

Field& Field::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  if (other.rep_ == rep_) {
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  } else {
    Field tmp = other;
    tmp.transform_to(rep_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += tmp.values_[j];
  }
  return *this;
}

Field& Field::operator-=(const Field& other) {
  Field neg = other;
  neg *= -1.0;
  return *this += neg;
}

Field operator*(Complex s, Field f) { return f *= s; }
Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }

Field conj(const Field& f) {
  Field out = f.to_physical();
  for (auto& v : out.values()) v = std::conj(v);
  return out;
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
    throw DomainError("fields live on different grids");
  }
}

}  // namespace dmnls
