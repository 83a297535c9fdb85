#include "dmnls/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "dmnls/errors.hpp"

namespace dmnls {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  // FFTW_ESTIMATE picks the same algorithm on every run, so transforms are
  // bit-reproducible across processes.
  std::lock_guard lock(planner_mutex());
  ComplexVector scratch(n);
  const int len = static_cast<int>(n);
  forward_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                              FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_ || !backward_) throw NumericalError("FFTW planning failed");
  alignment_ = fftw_alignment_of(reinterpret_cast<double*>(scratch.data()));
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void FftPlan::execute(void* plan, std::span<Complex> data) const {
  if (data.size() != n_) throw DomainError("FFT length mismatch");
  if (fftw_alignment_of(reinterpret_cast<double*>(data.data())) == alignment_) {
    fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(data.data()), as_fftw(data.data()));
    return;
  }
  ComplexVector tmp(data.begin(), data.end());
  fftw_execute_dft(static_cast<fftw_plan>(plan), as_fftw(tmp.data()), as_fftw(tmp.data()));
  std::copy(tmp.begin(), tmp.end(), data.begin());
}

void FftPlan::forward(std::span<Complex> data) const { execute(forward_, data); }
void FftPlan::backward(std::span<Complex> data) const { execute(backward_, data); }

const FftPlan& fft_plan(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

Field propagate(const Field& f, double r) {
  if (!f.is_finite()) throw DomainError("propagate: non-finite input");
  if (r == 0.0) return f;
  const auto rep = f.representation();
  Field out = f.to_fourier();
  const auto k = f.grid().wavenumbers();
  auto v = out.values();
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= std::polar(1.0, -r * k[j] * k[j]);
  out.transform_to(rep);
  return out;
}

double mass(const Field& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  const double n = static_cast<double>(f.size());
  const double dx = f.grid().dx();
  return f.representation() == Representation::Physical ? dx * sum : dx * sum / n;
}

double grad_norm_sq(const Field& f) {
  const Field fh = f.to_fourier();
  const auto k = f.grid().wavenumbers();
  double sum = 0.0;
  const auto v = fh.values();
  for (std::size_t j = 0; j < v.size(); ++j) sum += k[j] * k[j] * std::norm(v[j]);
  return f.grid().dx() * sum / static_cast<double>(f.size());
}

double lp_norm(const Field& f, double q) {
  if (!(q >= 1.0)) throw DomainError("lp_norm requires q >= 1");
  const Field u = f.to_physical();
  double sum = 0.0;
  for (const auto& v : u.values()) sum += std::pow(std::abs(v), q);
  return std::pow(u.grid().dx() * sum, 1.0 / q);
}

Complex inner_product(const Field& f, const Field& g) {
  require_same_grid(f, g);
  const Field a = f.to_physical();
  const Field b = g.to_physical();
  Complex sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * std::conj(b[j]);
  return a.grid().dx() * sum;
}

Field derivative(const Field& f) {
  Field out = f.to_fourier();
  const auto k = f.grid().wavenumbers();
  auto v = out.values();
  const std::size_t nyquist = v.size() / 2;
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = j == nyquist ? Complex{} : Complex{0.0, k[j]} * v[j];
  }
  out.transform_to(Representation::Physical);
  return out;
}

double h1_norm_sq(const Field& f) { return mass(f) + grad_norm_sq(f); }

double boundary_mass_fraction(const Field& f) {
  const Field u = f.to_physical();
  const auto x = u.grid().coordinates();
  const double edge = 0.4 * u.grid().length();
  double outer = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double w = std::norm(u[j]);
    total += w;
    if (std::abs(x[j]) >= edge) outer += w;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace dmnls
