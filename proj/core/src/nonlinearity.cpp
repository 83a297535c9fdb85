#include "dmnls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dmnls/errors.hpp"
#include "dmnls/parallel.hpp"
#include "dmnls/spectral.hpp"

namespace dmnls {
namespace {

// |g|^{p-1} from |g|². Odd integer p uses repeated squaring.
class PowerLaw {
 public:
  explicit PowerLaw(double p) : half_exponent_(0.5 * (p - 1.0)) {
    const double m = std::round(half_exponent_);
    integer_ = m >= 0.0 && m == half_exponent_ && m < 64.0;
    int_exponent_ = integer_ ? static_cast<unsigned>(m) : 0u;
  }

  double operator()(double a2) const {
    if (half_exponent_ == 0.0) return 1.0;
    if (a2 == 0.0) return 0.0;
    if (integer_) {
      double result = 1.0;
      double base = a2;
      for (unsigned e = int_exponent_; e != 0; e >>= 1) {
        if (e & 1u) result *= base;
        base *= base;
      }
      return result;
    }
    return std::exp(half_exponent_ * std::log(a2));
  }

 private:
  double half_exponent_;
  bool integer_ = false;
  unsigned int_exponent_ = 0;
};

constexpr double kOverflowSq = kAmplitudeOverflow * kAmplitudeOverflow;
constexpr std::size_t kPhaseTableBytes = std::size_t{256} << 20;

}  // namespace

NonlinearitySpec NonlinearitySpec::unit(double p, std::size_t order) {
  NonlinearitySpec s;
  s.p = p;
  s.interval = IntervalKind::Unit;
  s.order = order;
  return s;
}

NonlinearitySpec NonlinearitySpec::line(double p, double half_width, std::size_t panel_nodes) {
  NonlinearitySpec s;
  s.p = p;
  s.interval = IntervalKind::Line;
  s.half_width = half_width;
  s.panel_nodes = panel_nodes;
  return s;
}

void NonlinearitySpec::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("nonlinearity exponent must be >= 1");
  if (interval == IntervalKind::Unit) {
    if (order < 4) throw DomainError("quadrature order must be >= 4");
    return;
  }
  if (!(half_width > 0.0)) throw DomainError("line truncation R must be positive");
  if (!(panel_width > 0.0)) throw DomainError("panel width must be positive");
  if (panel_nodes < 4) throw DomainError("panel node count must be >= 4");
  if (tail_closure && !(p > 3.0)) throw DomainError("tail closure requires p > 3");
}

QuadratureRule NonlinearitySpec::rule() const {
  validate();
  if (interval == IntervalKind::Unit) return gauss_legendre(order, 0.0, 1.0);
  return composite_gauss_legendre(-half_width, half_width, panel_width, panel_nodes);
}

AveragedNonlinearity::AveragedNonlinearity(GridPtr grid, NonlinearitySpec spec)
    : grid_(std::move(grid)), spec_(spec), rule_(spec.rule()) {
  const auto k = grid_->wavenumbers();
  k2_.resize(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) k2_[j] = k[j] * k[j];
  const std::size_t n = k.size();
  if (rule_.size() * n * sizeof(Complex) <= kPhaseTableBytes) {
    phases_.resize(rule_.size() * n);
    for (std::size_t m = 0; m < rule_.size(); ++m) {
      const double r = rule_.nodes[m];
      for (std::size_t j = 0; j < n; ++j) phases_[m * n + j] = std::polar(1.0, -r * k2_[j]);
    }
  }
}

AveragedNonlinearity::Evaluation AveragedNonlinearity::run(const Field& f, bool want_field) const {
  if (!(f.grid() == *grid_)) throw DomainError("nonlinearity: field grid mismatch");
  const Field fh = f.to_fourier();
  if (!fh.is_finite()) throw NumericalError("nonlinearity: non-finite input");

  const std::size_t n = grid_->size();
  const std::size_t nodes = rule_.size();
  const std::size_t chunks = rule_.chunk_count();
  const double dx = grid_->dx();
  const double inv_n = 1.0 / static_cast<double>(n);
  const PowerLaw power(spec_.p);
  const auto& plan = fft_plan(n);
  const auto src = fh.values();

  std::vector<double> per_node(nodes, 0.0);
  std::vector<ComplexVector> partial(want_field ? chunks : 0);

  parallel_for(chunks, [&](std::size_t c) {
    ComplexVector phase(n);
    ComplexVector buf(n);
    ComplexVector acc;
    if (want_field) acc.assign(n, Complex{});
    const std::size_t first = c * rule_.chunk_size;
    const std::size_t last = std::min(nodes, first + rule_.chunk_size);
    for (std::size_t m = first; m < last; ++m) {
      const double r = rule_.nodes[m];
      if (phases_.empty()) {
        for (std::size_t j = 0; j < n; ++j) phase[j] = std::polar(1.0, -r * k2_[j]);
      } else {
        std::copy_n(phases_.begin() + static_cast<std::ptrdiff_t>(m * n), n, phase.begin());
      }
      for (std::size_t j = 0; j < n; ++j) buf[j] = src[j] * phase[j];
      plan.backward(buf);
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const Complex g = buf[j] * inv_n;
        const double a2 = std::norm(g);
        if (!std::isfinite(a2)) throw NumericalError("nonlinearity: non-finite amplitude");
        if (a2 > kOverflowSq) {
          throw BlowupSuspected("nonlinearity: |e^{ir∂²}u| exceeded overflow guard", std::sqrt(a2));
        }
        const double pw = power(a2);
        if (!std::isfinite(pw)) {
          throw BlowupSuspected("nonlinearity: |u|^{p-1} overflowed", std::sqrt(a2));
        }
        sum += pw * a2;
        buf[j] = pw * g;
      }
      per_node[m] = dx * sum;
      if (!want_field) continue;
      plan.forward(buf);
      const double w = rule_.weights[m];
      for (std::size_t j = 0; j < n; ++j) acc[j] += w * std::conj(phase[j]) * buf[j];
    }
    if (want_field) partial[c] = std::move(acc);
  });

  double integral = 0.0;
  for (std::size_t m = 0; m < nodes; ++m) integral += rule_.weights[m] * per_node[m];

  Field out(grid_, Representation::Fourier);
  if (want_field) {
    auto v = out.values();
    for (const auto& acc : partial) {
      for (std::size_t j = 0; j < n; ++j) v[j] += acc[j];
    }
  }

  if (spec_.interval == IntervalKind::Line && spec_.tail_closure) {
    // Stationary phase: for |r| -> ∞, e^{ir∂²}f ≈ (4πir)^{-1/2} e^{ix²/4r} F(x/2r)
    // with F the continuous Fourier transform. Both tails then contribute
    // 2∫_R^∞ (4πr)^{-(p-1)/2} dr · h to N, where ĥ = |F|^{p-1}F, and the
    // matching amount ⟨h, f⟩ to the integral.
    const double p = spec_.p;
    const double R = spec_.half_width;
    const double radial = 2.0 * (2.0 / (p - 3.0)) * std::pow(R, -0.5 * (p - 3.0));
    const double n_weight = radial * std::pow(4.0 * std::numbers::pi, -0.5 * (p - 1.0));
    const double s_weight = radial * 2.0 * std::pow(4.0 * std::numbers::pi, -0.5 * (p + 1.0));
    double moment = 0.0;
    auto v = out.values();
    const double dxp = std::pow(dx, p - 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = dx * std::abs(src[j]);
      const double a2 = a * a;
      const double pw = power(a2);
      moment += pw * a2;
      if (want_field) v[j] += n_weight * dxp * power(std::norm(src[j])) * src[j];
    }
    integral += s_weight * grid_->dk() * moment;
  }
  return {std::move(out), integral};
}

AveragedNonlinearity::Evaluation AveragedNonlinearity::evaluate(const Field& f) const {
  return run(f, true);
}

double AveragedNonlinearity::strichartz(const Field& f) const { return run(f, false).integral; }

std::vector<double> AveragedNonlinearity::integrand(const Field& f) const {
  const Field fh = f.to_fourier();
  std::vector<double> out(rule_.size());
  const PowerLaw power(spec_.p);
  for (std::size_t m = 0; m < rule_.size(); ++m) {
    const Field g = propagate(fh, rule_.nodes[m]).to_physical();
    double sum = 0.0;
    for (const auto& v : g.values()) {
      const double a2 = std::norm(v);
      sum += power(a2) * a2;
    }
    out[m] = grid_->dx() * sum;
  }
  return out;
}

Field averaged_nonlinearity(const Field& f, const NonlinearitySpec& spec) {
  return AveragedNonlinearity(f.grid_ptr(), spec).apply(f).to_physical();
}

double strichartz_integral(const Field& f, const NonlinearitySpec& spec) {
  return AveragedNonlinearity(f.grid_ptr(), spec).strichartz(f);
}

double energy(const Field& f, double p, std::size_t order) {
  const double s = strichartz_integral(f, NonlinearitySpec::unit(p, order));
  return 0.5 * grad_norm_sq(f) - s / (p + 1.0);
}

double energy_infinity(const Field& f, const NonlinearitySpec& line) {
  if (line.interval != IntervalKind::Line) throw DomainError("energy_infinity needs a line spec");
  return 0.5 * grad_norm_sq(f) - strichartz_integral(f, line) / (line.p + 1.0);
}

double weinstein(const Field& f, const NonlinearitySpec& spec) {
  const double m = mass(f);
  const double g = grad_norm_sq(f);
  if (!(m > 0.0) || !(g > 0.0)) {
    throw DomainError("weinstein functional undefined for zero or gradient-free fields");
  }
  const double p = spec.p;
  const double s = strichartz_integral(f, spec);
  return s / (std::pow(m, 0.25 * (p + 7.0)) * std::pow(g, 0.25 * (p - 5.0)));
}

TruncationChoice select_truncation(const Field& f, NonlinearitySpec spec, double tolerance,
                                   double max_half_width, double step) {
  if (spec.interval != IntervalKind::Line) throw DomainError("select_truncation needs a line spec");
  if (!(step > 0.0)) throw DomainError("truncation step must be positive");
  TruncationChoice choice;
  for (;;) {
    AveragedNonlinearity op(f.grid_ptr(), spec);
    const auto values = op.integrand(f);
    const auto& rule = op.rule();
    double total = 0.0;
    for (std::size_t m = 0; m < values.size(); ++m) total += rule.weights[m] * values[m];
    double outer = 0.0;
    const std::size_t c = rule.chunk_size;
    for (std::size_t m = 0; m < c; ++m) {
      outer += rule.weights[m] * values[m];
      outer += rule.weights[values.size() - 1 - m] * values[values.size() - 1 - m];
    }
    choice.half_width = spec.half_width;
    choice.integral = total;
    choice.outer_fraction = total > 0.0 ? outer / total : 0.0;
    if (choice.outer_fraction < tolerance) return choice;
    if (spec.half_width + step > max_half_width + 1e-12) {
      choice.capped = true;
      return choice;
    }
    spec.half_width += step;
  }
}

}  // namespace dmnls
