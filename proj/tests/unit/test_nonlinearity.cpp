#include <cmath>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace dmnls;
using oracle::kPi;

namespace {

GridPtr default_grid() { return make_grid(4096, 64.0 * kPi); }

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre on the unit interval") {
    for (std::size_t m : {4u, 8u, 32u, 64u}) {
      const auto rule = gauss_legendre(m, 0.0, 1.0);
      REQUIRE(rule.size() == m);
      double sum = 0.0;
      for (double w : rule.weights) {
        CHECK(w > 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-14);
      CHECK(rule.nodes.front() > 0.0);
      CHECK(rule.nodes.back() < 1.0);
      for (std::size_t i = 1; i < m; ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
    const auto rule = gauss_legendre(8, 0.0, 1.0);
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) integral += rule.weights[i] * std::pow(rule.nodes[i], 15);
    CHECK(integral == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), DomainError);
  }

  TEST_CASE("composite panels on a symmetric interval") {
    const auto rule = composite_gauss_legendre(-20.0, 20.0, 0.5, 16);
    CHECK(rule.size() == 80 * 16);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(std::abs(sum - 40.0) <= 1e-14 * 40.0 * 4);
    for (std::size_t i = 1; i < rule.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CHECK(rule.nodes[i] == -rule.nodes[rule.size() - 1 - i]);
      CHECK(rule.weights[i] == rule.weights[rule.size() - 1 - i]);
    }
    CHECK(rule.nodes.front() > -20.0);
  }
}

TEST_SUITE("nonlinearity") {
  TEST_CASE("NonlinearitySpec validation") {
    CHECK_THROWS_AS(NonlinearitySpec::unit(0.5).validate(), DomainError);
    CHECK_THROWS_AS(NonlinearitySpec::unit(9, 3).validate(), DomainError);
    CHECK_THROWS_AS(NonlinearitySpec::line(9, 0.0).validate(), DomainError);
    CHECK_THROWS_AS(NonlinearitySpec::line(9, 10.0, 2).validate(), DomainError);
    NonlinearitySpec s = NonlinearitySpec::line(3.0);
    s.tail_closure = true;
    CHECK_THROWS_AS(s.validate(), DomainError);
    CHECK_NOTHROW(NonlinearitySpec::line(9.0).validate());
  }

  TEST_CASE("zero field maps to zero") {
    const auto g = make_grid(256, 32.0);
    for (const auto& spec : {NonlinearitySpec::unit(9), NonlinearitySpec::line(9, 5.0)}) {
      const Field n = averaged_nonlinearity(Field(g), spec);
      CHECK(mass(n) == 0.0);
      CHECK(strichartz_integral(Field(g), spec) == 0.0);
    }
  }

  TEST_CASE("p = 1 returns the input") {
    const auto g = make_grid(512, 16.0 * kPi);
    oracle::RandomField gen(10);
    const Field f = gen(g);
    CHECK(oracle::relative_l2(averaged_nonlinearity(f, NonlinearitySpec::unit(1.0)), f) <= 1e-13);
  }

  TEST_CASE("non-integer exponent agrees with its integer neighbour limit") {
    const auto g = make_grid(512, 16.0 * kPi);
    const Field phi = gaussian(g);
    const double a = strichartz_integral(phi, NonlinearitySpec::unit(9.0));
    const double b = strichartz_integral(phi, NonlinearitySpec::unit(9.0 + 1e-9));
    CHECK(b == doctest::Approx(a).epsilon(1e-7));
    const double s = strichartz_integral(phi, NonlinearitySpec::unit(7.5));
    CHECK(s == doctest::Approx(oracle::gaussian_strichartz_unit(7.5)).epsilon(1e-10));
  }

  TEST_CASE("duality pairing for the Gaussian at p = 9 as M doubles") {
    const auto g = default_grid();
    const Field phi = gaussian(g);
    const double exact = oracle::gaussian_strichartz_unit(9.0);
    double previous = 0.0;
    for (std::size_t m : {8u, 16u, 32u, 64u}) {
      const AveragedNonlinearity op(g, NonlinearitySpec::unit(9, m));
      const auto eval = op.evaluate(phi);
      const double pairing = inner_product(eval.value, phi).real();
      CHECK(pairing == doctest::Approx(eval.integral).epsilon(1e-12));
      if (m >= 16) CHECK(std::abs(pairing - exact) <= 1e-8 * exact);
      if (previous > 0.0) CHECK(std::abs(pairing - previous) <= 1e-8 * exact + std::abs(previous - exact));
      previous = pairing;
    }
  }

  TEST_CASE("whole-line Strichartz integral of the Gaussian at p = 9") {
    const auto g = default_grid();
    const Field phi = gaussian(g);
    const double expected = std::sqrt(2.0 * kPi / 10.0) * kPi / 4.0;
    CHECK(expected == doctest::Approx(0.6225580).epsilon(1e-7));
    CHECK(oracle::gaussian_strichartz_line(9.0) == doctest::Approx(expected).epsilon(1e-14));
    const double r20 = strichartz_integral(phi, NonlinearitySpec::line(9.0, 20.0));
    CHECK(r20 == doctest::Approx(oracle::gaussian_strichartz_truncated(9.0, 20.0)).epsilon(1e-11));
    CHECK(r20 == doctest::Approx(expected).epsilon(1e-5));
    CHECK(r20 < expected);
    NonlinearitySpec closed = NonlinearitySpec::line(9.0, 20.0);
    closed.tail_closure = true;
    CHECK(strichartz_integral(phi, closed) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(strichartz_integral(phi, NonlinearitySpec::unit(9)) <= r20);
  }

  TEST_CASE("tail closure keeps the duality pairing exact") {
    const auto g = make_grid(1024, 32.0 * kPi);
    oracle::RandomField gen(11);
    NonlinearitySpec spec = NonlinearitySpec::line(11.0, 5.0);
    spec.tail_closure = true;
    const AveragedNonlinearity op(g, spec);
    for (int i = 0; i < 5; ++i) {
      const Field f = gen(g);
      const auto eval = op.evaluate(f);
      CHECK(inner_product(eval.value, f).real() == doctest::Approx(eval.integral).epsilon(1e-11));
    }
  }

  TEST_CASE("energy") {
    const auto g = default_grid();
    const Field phi = gaussian(g);
    CHECK(energy(Field(g), 9) == 0.0);
    const double s = oracle::gaussian_strichartz_unit(9.0);
    CHECK(energy(phi, 9) == doctest::Approx(0.5 * std::sqrt(kPi) / 2.0 - s / 10.0).epsilon(1e-10));
    const Field two = 2.0 * phi;
    CHECK(energy(two, 9) ==
          doctest::Approx(4.0 * 0.5 * grad_norm_sq(phi) -
                          std::pow(2.0, 10) / 10.0 * strichartz_integral(phi, NonlinearitySpec::unit(9)))
              .epsilon(1e-12));
  }

  TEST_CASE("self-convergent energy nonlinear term") {
    const auto g = default_grid();
    const Field phi = gaussian(g);
    double previous = strichartz_integral(phi, NonlinearitySpec::unit(9, 8));
    double change = 1.0;
    for (std::size_t m = 16; m <= 64 && change > 1e-10 * previous; m *= 2) {
      const double next = strichartz_integral(phi, NonlinearitySpec::unit(9, m));
      change = std::abs(next - previous);
      previous = next;
    }
    CHECK(change <= 1e-10 * previous);
    CHECK(energy(phi, 9, 32) == doctest::Approx(0.5 * grad_norm_sq(phi) - previous / 10.0).epsilon(1e-12));
  }

  TEST_CASE("whole-line energy") {
    const auto g = default_grid();
    const Field phi = gaussian(g);
    const auto line = NonlinearitySpec::line(9.0, 40.0);
    CHECK(energy_infinity(Field(g), line) == 0.0);
    const double nonlinear = 0.5 * grad_norm_sq(phi) - energy_infinity(phi, line);
    CHECK(nonlinear == doctest::Approx(0.6225580 / 10.0).epsilon(1e-5));
    oracle::RandomField gen(12);
    for (int i = 0; i < 5; ++i) {
      const Field f = gen(g);
      CHECK(energy_infinity(f, line) <= 0.5 * grad_norm_sq(f));
    }
    CHECK_THROWS_AS(energy_infinity(phi, NonlinearitySpec::unit(9)), DomainError);
  }

  TEST_CASE("Weinstein functional of the Gaussian") {
    const auto g = default_grid();
    const Field phi = gaussian(g);
    const double closed_form = 1.0 / (2.0 * std::sqrt(5.0) * kPi);
    CHECK(closed_form == doctest::Approx(0.0711763).epsilon(1e-6));
    CHECK(oracle::gaussian_weinstein(9.0) == doctest::Approx(closed_form).epsilon(1e-14));
    CHECK(weinstein(phi, NonlinearitySpec::line(9.0, 40.0)) == doctest::Approx(closed_form).epsilon(1e-6));
    const Field rotated = std::polar(1.0, kPi / 3.0) * phi;
    const auto line = NonlinearitySpec::line(9.0, 10.0);
    CHECK(weinstein(rotated, line) == doctest::Approx(weinstein(phi, line)).epsilon(1e-14));
    CHECK_THROWS_AS(weinstein(Field(g), line), DomainError);
    const Field constant = Field::sample(g, [](double) { return Complex(1.0, 0.0); });
    CHECK_THROWS_AS(weinstein(constant, line), DomainError);
  }

  TEST_CASE("Weinstein functional is invariant under rescaling") {
    const double L = 32.0 * kPi;
    const auto g = make_grid(1024, L);
    oracle::RandomField gen(13);
    const Field f = gen(g);
    NonlinearitySpec spec = NonlinearitySpec::line(9.0, 8.0);
    const double w = weinstein(f, spec);
    for (double lambda : {0.5, 2.0}) {
      const auto gl = make_grid(1024, L / lambda);
      const Field scaled(gl, ComplexVector(f.values().begin(), f.values().end()));
      NonlinearitySpec s = spec;
      s.half_width = spec.half_width / (lambda * lambda);
      s.panel_width = spec.panel_width / (lambda * lambda);
      CHECK(weinstein(1.7 * scaled, s) == doctest::Approx(w).epsilon(1e-8));
    }
  }

  TEST_CASE("Weinstein functional stays below the Strichartz upper bound") {
    const auto g = make_grid(512, 32.0 * kPi);
    oracle::RandomField gen(15);
    const double upper = 1.0 / (2.0 * std::sqrt(3.0));
    NonlinearitySpec spec = NonlinearitySpec::line(9.0, 10.0, 8);
    spec.tail_closure = true;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Field f = gen(g);
      const double w = weinstein(f, spec);
      CHECK(w <= upper + 1e-6);
      worst = std::max(worst, w);
    }
    CHECK(worst > 0.0);
  }

  TEST_CASE("overflow is reported, not clamped") {
    const auto g = make_grid(64, 16.0);
    Field big = gaussian(g, 1e31);
    CHECK_THROWS_AS(averaged_nonlinearity(big, NonlinearitySpec::unit(3)), BlowupSuspected);
    Field huge = gaussian(g, 1e29);
    CHECK_THROWS_AS(averaged_nonlinearity(huge, NonlinearitySpec::unit(13)), BlowupSuspected);
  }

  TEST_CASE("results do not depend on the worker count") {
    const auto g = make_grid(512, 16.0 * kPi);
    oracle::RandomField gen(14);
    const Field f = gen(g);
    const auto spec = NonlinearitySpec::line(11.0, 4.0);
    setenv("DMNLS_THREADS", "1", 1);
    const auto a = AveragedNonlinearity(g, spec).evaluate(f);
    setenv("DMNLS_THREADS", "3", 1);
    const auto b = AveragedNonlinearity(g, spec).evaluate(f);
    unsetenv("DMNLS_THREADS");
    CHECK(a.integral == b.integral);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(a.value[j] == b.value[j]);
  }

  TEST_CASE("truncation selection") {
    const auto g = default_grid();
    const Field phi = gaussian(g);
    const auto capped = select_truncation(phi, NonlinearitySpec::line(9.0, 10.0), 1e-10, 20.0);
    CHECK(capped.capped);
    CHECK(capped.half_width == 20.0);
    const auto loose = select_truncation(phi, NonlinearitySpec::line(9.0, 10.0), 1e-2, 40.0);
    CHECK_FALSE(loose.capped);
    CHECK(loose.outer_fraction < 1e-2);
    CHECK_THROWS_AS(select_truncation(phi, NonlinearitySpec::unit(9), 1e-3, 20.0), DomainError);
  }
}
