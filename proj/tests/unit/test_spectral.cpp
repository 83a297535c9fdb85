#include <cmath>
#include <limits>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace dmnls;
using oracle::kPi;

TEST_SUITE("spectral") {
  TEST_CASE("grid with n = 8 and L = 16 has the FFT-ordered dual lattice") {
    const auto g = make_grid(8, 16.0);
    CHECK(g->dx() == 2.0);
    const double expected[] = {0, 1, 2, 3, -4, -3, -2, -1};
    const auto k = g->wavenumbers();
    REQUIRE(k.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(k[j] == doctest::Approx(kPi / 8.0 * expected[j]).epsilon(1e-15));
  }

  TEST_CASE("grid invariants") {
    for (std::size_t n : {8u, 64u, 1024u}) {
      const double L = 64.0 * kPi;
      const auto g = make_grid(n, L);
      CHECK(g->dx() * static_cast<double>(n) == doctest::Approx(L).epsilon(1e-15));
      double sum = 0.0;
      for (double k : g->wavenumbers()) sum += k;
      CHECK(sum == doctest::Approx(-(2.0 * kPi / L) * (n / 2.0)).epsilon(1e-12));
      const auto k = g->wavenumbers();
      for (std::size_t j = 1; j < n / 2; ++j) CHECK(k[j] == -k[n - j]);
      CHECK(g->coordinates()[n / 2] == 0.0);
    }
    CHECK(make_grid(256, 64.0 * kPi)->dx() == doctest::Approx(kPi / 4.0).epsilon(1e-15));
  }

  TEST_CASE("grid rejects bad sizes") {
    CHECK_THROWS_AS(make_grid(7, 16.0), DomainError);
    CHECK_THROWS_AS(make_grid(4, 16.0), DomainError);
    CHECK_THROWS_AS(make_grid(8, 0.0), DomainError);
    CHECK_THROWS_AS(make_grid(8, -1.0), DomainError);
  }

  TEST_CASE("field round trip and length check") {
    const auto g = make_grid(512, 16.0 * kPi);
    oracle::RandomField gen(1);
    const Field f = gen(g);
    const Field back = f.to_fourier().to_physical();
    CHECK(oracle::relative_l2(back, f) <= 1e-12);
    CHECK_THROWS_AS(Field(g, ComplexVector(3)), DomainError);
  }

  TEST_CASE("Gaussian free evolution matches the closed form") {
    const auto g = make_grid(1024, 64.0);
    const Field phi = gaussian(g);
    const Field u = propagate(phi, 0.5).to_physical();
    const auto x = g->coordinates();
    double worst = 0.0;
    for (std::size_t j = 0; j < g->size(); ++j) {
      const Complex exact = oracle::gaussian_free_evolution(x[j], 0.5);
      if (std::abs(exact) > 1e-6) worst = std::max(worst, std::abs(u[j] - exact) / std::abs(exact));
    }
    CHECK(worst <= 1e-8);
  }

  TEST_CASE("propagation by zero is the identity and preserves representation") {
    const auto g = make_grid(256, 32.0);
    oracle::RandomField gen(2);
    const Field f = gen(g);
    const Field same = propagate(f, 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(same[j] == f[j]);
    CHECK(propagate(f.to_fourier(), 0.3).representation() == Representation::Fourier);
  }

  TEST_CASE("propagation rejects non-finite input") {
    const auto g = make_grid(64, 16.0);
    Field f = gaussian(g);
    f[3] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(propagate(f, 0.1), DomainError);
  }

  TEST_CASE("mass") {
    const auto g = make_grid(4096, 64.0 * kPi);
    const Field phi = gaussian(g);
    CHECK(mass(phi) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(mass(phi) == doctest::Approx(1.7724539).epsilon(1e-7));
    CHECK(mass(Field(g)) == 0.0);
    oracle::RandomField gen(3);
    const Field f = gen(g);
    CHECK(std::abs(mass(propagate(f, 1.7)) - mass(f)) <= 1e-12 * mass(f));
    CHECK(mass(f.to_fourier()) == doctest::Approx(mass(f)).epsilon(1e-13));
  }

  TEST_CASE("gradient norm") {
    const auto g = make_grid(4096, 64.0 * kPi);
    CHECK(grad_norm_sq(gaussian(g)) == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-13));
    CHECK(grad_norm_sq(gaussian(g)) == doctest::Approx(0.8862269).epsilon(1e-7));
    const Field c = Field::sample(g, [](double) { return Complex(2.5, -1.0); });
    CHECK(grad_norm_sq(c) <= 1e-20);
  }

  TEST_CASE("gradient norm agrees with centered differences to second order") {
    double previous = 0.0;
    for (std::size_t n : {32u, 64u, 128u}) {
      const auto g = make_grid(n, 2.0 * kPi);
      const Field s = Field::sample(g, [](double x) { return Complex(std::sin(x), 0.0); });
      const double dx = g->dx();
      double fd = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const Complex d = (s[(j + 1) % n] - s[(j + n - 1) % n]) / (2.0 * dx);
        fd += std::norm(d) * dx;
      }
      const double diff = std::abs(grad_norm_sq(s) - fd);
      CHECK(grad_norm_sq(s) == doctest::Approx(kPi).epsilon(1e-12));
      CHECK(diff <= dx * dx * kPi);
      if (previous > 0.0) CHECK(previous / diff == doctest::Approx(4.0).epsilon(0.05));
      previous = diff;
    }
  }

  TEST_CASE("Lebesgue norms") {
    const auto g = make_grid(4096, 64.0 * kPi);
    const Field phi = gaussian(g);
    CHECK(std::pow(lp_norm(phi, 10.0), 10.0) == doctest::Approx(std::sqrt(2.0 * kPi / 10.0)).epsilon(1e-12));
    CHECK(std::pow(lp_norm(phi, 10.0), 10.0) == doctest::Approx(0.7926655).epsilon(1e-7));
    CHECK(lp_norm(Field(g), 3.0) == 0.0);
    CHECK(lp_norm(phi, 2.0) == doctest::Approx(std::sqrt(mass(phi))).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(phi, 0.5), DomainError);
  }

  TEST_CASE("group law") {
    const auto g = make_grid(1024, 32.0 * kPi);
    oracle::RandomField gen(4);
    for (int i = 0; i < 10; ++i) {
      const Field f = gen(g);
      const double r1 = gen.uniform(-3, 3), r2 = gen.uniform(-3, 3);
      CHECK(oracle::relative_l2(propagate(propagate(f, r1), r2), propagate(f, r1 + r2)) <= 1e-12);
    }
  }

  TEST_CASE("weight commutes with the propagator as e^{ir∂²}x = (x + 2ir∂)e^{ir∂²}") {
    const auto g = make_grid(2048, 64.0 * kPi);
    const auto x = g->coordinates();
    oracle::RandomField gen(5);
    for (double r : {0.05, 0.2, 0.5}) {
      const Field f = gen(g);
      Field xf = f;
      for (std::size_t j = 0; j < f.size(); ++j) xf[j] *= x[j];
      const Field lhs = propagate(xf, r).to_physical();
      const Field pf = propagate(f, r).to_physical();
      const Field dpf = derivative(pf).to_physical();
      Field rhs = pf;
      for (std::size_t j = 0; j < f.size(); ++j) rhs[j] = x[j] * pf[j] + Complex(0.0, 2.0 * r) * dpf[j];
      CHECK(oracle::relative_l2(lhs, rhs) <= 1e-10);
    }
  }

  TEST_CASE("boundary mass fraction") {
    const auto g = make_grid(1024, 64.0);
    CHECK(boundary_mass_fraction(gaussian(g)) < kBoundaryMassLimit);
    ProfileParams params;
    params.shift = 28.0;
    CHECK(boundary_mass_fraction(make_profile(g, params)) > 0.4);
    CHECK(boundary_mass_fraction(Field(g)) == 0.0);
  }

  TEST_CASE("snapshot round trip is bit-exact") {
    const auto g = make_grid(128, 20.0);
    oracle::RandomField gen(6);
    const Field f = gen(g);
    const auto path = std::filesystem::temp_directory_path() / "dmnls_snapshot_test.bin";
    write_snapshot(path, f, -0.625);
    const Snapshot s = read_snapshot(path);
    CHECK(s.time == -0.625);
    CHECK(s.field.grid() == *g);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(s.field[j] == f[j]);
    CHECK(std::filesystem::file_size(path) == 24 + 16 * 128);
    std::filesystem::resize_file(path, 100);
    CHECK_THROWS_AS(read_snapshot(path), DomainError);
    std::filesystem::remove(path);
  }
}
