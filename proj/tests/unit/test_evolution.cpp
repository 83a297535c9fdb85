#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dmnls;
using oracle::kPi;

namespace {

GridPtr small_grid() { return make_grid(512, 32.0 * kPi); }

EvolveConfig config(double p, double t_end, double dt = 1e-2) {
  EvolveConfig cfg;
  cfg.p = p;
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.stride = 5;
  return cfg;
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("config validation") {
    EvolveConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = EvolveConfig{};
    cfg.t_end = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = EvolveConfig{};
    cfg.growth_factor = 1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
  }

  TEST_CASE("zero field stays zero") {
    const auto g = small_grid();
    const Field z = rk4_step(Field(g), 1e-3, 9.0);
    CHECK(mass(z) == 0.0);
    const Trajectory tr = evolve(Field(g), config(9.0, -0.1));
    CHECK(tr.status == RunStatus::Completed);
    for (const Sample& s : tr.samples) {
      CHECK(s.mass == 0.0);
      CHECK(s.energy == 0.0);
      CHECK(s.grad_sq == 0.0);
      CHECK(s.variance == 0.0);
    }
  }

  TEST_CASE("tiny data follows the free flow") {
    const auto g = make_grid(1024, 64.0 * kPi);
    const Field u = gaussian(g, 1e-6);
    const Field stepped = rk4_step(u, 1e-3, 9.0).to_physical();
    const Field free = propagate(u, 1e-3).to_physical();
    double worst = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) worst = std::max(worst, std::abs(stepped[j] - free[j]));
    CHECK(worst <= 1e-18);
  }

  TEST_CASE("step then reverse step has fifth-order defect") {
    const auto g = small_grid();
    const Field u = gaussian(g, 0.8);
    const AveragedNonlinearity op(g, NonlinearitySpec::unit(9.0));
    auto defect = [&](double h) {
      const Field back = rk4_step(rk4_step(u, h, op), -h, op);
      return std::sqrt(mass(back - u));
    };
    const double e1 = defect(0.02);
    const double e2 = defect(0.01);
    CHECK(e1 / e2 > 20.0);
  }

  TEST_CASE("time reversal through the dispersion map") {
    const auto g = small_grid();
    oracle::RandomField gen(21);
    const AveragedNonlinearity op(g, NonlinearitySpec::unit(9.0));
    for (int trial = 0; trial < 5; ++trial) {
      const Field u0 = gen(g);
      const Field w0 = propagate(conj(u0), -1.0);
      const Field forward = rk4_step(w0, 0.01, op);
      const Field mirrored = propagate(conj(rk4_step(u0, -0.01, op)), -1.0);
      CHECK(oracle::relative_l2(forward, mirrored) <= 1e-12);
    }
  }

  TEST_CASE("fourth-order convergence in the step") {
    const auto g = small_grid();
    const Field u0 = 0.8 * gaussian(g);
    auto terminal = [&](double dt) {
      EvolveConfig cfg = config(9.0, -0.5, dt);
      cfg.max_gradient_change = 1e3;
      const Trajectory tr = evolve(u0, cfg);
      REQUIRE(tr.rejected_steps == 0);
      return tr.final_state;
    };
    const Field coarse = terminal(0.0125);
    const Field fine = terminal(0.00625);
    const Field reference = terminal(0.003125);
    const double ratio = std::sqrt(mass(coarse - reference) / mass(fine - reference));
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }

  TEST_CASE("continuous dependence on the data") {
    const auto g = small_grid();
    const Field u0 = 0.8 * gaussian(g);
    ProfileParams bump;
    bump.amplitude = 1.0;
    bump.shift = 1.0;
    bump.chirp = 0.3;
    Field psi = make_profile(g, bump);
    psi *= Complex(1.0 / std::sqrt(h1_norm_sq(psi)), 0.0);
    EvolveConfig cfg = config(9.0, -1.0, 0.01);
    cfg.max_gradient_change = 1e3;
    const Field base = evolve(u0, cfg).final_state;
    auto constant = [&](double delta) {
      const Field moved = evolve(u0 + delta * psi, cfg).final_state;
      return std::sqrt(h1_norm_sq(moved - base)) / delta;
    };
    const double k3 = constant(1e-3);
    const double k4 = constant(1e-4);
    CHECK(k3 > 0.0);
    CHECK(k4 / k3 == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("linear evolution conserves mass to round-off") {
    const auto g = small_grid();
    oracle::RandomField gen(20);
    EvolveConfig cfg = config(9.0, -1.0, 0.05);
    cfg.nonlinear = false;
    const Trajectory tr = evolve(gen(g), cfg);
    CHECK(conservation_report(tr).mass_drift <= 1e-12);
  }

  TEST_CASE("conservation report edge cases") {
    Trajectory tr = evolve(Field(small_grid()), config(9.0, -0.01));
    tr.samples.clear();
    CHECK(conservation_report(tr).mass_drift == 0.0);
    tr.samples.push_back(Sample{});
    tr.samples.back().mass = 2.0;
    tr.samples.back().energy = -1.0;
    const auto r = conservation_report(tr);
    CHECK(r.mass_drift == 0.0);
    CHECK(r.energy_drift == 0.0);
  }

  TEST_CASE("small data conserves mass and energy backward in time") {
    const auto g = make_grid(1024, 64.0 * kPi);
    const Trajectory tr = evolve(0.1 * gaussian(g), config(9.0, -2.0, 1e-2));
    CHECK(tr.status == RunStatus::Completed);
    CHECK(tr.end_time == doctest::Approx(-2.0).epsilon(1e-14));
    const auto r = conservation_report(tr);
    CHECK(r.mass_drift <= 1e-8);
    CHECK(r.energy_drift <= 1e-6);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) CHECK(tr.samples[i].t < tr.samples[i - 1].t);
  }

  TEST_CASE("horizon not divisible by dt still lands exactly") {
    const auto g = small_grid();
    EvolveConfig cfg = config(9.0, 0.37, 0.1);
    cfg.stride = 3;
    const Trajectory tr = evolve(0.2 * gaussian(g), cfg);
    CHECK(tr.status == RunStatus::Completed);
    CHECK(tr.end_time == doctest::Approx(0.37).epsilon(1e-14));
    CHECK(tr.samples.back().terminal);
    CHECK(tr.samples.back().t == doctest::Approx(0.37).epsilon(1e-14));
  }

  // Q solves the whole-line averaged equation; the [0, 1] nonlinearity
  // carries only about 41% of its Strichartz integral, so Q is not close to
  // stationary here and ‖∂x u‖² doubles by t = -1. Kept as an expected failure.
  TEST_CASE("ground state keeps its gradient norm within 5%" * doctest::should_fail()) {
    const GroundState& gs = fixture::ground_state(9.0);
    EvolveConfig cfg = config(9.0, -1.0, 5e-3);
    cfg.stride = 10;
    const Trajectory tr = evolve(gs.profile, cfg);
    REQUIRE(tr.status == RunStatus::Completed);
    const double g0 = tr.samples.front().grad_sq;
    for (const Sample& s : tr.samples) CHECK(std::abs(s.grad_sq - g0) <= 0.05 * g0);
  }

  TEST_CASE("large negative-energy data blows up in negative time") {
    const auto g = make_grid(4096, 64.0 * kPi);
    const Field u0 = 4.0 * gaussian(g);
    CHECK(energy(u0, 11.0) < 0.0);
    const Trajectory tr = evolve(u0, config(11.0, -5.0, 1e-3));
    CHECK(tr.status == RunStatus::BlowupSuspected);
    CHECK(tr.end_time < 0.0);
    CHECK(tr.end_time > -5.0);
    CHECK(tr.samples.back().terminal);
    CHECK(tr.final_state.is_finite());
  }

  TEST_CASE("snapshots and CSV output") {
    const auto g = small_grid();
    EvolveConfig cfg = config(9.0, -0.2, 0.01);
    cfg.snapshot_stride = 2;
    const Trajectory tr = evolve(0.3 * gaussian(g), cfg);
    CHECK(tr.samples.size() == 5);
    CHECK(tr.snapshots.size() == 3);
    const auto path = std::filesystem::temp_directory_path() / "dmnls_traj_test.csv";
    write_trajectory_csv(path, tr);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,mass,energy,grad_sq,variance,v1prime,phi");
    std::filesystem::remove(path);
  }
}
