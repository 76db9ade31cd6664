#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "gmhd/run.hpp"
#include "test_util.hpp"

using namespace gmhd;
using std::numbers::pi;

namespace {

SpectralField sampled(const Grid& g, double (*fn)(double, double)) {
  return to_spectral(PhysicalField::sample(g, fn));
}

double l2(const SpectralField& f) { return homogeneous_sobolev_norm(f, 0.0); }

}  // namespace

TEST_CASE("params validation and normalization") {
  Params p;
  p.alpha = -0.1;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = Params{};
  p.cfl = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = Params{};
  p.n = 30;
  CHECK_NOTHROW(p.validate());
  p.n = 7;
  CHECK_THROWS_AS(p.validate(), ParameterError);

  p = Params{};
  p.alpha = 0.0;
  p.beta = 0.0;
  const Params q = make_params(p);
  CHECK(q.nu == 0.0);
  CHECK(q.kappa == 0.0);
  CHECK(make_params(Params{}).nu == 1.0);
}

TEST_CASE("nonlinear terms: shear and pure magnetic states") {
  const Grid g(32);
  const GmhdState shear = initial_condition(Shear{}, g, 0);
  const Tendency t = nonlinear_rhs(shear, Params{});
  CHECK(max_coefficient(t.d_omega) < 1e-16);
  CHECK(max_coefficient(t.d_a) < 1e-16);

  // u = 0: d_omega = b.grad j, d_a = 0.
  const GmhdState mag(SpectralField(g), random_band_limited_field(g, 8, 1.0, 3), 0.0);
  const Tendency tm = nonlinear_rhs(mag, Params{});
  const MagneticField b = field_from_potential(mag.a_hat);
  CHECK(max_coefficient(tm.d_omega - advect(b.b1, b.b2, b.j)) < 1e-14);
  CHECK(max_coefficient(tm.d_a) == 0.0);
}

TEST_CASE("Orszag-Tang tendency matches a physical-space quadrature oracle") {
  // u = (-sin y, sin x), omega = cos x + cos y, b = (-sin y, sin 2x),
  // j = cos y + 2 cos 2x, grad a = (sin 2x, sin y); all products fit in the band.
  const Grid g(128);
  const GmhdState s = initial_condition(OrszagTang{}, g, 0);
  const Tendency t = nonlinear_rhs(s, Params{});
  const PhysicalField dw = PhysicalField::sample(g, [](double x, double y) {
    const double u1 = -std::sin(y), u2 = std::sin(x);
    const double b1 = -std::sin(y), b2 = std::sin(2 * x);
    const double wx = -std::sin(x), wy = -std::sin(y);
    const double jx = -4 * std::sin(2 * x), jy = -std::sin(y);
    return -(u1 * wx + u2 * wy) + (b1 * jx + b2 * jy);
  });
  const PhysicalField da = PhysicalField::sample(g, [](double x, double y) {
    return -(-std::sin(y) * std::sin(2 * x) + std::sin(x) * std::sin(y));
  });
  const RealArray got_w = to_physical(t.d_omega).values;
  const RealArray got_a = to_physical(t.d_a).values;
  CHECK(test::max_abs(got_w - dw.values) <= 1e-10 * test::max_abs(dw.values));
  CHECK(test::max_abs(got_a - da.values) <= 1e-10 * test::max_abs(da.values));
}

TEST_CASE("T term") {
  const Grid g(32);
  const SpectralField zero(g);
  const SpectralField b1 = sampled(g, [](double x, double y) { return -std::sin(x) * std::cos(y); });
  const SpectralField b2 = sampled(g, [](double x, double y) { return std::cos(x) * std::sin(y); });
  CHECK(test::max_abs(T_term(zero, zero, b1, b2).values) == 0.0);

  const SpectralField u2 = sampled(g, [](double x, double) { return std::sin(x); });
  const PhysicalField t = T_term(zero, u2, b1, b2);
  const PhysicalField expect =
      PhysicalField::sample(g, [](double x, double y) { return -2 * std::cos(x) * std::cos(x) * std::cos(y); });
  CHECK(test::max_abs(t.values - expect.values) < 1e-13);

  const Velocity u = biot_savart(random_band_limited_field(g, 8, 1.0, 4));
  CHECK(test::max_abs(T_term(u.u1, u.u2, u.u1, u.u2).values) < 1e-12);
}

TEST_CASE("current and forcing identities") {
  const Grid g(64);
  const GmhdState zero(g);
  CHECK(current_identity_residual(zero).value == 0.0);
  CHECK(forcing_identity_residual(zero).value == 0.0);

  const SpectralField a = sampled(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
  const GmhdState single(SpectralField(g), a, 0.0);
  CHECK(current_identity_residual(single).value < 1e-12);
  CHECK(forcing_identity_residual(single).value < 1e-12);

  const GmhdState shear = initial_condition(Shear{}, g, 0);
  CHECK(current_identity_residual(shear).value < 1e-12);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GmhdState r = initial_condition(RandomBandLimited{10, 1.0}, g, seed);
    const IdentityResidual c = current_identity_residual(r);
    CHECK(c.value < 1e-9);
    CHECK(forcing_identity_residual(r).value < 1e-9);
  }
}

TEST_CASE("cancellation integrals vanish") {
  const Grid g(128);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const CancellationIntegrals c = cancellation_integrals(initial_condition(RandomBandLimited{16, 1.0}, g, seed));
    CHECK(c.vorticity_advection_rel < 1e-10);
    CHECK(c.current_advection_rel < 1e-10);
    CHECK(c.cross_coupling_rel < 1e-10);
  }
}

TEST_CASE("step: decaying shear closed form") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const Grid g(32);
    Params p;
    p.n = 32;
    p.alpha = alpha;
    const GmhdState s0 = initial_condition(Shear{}, g, 0);
    const GmhdState s1 = step(s0, p, 0.01);
    const SpectralField exact = std::exp(-0.01) * s0.omega_hat;
    CHECK(max_coefficient(s1.omega_hat - exact) < 1e-12);
    CHECK(s1.t == doctest::Approx(0.01));
  }
}

TEST_CASE("step: ideal shear is steady") {
  Params p;
  p.n = 32;
  p.nu = p.kappa = 0.0;
  const GmhdState s0 = initial_condition(SingleMode{0, 2, 1.0}, Grid(32), 0);
  GmhdState s = s0;
  for (int i = 0; i < 10; ++i) s = step(s, p, 0.01);
  CHECK(max_coefficient(s.omega_hat - s0.omega_hat) < 1e-14);
}

TEST_CASE("step: self-convergence order on Orszag-Tang") {
  Params p;
  p.n = 32;
  const GmhdState s0 = initial_condition(OrszagTang{}, Grid(32), 0);
  const LinearRates rates = linear_rates(s0.grid(), p);
  auto integrate = [&](int steps) {
    GmhdState s = s0;
    for (int i = 0; i < steps; ++i) s = step(s, p, rates, 0.25 / steps);
    return s;
  };
  const GmhdState a = integrate(25), b = integrate(50), c = integrate(100);
  const double e1 = std::hypot(l2(a.omega_hat - b.omega_hat), l2(a.a_hat - b.a_hat));
  const double e2 = std::hypot(l2(b.omega_hat - c.omega_hat), l2(b.a_hat - c.a_hat));
  CHECK(std::log2(e1 / e2) >= 3.8);
}

TEST_CASE("step is deterministic and keeps invariants") {
  Params p;
  p.n = 64;
  p.alpha = 0.7;
  p.beta = 1.3;
  const GmhdState s0 = initial_condition(RandomBandLimited{12, 1.0}, Grid(64), 17);
  const GmhdState a = step(s0, p, 0.005), b = step(s0, p, 0.005);
  CHECK((a.omega_hat.coeffs == b.omega_hat.coeffs).all());
  CHECK((a.a_hat.coeffs == b.a_hat.coeffs).all());
  CHECK(a.omega_hat.mean() == Complex(0.0, 0.0));
  CHECK(test::hermitian_defect(a.omega_hat) == 0.0);
  CHECK(test::hermitian_defect(a.a_hat) == 0.0);
  CHECK_THROWS_AS(step(s0, p, 0.0), ParameterError);
}

TEST_CASE("a NaN coefficient raises a blow-up carrying the last valid state") {
  Params p;
  p.n = 32;
  GmhdState s = initial_condition(OrszagTang{}, Grid(32), 0);
  s.t = 0.3;
  GmhdState bad = s;
  bad.omega_hat.at(2, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  try {
    (void)step(bad, p, 0.01);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.time() == 0.3);
  }
}

TEST_CASE("cfl time step") {
  Params p;
  p.n = 128;
  const Grid g(128);
  CHECK(cfl_dt(GmhdState(g), p) == 0.01);
  // |u|_inf = 1: 0.4 * 2 pi / 128 = 0.019635, capped at 0.01.
  const GmhdState shear = initial_condition(Shear{}, g, 0);
  CHECK(cfl_dt(shear, p) == 0.01);
  p.dt_max = 1.0;
  CHECK(cfl_dt(shear, p) == doctest::Approx(0.4 * 2 * pi / 128).epsilon(1e-12));
  Params p2 = p;
  p2.n = 256;
  const double half = cfl_dt(initial_condition(Shear{}, Grid(256), 0), p2);
  CHECK(half == doctest::Approx(0.5 * cfl_dt(shear, p)).epsilon(1e-12));
}

TEST_CASE("initial conditions") {
  const Grid g(64);
  const GmhdState ot = initial_condition(OrszagTang{}, g, 0);
  const Velocity u = biot_savart(ot.omega_hat);
  const MagneticField b = field_from_potential(ot.a_hat);
  CHECK(max_coefficient(divergence(u.u1, u.u2)) == 0.0);
  CHECK(max_coefficient(divergence(b.b1, b.b2)) == 0.0);
  const double u2 = std::pow(l2(u.u1), 2) + std::pow(l2(u.u2), 2);
  CHECK(u2 == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  const PhysicalField b2 = PhysicalField::sample(g, [](double x, double) { return std::sin(2 * x); });
  CHECK(test::max_abs(to_physical(b.b2).values - b2.values) < 1e-14);

  const GmhdState r1 = initial_condition(RandomBandLimited{10, 1.0}, g, 99);
  const GmhdState r2 = initial_condition(RandomBandLimited{10, 1.0}, g, 99);
  CHECK((r1.omega_hat.coeffs == r2.omega_hat.coeffs).all());
  CHECK((r1.a_hat.coeffs == r2.a_hat.coeffs).all());
  const GmhdState r3 = initial_condition(RandomBandLimited{10, 1.0}, g, 100);
  CHECK_FALSE((r1.omega_hat.coeffs == r3.omega_hat.coeffs).all());

  const GmhdState z = initial_condition(RandomBandLimited{10, 0.0}, g, 99);
  CHECK(max_coefficient(z.omega_hat) == 0.0);
  CHECK(max_coefficient(z.a_hat) == 0.0);
  CHECK_THROWS_AS(initial_condition(RandomBandLimited{22, 1.0}, g, 1), ParameterError);
}

TEST_CASE("snapshot round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "gmhd_snapshot_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "s.bin").string();
  Params p;
  p.n = 32;
  p.alpha = 0.75;
  GmhdState s = initial_condition(RandomBandLimited{8, 1.0}, Grid(32), 5);
  s.t = 1.25;
  write_snapshot(path, s, p);
  CHECK(std::filesystem::file_size(path) == 8 + 4 + 4 + 8 + 32 + 2 * 32 * 32 * 8);
  const Snapshot back = read_snapshot(path);
  CHECK(back.state.t == 1.25);
  CHECK(back.params.alpha == 0.75);
  CHECK(back.params.n == 32);
  CHECK(max_coefficient(back.state.omega_hat - s.omega_hat) < 1e-15);
  CHECK(max_coefficient(back.state.a_hat - s.a_hat) < 1e-15);

  // Version field lives right after the magic.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);
    const unsigned char v2[4] = {2, 0, 0, 0};
    f.write(reinterpret_cast<const char*>(v2), 4);
  }
  CHECK_THROWS(read_snapshot(path));
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("BADMAGIC", 8);
  }
  CHECK_THROWS(read_snapshot(path));
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: sampling, zero-length runs and closed-form decay") {
  Params p;
  p.n = 32;
  p.t_end = 0.0;
  const GmhdState s0 = initial_condition(Shear{}, Grid(32), 0);
  const Trajectory empty = run(s0, p, RunOptions{});
  CHECK(empty.steps == 0);
  CHECK(empty.series.size() == 1);

  p.t_end = 1.0;
  RunOptions o;
  o.sample_every = 0.05;
  o.keep_snapshots = true;
  const Trajectory tr = run(s0, p, o);
  CHECK(tr.series.size() == 21);
  CHECK(tr.snapshots.size() == 21);
  CHECK(tr.final_state.t == 1.0);
  const double e0 = tr.series.records().front().energy;
  CHECK(e0 == doctest::Approx(pi * pi).epsilon(1e-14));
  CHECK(std::abs(tr.series.records().back().energy - e0 * std::exp(-2.0)) < 1e-10);
  for (std::size_t k = 0; k < tr.series.size(); ++k) {
    CHECK(tr.series.records()[k].t == doctest::Approx(0.05 * k).epsilon(1e-12));
  }

  p.t_end = -1.0;
  CHECK_THROWS_AS(run(s0, p, o), ParameterError);
}

TEST_CASE("run reports blow-up instead of throwing") {
  Params p;
  p.n = 32;
  p.t_end = 0.1;
  GmhdState s = initial_condition(OrszagTang{}, Grid(32), 0);
  s.a_hat.at(1, 1) = Complex(INFINITY, 0.0);
  const Trajectory tr = run(s, p, RunOptions{});
  REQUIRE(tr.blowup.has_value());
  CHECK(tr.steps == 0);
}
