#include "gmhd/dynamics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace gmhd {
namespace {

void require_finite_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ParameterError(std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
  }
}

struct PhysicalPair {
  RealArray x;
  RealArray y;
};

PhysicalPair gradient(const SpectralField& f) {
  return {to_physical(derivative(f, 1)).values, to_physical(derivative(f, 2)).values};
}

SpectralField project(const Grid& g, RealArray values) {
  SpectralField out = to_spectral(PhysicalField(g, std::move(values)));
  dealias(out);
  return out;
}

double l2(const SpectralField& f) { return homogeneous_sobolev_norm(f, 0.0); }

}  // namespace

void Params::validate() const {
  require_finite_nonneg(nu, "nu");
  require_finite_nonneg(kappa, "kappa");
  require_finite_nonneg(alpha, "alpha");
  require_finite_nonneg(beta, "beta");
  require_finite_nonneg(t_end, "t_end");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ParameterError("cfl must lie in (0, 1]");
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw ParameterError("dt_max must be positive");
  Grid check(n);
  (void)check;
}

Params Params::normalized() const {
  Params p = *this;
  if (p.alpha == 0.0) p.nu = 0.0;
  if (p.beta == 0.0) p.kappa = 0.0;
  return p;
}

Params make_params(Params p) {
  p.validate();
  return p.normalized();
}

void enforce_invariants(GmhdState& s) {
  for (SpectralField* f : {&s.omega_hat, &s.a_hat}) {
    symmetrize(*f);
    f->coeffs(0, 0) = 0.0;
    dealias(*f);
  }
}

Tendency nonlinear_rhs(const GmhdState& state, const Params& /*params*/) {
  const Grid& g = state.grid();
  const Velocity u = biot_savart(state.omega_hat);
  const MagneticField b = field_from_potential(state.a_hat);

  const RealArray u1 = to_physical(u.u1).values;
  const RealArray u2 = to_physical(u.u2).values;
  const RealArray b1 = to_physical(b.b1).values;
  const RealArray b2 = to_physical(b.b2).values;
  const PhysicalPair dw = gradient(state.omega_hat);
  const PhysicalPair dj = gradient(b.j);
  // grad a = (b2, -b1)
  RealArray forcing = -(u1 * dw.x + u2 * dw.y) + b1 * dj.x + b2 * dj.y;
  RealArray induction = -(u1 * b2 - u2 * b1);

  return Tendency{project(g, std::move(forcing)), project(g, std::move(induction))};
}

LinearRates linear_rates(const Grid& grid, const Params& params) {
  LinearRates r{RealArray::Zero(grid.nkx(), grid.n()), RealArray::Zero(grid.nkx(), grid.n())};
  for (int col = 0; col < grid.n(); ++col) {
    const int ky = grid.ky(col);
    for (int row = 0; row < grid.nkx(); ++row) {
      const double k2 = wavenumber_squared(row, ky);
      if (k2 == 0.0) continue;
      r.omega(row, col) = params.nu == 0.0 ? 0.0 : params.nu * std::pow(k2, params.alpha);
      r.a(row, col) = params.kappa == 0.0 ? 0.0 : params.kappa * std::pow(k2, params.beta);
    }
  }
  return r;
}

namespace {

struct TGradients {
  RealArray d1u1, d2u1, d1u2, d2u2;
  RealArray d1b1, d2b1, d1b2, d2b2;
};

TGradients t_gradients(const SpectralField& u1, const SpectralField& u2, const SpectralField& b1,
                       const SpectralField& b2) {
  require_same_grid(u1.grid, b1.grid);
  PhysicalPair gu1 = gradient(u1), gu2 = gradient(u2), gb1 = gradient(b1), gb2 = gradient(b2);
  return {std::move(gu1.x), std::move(gu1.y), std::move(gu2.x), std::move(gu2.y),
          std::move(gb1.x), std::move(gb1.y), std::move(gb2.x), std::move(gb2.y)};
}

RealArray t_values(const TGradients& d) {
  return 2.0 * d.d1b1 * (d.d1u2 + d.d2u1) + 2.0 * d.d2u2 * (d.d1b2 + d.d2b1);
}

}  // namespace

PhysicalField T_term(const SpectralField& u1, const SpectralField& u2, const SpectralField& b1,
                     const SpectralField& b2) {
  return PhysicalField(u1.grid, t_values(t_gradients(u1, u2, b1, b2)));
}

SpectralField T_term_spectral(const SpectralField& u1, const SpectralField& u2, const SpectralField& b1,
                              const SpectralField& b2) {
  return project(u1.grid, t_values(t_gradients(dealiased(u1), dealiased(u2), dealiased(b1), dealiased(b2))));
}

bool well_resolved(const SpectralField& f) {
  const Grid& g = f.grid;
  const double peak = max_coefficient(f);
  if (peak == 0.0) return true;
  const int tail_start = (2 * g.dealias_cutoff()) / 3;
  double tail = 0.0;
  for (int col = 0; col < g.n(); ++col) {
    const int ky = std::abs(g.ky(col));
    for (int row = 0; row < g.nkx(); ++row) {
      if (std::max(row, ky) > tail_start) tail = std::max(tail, std::abs(f.coeffs(row, col)));
    }
  }
  return tail <= 1e-8 * peak;
}

IdentityResidual current_identity_residual(const GmhdState& state) {
  const Velocity u = biot_savart(state.omega_hat);
  const MagneticField b = field_from_potential(state.a_hat);
  const SpectralField lhs = laplacian(advect(u.u1, u.u2, state.a_hat));
  const SpectralField u_grad_j = advect(u.u1, u.u2, b.j);
  const SpectralField rhs =
      u_grad_j - advect(b.b1, b.b2, state.omega_hat) - T_term_spectral(u.u1, u.u2, b.b1, b.b2);
  IdentityResidual r;
  r.value = l2(lhs - rhs) / std::max(1.0, l2(u_grad_j));
  r.under_resolved = !(well_resolved(state.omega_hat) && well_resolved(state.a_hat));
  return r;
}

IdentityResidual forcing_identity_residual(const GmhdState& state) {
  const MagneticField b = field_from_potential(state.a_hat);
  const SpectralField raw = perp_divergence(advect(b.b1, b.b2, b.b1), advect(b.b1, b.b2, b.b2));
  const SpectralField b_grad_j = advect(b.b1, b.b2, b.j);
  IdentityResidual r;
  r.value = l2(raw - b_grad_j) / std::max(1.0, l2(b_grad_j));
  r.under_resolved = !well_resolved(state.a_hat);
  return r;
}

CancellationIntegrals cancellation_integrals(const GmhdState& state) {
  const Grid& g = state.grid();
  const Velocity u = biot_savart(state.omega_hat);
  const MagneticField b = field_from_potential(state.a_hat);
  const RealArray u1 = to_physical(u.u1).values, u2 = to_physical(u.u2).values;
  const RealArray b1 = to_physical(b.b1).values, b2 = to_physical(b.b2).values;
  const RealArray w = to_physical(state.omega_hat).values, j = to_physical(b.j).values;
  const RealArray w1 = to_physical(derivative(state.omega_hat, 1)).values;
  const RealArray w2 = to_physical(derivative(state.omega_hat, 2)).values;
  const RealArray j1 = to_physical(derivative(b.j, 1)).values;
  const RealArray j2 = to_physical(derivative(b.j, 2)).values;
  const double area = g.cell_area();

  CancellationIntegrals c;
  c.vorticity_advection = ((u1 * w1 + u2 * w2) * w).sum() * area;
  c.current_advection = ((u1 * j1 + u2 * j2) * j).sum() * area;
  c.cross_coupling = (((b1 * j1 + b2 * j2) * w) + ((b1 * w1 + b2 * w2) * j)).sum() * area;

  const double u_inf = (u1.square() + u2.square()).sqrt().maxCoeff();
  const double b_inf = (b1.square() + b2.square()).sqrt().maxCoeff();
  const double w_l2 = l2(state.omega_hat), j_l2 = l2(b.j);
  const double gw = homogeneous_sobolev_norm(state.omega_hat, 1.0), gj = homogeneous_sobolev_norm(b.j, 1.0);
  auto rel = [](double v, double scale) { return scale > 0.0 ? std::abs(v) / scale : std::abs(v); };
  c.vorticity_advection_rel = rel(c.vorticity_advection, u_inf * gw * w_l2);
  c.current_advection_rel = rel(c.current_advection, u_inf * gj * j_l2);
  c.cross_coupling_rel = rel(c.cross_coupling, b_inf * (gj * w_l2 + gw * j_l2));
  return c;
}

GmhdState step(const GmhdState& state, const Params& params, double dt) {
  return step(state, params, linear_rates(state.grid(), params), dt);
}

GmhdState step(const GmhdState& state, const Params& params, const LinearRates& rates, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive and finite");
  const Grid& g = state.grid();
  const RealArray ew_half = (-0.5 * dt * rates.omega).exp();
  const RealArray ew_full = (-dt * rates.omega).exp();
  const RealArray ea_half = (-0.5 * dt * rates.a).exp();
  const RealArray ea_full = (-dt * rates.a).exp();
  const ComplexArray& w0 = state.omega_hat.coeffs;
  const ComplexArray& a0 = state.a_hat.coeffs;

  auto eval = [&](const ComplexArray& w, const ComplexArray& a) {
    return nonlinear_rhs(GmhdState(SpectralField(g, w), SpectralField(g, a), state.t), params);
  };

  const Tendency k1 = eval(w0, a0);
  const Tendency k2 = eval(ew_half * (w0 + 0.5 * dt * k1.d_omega.coeffs),
                           ea_half * (a0 + 0.5 * dt * k1.d_a.coeffs));
  const Tendency k3 = eval(ew_half * w0 + 0.5 * dt * k2.d_omega.coeffs,
                           ea_half * a0 + 0.5 * dt * k2.d_a.coeffs);
  const Tendency k4 = eval(ew_full * w0 + dt * ew_half * k3.d_omega.coeffs,
                           ea_full * a0 + dt * ea_half * k3.d_a.coeffs);

  ComplexArray w1 = ew_full * w0 + (dt / 6.0) * (ew_full * k1.d_omega.coeffs +
                                                 2.0 * ew_half * (k2.d_omega.coeffs + k3.d_omega.coeffs) +
                                                 k4.d_omega.coeffs);
  ComplexArray a1 = ea_full * a0 + (dt / 6.0) * (ea_full * k1.d_a.coeffs +
                                                 2.0 * ea_half * (k2.d_a.coeffs + k3.d_a.coeffs) +
                                                 k4.d_a.coeffs);

  GmhdState next(SpectralField(g, std::move(w1)), SpectralField(g, std::move(a1)), state.t + dt);
  if (!all_finite(next.omega_hat) || !all_finite(next.a_hat)) {
    throw BlowUpError("non-finite value after step at t = " + std::to_string(state.t), state);
  }
  enforce_invariants(next);
  return next;
}

double cfl_dt(const GmhdState& state, const Params& params) {
  const Velocity u = biot_savart(state.omega_hat);
  const MagneticField b = field_from_potential(state.a_hat);
  auto max_speed = [](const SpectralField& c1, const SpectralField& c2) {
    const RealArray p1 = to_physical(c1).values;
    const RealArray p2 = to_physical(c2).values;
    return (p1.square() + p2.square()).sqrt().maxCoeff();
  };
  const double speed = max_speed(u.u1, u.u2) + max_speed(b.b1, b.b2);
  const double dx = state.grid().dx();
  return std::min(params.dt_max, params.cfl * dx / std::max(speed, kCflVelocityFloor));
}

// --- initial conditions ---------------------------------------------------

namespace {

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  std::pair<double, double> next_pair() {
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::mt19937_64 engine_;
};

void fill_band_limited(SpectralField& f, double k_max, double amplitude, GaussianStream& rng) {
  const Grid& g = f.grid;
  const double k2_max = k_max * k_max;
  for (int col = 0; col < g.n(); ++col) {
    const int ky = g.ky(col);
    for (int row = 0; row < g.nkx(); ++row) {
      const double k2 = wavenumber_squared(row, ky);
      if (k2 == 0.0 || k2 > k2_max) continue;
      // canonical member of each conjugate pair on the kx = 0 row is ky > 0
      if (row == 0 && ky < 0) continue;
      const auto [g1, g2] = rng.next_pair();
      const Complex c = amplitude * Complex(g1, g2) / std::numbers::sqrt2;
      f.coeffs(row, col) = c;
      if (row == 0) f.at(0, -ky) = std::conj(c);
    }
  }
  dealias(f);
}

void check_k_max(const Grid& grid, double k_max) {
  if (!std::isfinite(k_max) || k_max < 0.0) throw ParameterError("k_max must be finite and >= 0");
  if (k_max > grid.n() / 3.0) {
    throw ParameterError("k_max = " + std::to_string(k_max) + " exceeds n/3 for n = " +
                         std::to_string(grid.n()));
  }
}

}  // namespace

SpectralField random_band_limited_field(const Grid& grid, double k_max, double amplitude,
                                        std::uint64_t seed) {
  check_k_max(grid, k_max);
  GaussianStream rng(seed);
  SpectralField f(grid);
  fill_band_limited(f, k_max, amplitude, rng);
  return f;
}

GmhdState initial_condition(const InitialKind& kind, const Grid& grid, std::uint64_t seed) {
  GmhdState s(grid);
  struct Builder {
    GmhdState& s;
    std::uint64_t seed;

    void operator()(const OrszagTang&) const {
      // omega = Delta psi = cos x + cos y; a = -cos y - cos(2x)/2
      s.omega_hat.at(1, 0) = 0.5;
      s.omega_hat.at(0, 1) = 0.5;
      s.omega_hat.at(0, -1) = 0.5;
      s.a_hat.at(0, 1) = -0.5;
      s.a_hat.at(0, -1) = -0.5;
      s.a_hat.at(2, 0) = -0.25;
    }
    void operator()(const Shear&) const {
      s.omega_hat.at(0, 1) = 0.5;
      s.omega_hat.at(0, -1) = 0.5;
    }
    void operator()(const SingleMode& m) const {
      int kx = m.kx, ky = m.ky;
      if (kx < 0 || (kx == 0 && ky < 0)) {
        kx = -kx;
        ky = -ky;
      }
      if (kx == 0 && ky == 0) throw ParameterError("single mode must have nonzero wavevector");
      const int cut = s.grid().dealias_cutoff();
      if (kx > cut || std::abs(ky) > cut) throw ParameterError("single mode lies outside the retained band");
      s.omega_hat.at(kx, ky) = 0.5 * m.amplitude;
      if (kx == 0) s.omega_hat.at(0, -ky) = 0.5 * m.amplitude;
    }
    void operator()(const RandomBandLimited& r) const {
      check_k_max(s.grid(), r.k_max);
      GaussianStream rng(seed);
      fill_band_limited(s.omega_hat, r.k_max, r.amplitude, rng);
      fill_band_limited(s.a_hat, r.k_max, r.amplitude, rng);
    }
  };
  std::visit(Builder{s, seed}, kind);
  enforce_invariants(s);
  return s;
}

// --- snapshots --------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'M', 'H', 'D', '2', 'D', '\0', '\0'};

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

std::uint64_t get_bytes(std::istream& in, int count) {
  std::uint64_t v = 0;
  for (int i = 0; i < count; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("snapshot truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_bytes(in, 4)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_bytes(in, 8)); }

void put_field(std::ostream& out, const RealArray& v) {
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) put_f64(out, v(i, j));
  }
}

RealArray get_field(std::istream& in, int n) {
  RealArray v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = get_f64(in);
  }
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const GmhdState& state, const Params& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(state.grid().n()));
  put_f64(out, state.t);
  put_f64(out, params.nu);
  put_f64(out, params.kappa);
  put_f64(out, params.alpha);
  put_f64(out, params.beta);
  put_field(out, to_physical(state.omega_hat).values);
  put_field(out, to_physical(state.a_hat).values);
  if (!out) throw std::runtime_error("failed writing snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("not a GMHD2D snapshot: " + path);
  const std::uint32_t version = get_u32(in);
  if (version != kSnapshotVersion) {
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  }
  const auto n = static_cast<int>(get_u32(in));
  const Grid grid(n);
  Params params;
  params.n = n;
  const double t = get_f64(in);
  params.nu = get_f64(in);
  params.kappa = get_f64(in);
  params.alpha = get_f64(in);
  params.beta = get_f64(in);
  RealArray w = get_field(in, n);
  RealArray a = get_field(in, n);
  GmhdState s(to_spectral(PhysicalField(grid, std::move(w))), to_spectral(PhysicalField(grid, std::move(a))), t);
  enforce_invariants(s);
  return Snapshot{std::move(s), params};
}

}  // namespace gmhd
