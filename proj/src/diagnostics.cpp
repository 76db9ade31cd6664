#include "gmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace gmhd {

double lp_norm(const PhysicalField& f, double p) {
  if (std::isnan(p) || p < 1.0) throw ParameterError("L^p exponent must be >= 1, got " + std::to_string(p));
  if (std::isinf(p)) return f.values.abs().maxCoeff();
  const double area = f.grid.cell_area();
  if (p == 2.0) return std::sqrt(f.values.square().sum() * area);
  if (p == 1.0) return f.values.abs().sum() * area;
  // Scale by the maximum so that large p does not overflow.
  const double peak = f.values.abs().maxCoeff();
  if (peak == 0.0) return 0.0;
  const double sum = (f.values.abs() / peak).pow(p).sum();
  return peak * std::pow(sum * area, 1.0 / p);
}

namespace {

// First and second partials of a spectral field, sampled on the grid.
struct Derivatives {
  RealArray v, d1, d2, d11, d12, d22;
};

Derivatives derivatives_of(const SpectralField& f) {
  return {to_physical(f).values,
          to_physical(derivative(f, 1)).values,
          to_physical(derivative(f, 2)).values,
          to_physical(partial(f, 2, 0)).values,
          to_physical(partial(f, 1, 1)).values,
          to_physical(partial(f, 0, 2)).values};
}

}  // namespace

DirectionFieldNorms direction_field_norms(const PhysicalField& b1, const PhysicalField& b2, double eps) {
  require_same_grid(b1.grid, b2.grid);
  return direction_field_norms(to_spectral(b1), to_spectral(b2), eps);
}

DirectionField direction_field(const SpectralField& b1, const SpectralField& b2, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("direction-field eps must be positive");
  require_same_grid(b1.grid, b2.grid);
  const Derivatives f = derivatives_of(b1);
  const Derivatives g = derivatives_of(b2);
  const int n = b1.grid.n();
  const double eps2 = eps * eps;

  DirectionField out;
  auto zero = [n] { return RealArray(RealArray::Zero(n, n)); };
  out.abs_b = zero();
  out.coef_a = zero();
  for (int c = 0; c < 2; ++c) {
    out.bhat[c] = zero();
    out.coef_b[c] = zero();
    for (int k = 0; k < 2; ++k) {
      out.d[c][k] = zero();
      for (int l = 0; l < 2; ++l) out.dd[c][k][l] = zero();
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double b[2] = {f.v(i, j), g.v(i, j)};
      // db[c][k] = d_k b_c; ddb[c][k][l] = d_k d_l b_c
      const double db[2][2] = {{f.d1(i, j), f.d2(i, j)}, {g.d1(i, j), g.d2(i, j)}};
      const double ddb[2][2][2] = {{{f.d11(i, j), f.d12(i, j)}, {f.d12(i, j), f.d22(i, j)}},
                                   {{g.d11(i, j), g.d12(i, j)}, {g.d12(i, j), g.d22(i, j)}}};
      const double b2sum = b[0] * b[0] + b[1] * b[1];
      out.abs_b(i, j) = std::sqrt(b2sum);

      const double q = b2sum + eps2;
      const double s = std::sqrt(q);
      const double q32 = q * s;
      const double q52 = q32 * q;
      double dq[2], ddq[2][2];
      for (int k = 0; k < 2; ++k) dq[k] = 2.0 * (b[0] * db[0][k] + b[1] * db[1][k]);
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          ddq[k][l] = 2.0 * (db[0][k] * db[0][l] + db[1][k] * db[1][l] + b[0] * ddb[0][k][l] +
                             b[1] * ddb[1][k][l]);
        }
      }
      double bh[2], dbh[2][2], ddbh[2][2][2];
      for (int c = 0; c < 2; ++c) {
        bh[c] = b[c] / s;
        out.bhat[c](i, j) = bh[c];
        for (int k = 0; k < 2; ++k) {
          dbh[c][k] = db[c][k] / s - 0.5 * b[c] * dq[k] / q32;
          out.d[c][k](i, j) = dbh[c][k];
        }
        for (int k = 0; k < 2; ++k) {
          for (int l = 0; l < 2; ++l) {
            ddbh[c][k][l] = ddb[c][k][l] / s - 0.5 * (db[c][k] * dq[l] + db[c][l] * dq[k]) / q32 +
                            0.75 * b[c] * dq[k] * dq[l] / q52 - 0.5 * b[c] * ddq[k][l] / q32;
            out.dd[c][k][l](i, j) = ddbh[c][k][l];
          }
        }
      }
      const double div = dbh[0][0] + dbh[1][1];
      double d_coef_b[2][2];
      for (int c = 0; c < 2; ++c) {
        out.coef_b[c](i, j) = bh[0] * dbh[c][0] + bh[1] * dbh[c][1] - div * bh[c];
        for (int k = 0; k < 2; ++k) {
          const double d_div = ddbh[0][0][k] + ddbh[1][1][k];
          d_coef_b[c][k] = dbh[0][k] * dbh[c][0] + dbh[1][k] * dbh[c][1] + bh[0] * ddbh[c][0][k] +
                           bh[1] * ddbh[c][1][k] - d_div * bh[c] - div * dbh[c][k];
        }
      }
      out.coef_a(i, j) = -d_coef_b[0][1] + d_coef_b[1][0];
    }
  }
  return out;
}

DirectionFieldNorms direction_field_norms(const SpectralField& b1, const SpectralField& b2, double eps) {
  const DirectionField f = direction_field(b1, b2, eps);
  DirectionFieldNorms out;
  out.min_abs_b = f.abs_b.minCoeff();
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < 2; ++k) {
      out.w1inf = std::max(out.w1inf, f.d[c][k].abs().maxCoeff());
      for (int l = 0; l < 2; ++l) out.w2inf = std::max(out.w2inf, f.dd[c][k][l].abs().maxCoeff());
    }
  }
  out.b_inf = (f.coef_b[0].square() + f.coef_b[1].square()).sqrt().maxCoeff();
  out.a_inf = f.coef_a.abs().maxCoeff();
  out.regularization_dominated = out.min_abs_b <= eps;
  return out;
}

DiagnosticsRecord compute_record(const GmhdState& state, const Params& params, const DiagnosticsConfig& config) {
  const Velocity u = biot_savart(state.omega_hat);
  const MagneticField b = field_from_potential(state.a_hat);
  auto sq = [](double x) { return x * x; };

  DiagnosticsRecord r;
  r.t = state.t;
  const double u_l2sq = sq(homogeneous_sobolev_norm(u.u1, 0.0)) + sq(homogeneous_sobolev_norm(u.u2, 0.0));
  const double b_l2sq = sq(homogeneous_sobolev_norm(b.b1, 0.0)) + sq(homogeneous_sobolev_norm(b.b2, 0.0));
  r.energy = 0.5 * (u_l2sq + b_l2sq);
  r.diss_u = sq(homogeneous_sobolev_norm(u.u1, params.alpha)) + sq(homogeneous_sobolev_norm(u.u2, params.alpha));
  r.diss_b = sq(homogeneous_sobolev_norm(b.b1, params.beta)) + sq(homogeneous_sobolev_norm(b.b2, params.beta));
  r.omega_l2 = homogeneous_sobolev_norm(state.omega_hat, 0.0);
  r.j_l2 = homogeneous_sobolev_norm(b.j, 0.0);
  r.diss_omega = sq(homogeneous_sobolev_norm(state.omega_hat, params.alpha));
  r.diss_j = sq(homogeneous_sobolev_norm(b.j, params.beta));
  r.h1 = sq(r.omega_l2) + sq(r.j_l2);
  const double omega_h1 = homogeneous_sobolev_norm(state.omega_hat, 1.0);
  const double j_h1 = homogeneous_sobolev_norm(b.j, 1.0);
  r.h2 = sq(omega_h1) + sq(j_h1);
  r.a_l2sq = sq(homogeneous_sobolev_norm(state.a_hat, 0.0));

  const PhysicalField omega = to_physical(state.omega_hat);
  const PhysicalField j = to_physical(b.j);
  const RealArray u1 = to_physical(u.u1).values, u2 = to_physical(u.u2).values;
  const RealArray b1 = to_physical(b.b1).values, b2 = to_physical(b.b2).values;
  r.cross_helicity = (u1 * b1 + u2 * b2).sum() * state.grid().cell_area();
  r.b_linf = (b1.square() + b2.square()).sqrt().maxCoeff();
  r.omega_linf = omega.values.abs().maxCoeff();
  r.j_linf = j.values.abs().maxCoeff();

  RealArray grad_u = RealArray::Zero(u1.rows(), u1.cols());
  for (const SpectralField* c : {&u.u1, &u.u2}) {
    for (int axis : {1, 2}) grad_u += to_physical(derivative(*c, axis)).values.square();
  }
  r.grad_u_linf = grad_u.sqrt().maxCoeff();

  const PhysicalField grad_j(state.grid(), (to_physical(derivative(b.j, 1)).values.square() +
                                            to_physical(derivative(b.j, 2)).values.square())
                                               .sqrt());
  for (double p : config.p_list) {
    r.omega_lp.push_back(lp_norm(omega, p));
    r.grad_j_lp.push_back(lp_norm(grad_j, p));
  }

  if (std::isfinite(r.b_linf)) {
    const double eps = config.eps_bhat_factor * (r.b_linf > 0.0 ? r.b_linf : 1.0);
    const DirectionFieldNorms dir = direction_field_norms(b.b1, b.b2, eps);
    r.bhat_w1inf = dir.w1inf;
    r.bhat_w2inf = dir.w2inf;
    r.bhat_min_abs_b = dir.min_abs_b;
  } else {
    r.bhat_w1inf = r.bhat_w2inf = r.bhat_min_abs_b = std::numeric_limits<double>::quiet_NaN();
  }
  // bkm_h1_accum integrand is stored temporarily until append() integrates it.
  r.bkm_h1_accum = omega_h1 + j_h1;
  return r;
}

DiagnosticsSeries::DiagnosticsSeries(const Params& params, DiagnosticsConfig config)
    : params_(params), config_(std::move(config)) {
  for (double p : config_.p_list) {
    if (std::isnan(p) || p < 1.0) throw ParameterError("p_list entries must be >= 1");
  }
}

void DiagnosticsSeries::append(DiagnosticsRecord r) {
  if (r.omega_lp.size() != config_.p_list.size() || r.grad_j_lp.size() != config_.p_list.size()) {
    throw ParameterError("record does not match the configured p list");
  }
  const double h1_integrand = r.bkm_h1_accum;
  if (records_.empty()) {
    r.bkm_accum = 0.0;
    r.bkm_h1_accum = 0.0;
    r.energy_residual = 0.0;
    h1_integrand_prev_ = h1_integrand;
  } else {
    const DiagnosticsRecord& prev = records_.back();
    const double dt = r.t - prev.t;
    if (!(dt >= 0.0)) throw ParameterError("records must be appended in time order");
    r.bkm_accum = prev.bkm_accum + 0.5 * dt * (prev.omega_linf + prev.j_linf + r.omega_linf + r.j_linf);
    r.bkm_h1_accum = prev.bkm_h1_accum + 0.5 * dt * (h1_integrand_prev_ + h1_integrand);
    h1_integrand_prev_ = h1_integrand;
    const double loss = 0.5 * dt *
                        (params_.nu * (prev.diss_u + r.diss_u) + params_.kappa * (prev.diss_b + r.diss_b));
    const double e0 = records_.front().energy;
    const double defect = std::abs(r.energy - prev.energy + loss);
    r.energy_residual = e0 > 0.0 ? defect / e0 : defect;
  }
  records_.push_back(std::move(r));
}

std::size_t DiagnosticsSeries::p_index(double p) const {
  for (std::size_t i = 0; i < config_.p_list.size(); ++i) {
    if (config_.p_list[i] == p) return i;
  }
  throw ParameterError("p = " + format_p(p) + " is not among the configured exponents");
}

double energy_balance_residual(const DiagnosticsSeries& series) {
  const auto& rec = series.records();
  if (rec.size() < 3) throw ParameterError("energy balance needs at least 3 samples");
  const double cadence = rec[1].t - rec[0].t;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    const double dt = rec[k].t - rec[k - 1].t;
    if (std::abs(dt - cadence) > 1e-9 * std::max(1.0, cadence)) {
      throw ParameterError("energy balance needs a uniform sampling cadence");
    }
  }
  double worst = 0.0;
  for (std::size_t k = 1; k < rec.size(); ++k) worst = std::max(worst, rec[k].energy_residual);
  return worst;
}

H1Ledger h1_ledger(const DiagnosticsSeries& series) {
  const Params& p = series.params();
  H1Ledger ledger;
  ledger.hypothesis_holds = p.beta >= 1.0;
  double integral = 0.0;
  const auto& rec = series.records();
  for (std::size_t k = 0; k < rec.size(); ++k) {
    if (k > 0) {
      const double dt = rec[k].t - rec[k - 1].t;
      integral += dt * (p.nu * (rec[k - 1].diss_omega + rec[k].diss_omega) +
                        p.kappa * (rec[k - 1].diss_j + rec[k].diss_j));
    }
    const double value = rec[k].h1 + integral;
    ledger.values.push_back(value);
    ledger.max = std::max(ledger.max, value);
  }
  return ledger;
}

LpBoundReport lp_vorticity_bound_check(const DiagnosticsSeries& series, double p) {
  if (!(p >= 2.0)) throw ParameterError("L^p bound audit needs p >= 2");
  const std::size_t idx = series.p_index(p);
  LpBoundReport report;
  report.p = p;
  report.max_excess = -kInfinity;
  const auto& rec = series.records();
  for (std::size_t k = 1; k < rec.size(); ++k) {
    const DiagnosticsRecord& a = rec[k - 1];
    const DiagnosticsRecord& b = rec[k];
    const double dt = b.t - a.t;
    const double bound = 0.5 * dt * (a.b_linf * a.grad_j_lp[idx] + b.b_linf * b.grad_j_lp[idx]);
    const double excess = (b.omega_lp[idx] - a.omega_lp[idx]) - bound;
    const double tol = 1e-6 * (1.0 + std::max(a.omega_lp[idx], b.omega_lp[idx]));
    report.excess.push_back(excess);
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > tol) ++report.violations;
  }
  if (report.excess.empty()) report.max_excess = 0.0;
  report.pass = report.violations == 0;
  return report;
}

double bkm_accumulator(const DiagnosticsSeries& series) {
  const auto& rec = series.records();
  double total = 0.0;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    total += 0.5 * (rec[k].t - rec[k - 1].t) *
             (rec[k - 1].omega_linf + rec[k - 1].j_linf + rec[k].omega_linf + rec[k].j_linf);
  }
  return total;
}

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string diagnostics_csv_header(const DiagnosticsConfig& config) {
  std::string h =
      "t,energy,diss_u,diss_b,omega_l2,j_l2,omega_linf,j_linf,grad_u_linf,h1,h2,bkm_accum,"
      "bhat_w1inf,bhat_w2inf,energy_residual";
  for (double p : config.p_list) h += ",omega_lp_" + format_p(p);
  return h;
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticsSeries& series) {
  out << diagnostics_csv_header(series.config()) << '\n';
  for (const DiagnosticsRecord& r : series.records()) {
    const double fields[] = {r.t,      r.energy,       r.diss_u,      r.diss_b,     r.omega_l2,
                             r.j_l2,   r.omega_linf,   r.j_linf,      r.grad_u_linf, r.h1,
                             r.h2,     r.bkm_accum,    r.bhat_w1inf,  r.bhat_w2inf, r.energy_residual};
    bool first = true;
    for (double v : fields) {
      if (!first) out << ',';
      out << format_number(v);
      first = false;
    }
    for (double v : r.omega_lp) out << ',' << format_number(v);
    out << '\n';
  }
}

}  // namespace gmhd
