#include "gmhd/run.hpp"

#include <algorithm>
#include <cmath>

namespace gmhd {

Trajectory run(const GmhdState& initial, const Params& raw_params, const RunOptions& options) {
  const Params params = make_params(raw_params);
  if (params.n != initial.grid().n()) throw ParameterError("initial state grid does not match params.n");
  if (!(options.sample_every > 0.0) || !std::isfinite(options.sample_every)) {
    throw ParameterError("sample_every must be positive");
  }
  if (params.t_end < initial.t) throw ParameterError("t_end lies before the initial time");

  Trajectory traj{DiagnosticsSeries(params, options.diagnostics), {}, initial, 0, std::nullopt};
  const LinearRates rates = linear_rates(initial.grid(), params);
  const double t0 = initial.t;
  // Relative slack for deciding that a sample time has been reached.
  const double slack = 1e-12 * std::max(1.0, std::abs(params.t_end));

  auto sample = [&](const GmhdState& s) {
    DiagnosticsRecord r = compute_record(s, params, options.diagnostics);
    traj.series.append(std::move(r));
    if (options.keep_snapshots) traj.snapshots.push_back(s);
    if (options.on_sample) options.on_sample(s, traj.series.records().back());
  };

  GmhdState state = initial;
  if (!all_finite(state.omega_hat) || !all_finite(state.a_hat)) {
    traj.blowup = BlowUpInfo{state.t, "non-finite initial state"};
    return traj;
  }
  sample(state);
  long next_index = 1;
  while (params.t_end - state.t > slack) {
    const double next_sample = std::min(params.t_end, t0 + next_index * options.sample_every);
    const double cfl = cfl_dt(state, params);
    if (!(cfl > 0.0)) {
      traj.blowup = BlowUpInfo{state.t, "non-finite velocity or magnetic field"};
      break;
    }
    double dt = std::min(cfl, next_sample - state.t);
    const bool lands = dt >= next_sample - state.t - slack;
    try {
      state = step(state, params, rates, dt);
    } catch (const BlowUpError& e) {
      traj.blowup = BlowUpInfo{e.time(), e.what()};
      break;
    }
    ++traj.steps;
    if (lands) {
      state.t = next_sample;
      sample(state);
      ++next_index;
    }
  }
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace gmhd
