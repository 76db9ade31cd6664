#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmhd/diagnostics.hpp"

namespace gmhd {

struct RunOptions {
  /// Diagnostics cadence. Samples land on initial.t + k * sample_every and at t_end.
  double sample_every = 0.01;
  DiagnosticsConfig diagnostics;
  /// Keep a copy of the state at every sample in Trajectory::snapshots.
  bool keep_snapshots = false;
  /// Called after every sample, in time order.
  std::function<void(const GmhdState&, const DiagnosticsRecord&)> on_sample;
};

struct BlowUpInfo {
  double time = 0.0;
  std::string message;
};

struct Trajectory {
  DiagnosticsSeries series;
  std::vector<GmhdState> snapshots;
  GmhdState final_state;
  std::size_t steps = 0;
  /// Set when a non-finite value stopped the run; final_state is then the last valid state.
  std::optional<BlowUpInfo> blowup;
};

/// Integrates from `initial` to params.t_end. Time steps are the CFL step
/// clipped so that every sample time is hit exactly. A blow-up ends the run
/// early and is reported in the result rather than thrown.
Trajectory run(const GmhdState& initial, const Params& params, const RunOptions& options);

}  // namespace gmhd
