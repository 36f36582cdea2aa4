#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dflux/runner.hpp"

namespace dflux {

struct WaveThresholds {
  /// A cell is flat when the total density varies by less than this over the
  /// centred window of flat_window cells.
  double plateau_tol = 1e-3;
  /// Odd. A window wider than 3 keeps slow fans (small per-cell steps) from
  /// passing as plateaus.
  std::size_t flat_window = 5;
  /// Transitions at least this many cells wide count as fans.
  std::size_t fan_width = 12;
  /// Shortest run of flat cells that separates two waves.
  std::size_t min_plateau = 3;
};

enum class WaveType { kShockLike, kFanLike, kContactAtX0 };
std::string_view to_string(WaveType t);

struct Wave {
  double left_edge = 0.0;   // x of the first cell in the transition
  double right_edge = 0.0;  // x of the last cell in the transition
  std::size_t first_cell = 0;
  std::size_t last_cell = 0;
  WaveType type = WaveType::kShockLike;
};

struct WaveReport {
  /// False when the profile has fewer than min_plateau flat cells in total.
  bool conclusive = false;
  std::vector<Wave> waves;  // disjoint, ordered in x
};

/// Splits the total density (sum of all observable columns) into plateaus and
/// transitions. Each transition is one wave, except that the jump across the
/// cell interface nearest x0 is reported as the contact on its own and any fan
/// attached to it on either side (at least min_plateau cells) as a separate wave.
WaveReport analyze_waves(const ProfileSnapshot& snap, double x0, const WaveThresholds& thresholds = {});

struct Pulse {
  std::size_t cell = 0;
  double x = 0.0;
  double amplitude = 0.0;
};

/// Peaks of the envelope max |profile| over a centred window of `window` cells
/// (one layer period in layered media), at least `threshold` high and
/// separated by a drop below half the smaller height. Ordered by x. With
/// `periodic` the profile wraps around.
std::vector<Pulse> detect_pulses(const std::vector<double>& x, const std::vector<double>& profile,
                                 double threshold, std::size_t window, bool periodic = false);

/// True if ordering the pulses by position also orders them strictly by
/// amplitude, the largest one in front. On a periodic domain of length
/// `period` positions are unwrapped so that the largest pulse is the front.
bool pulses_co_monotone(std::vector<Pulse> pulses, std::optional<double> period = std::nullopt);

}  // namespace dflux
