#include "dflux/waves.hpp"

#include <algorithm>
#include <cmath>

#include "dflux/errors.hpp"

namespace dflux {

std::string_view to_string(WaveType t) {
  switch (t) {
    case WaveType::kShockLike: return "shock-like";
    case WaveType::kFanLike: return "fan-like";
    case WaveType::kContactAtX0: return "contact-at-x0";
  }
  return "?";
}

WaveReport analyze_waves(const ProfileSnapshot& snap, double x0, const WaveThresholds& th) {
  if (!(th.plateau_tol > 0.0)) throw ConfigError("analyze: plateau tolerance must be positive");
  if (th.fan_width == 0) throw ConfigError("analyze: fan width must be at least one cell");
  if (th.flat_window % 2 == 0) throw ConfigError("analyze: flat window must be odd");
  const std::size_t n = snap.rows();
  WaveReport report;
  if (n < 2) return report;

  std::vector<double> rho(n, 0.0);
  for (const auto& col : snap.values) {
    for (std::size_t j = 0; j < n; ++j) rho[j] += col[j];
  }

  const std::size_t half = th.flat_window / 2;
  std::vector<bool> flat(n);
  std::size_t flat_count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j >= half ? j - half : 0;
    const std::size_t hi = std::min(n - 1, j + half);
    const auto [mn, mx] = std::minmax_element(rho.begin() + lo, rho.begin() + hi + 1);
    flat[j] = *mx - *mn < th.plateau_tol;
    flat_count += flat[j] ? 1 : 0;
  }
  report.conclusive = flat_count >= th.min_plateau;

  // Runs of non-flat cells, merged across flat gaps shorter than min_plateau.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t j = 0; j < n;) {
    if (flat[j]) {
      ++j;
      continue;
    }
    std::size_t k = j;
    while (k + 1 < n && !flat[k + 1]) ++k;
    if (!runs.empty() && j - runs.back().second - 1 < th.min_plateau) {
      runs.back().second = k;
    } else {
      runs.emplace_back(j, k);
    }
    j = k + 1;
  }
  // The window widens every transition; a lone jump between cells c and c+1
  // shows up as cells c-half+1 .. c+half.
  const std::size_t pad = half > 0 ? half - 1 : 0;
  for (auto& [first, last] : runs) {
    if (last - first >= 2 * pad + 1) {
      first += pad;
      last -= pad;
    }
  }

  // Interface nearest x0, between cells c and c + 1.
  std::size_t c = 0;
  double best = std::abs(0.5 * (snap.x[0] + snap.x[1]) - x0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double d = std::abs(0.5 * (snap.x[j] + snap.x[j + 1]) - x0);
    if (d < best) {
      best = d;
      c = j;
    }
  }

  auto push = [&](std::size_t first, std::size_t last, std::optional<WaveType> type = std::nullopt) {
    Wave w;
    w.first_cell = first;
    w.last_cell = last;
    w.left_edge = snap.x[first];
    w.right_edge = snap.x[last];
    w.type = type.value_or(last - first + 1 >= th.fan_width ? WaveType::kFanLike : WaveType::kShockLike);
    report.waves.push_back(w);
  };
  for (auto [first, last] : runs) {
    if (!(first <= c && c + 1 <= last)) {
      push(first, last);
      continue;
    }
    if (c - first >= th.min_plateau) push(first, c - 1);
    push(c, c + 1, WaveType::kContactAtX0);
    if (last - (c + 1) >= th.min_plateau) push(c + 2, last);
  }
  return report;
}

std::vector<Pulse> detect_pulses(const std::vector<double>& x, const std::vector<double>& profile,
                                 double threshold, std::size_t window, bool periodic) {
  const std::size_t n = profile.size();
  if (x.size() != n) throw ConfigError("detect_pulses: x and profile differ in length");
  if (n == 0) return {};
  const auto half = static_cast<std::ptrdiff_t>(std::max<std::size_t>(window, 1) / 2);
  const auto sn = static_cast<std::ptrdiff_t>(n);

  auto at = [&](std::ptrdiff_t j) -> std::ptrdiff_t {
    if (periodic) return ((j % sn) + sn) % sn;
    return std::clamp<std::ptrdiff_t>(j, 0, sn - 1);
  };

  std::vector<double> env(n, 0.0);
  for (std::ptrdiff_t j = 0; j < sn; ++j) {
    double m = 0.0;
    for (std::ptrdiff_t d = -half; d <= half; ++d) m = std::max(m, std::abs(profile[at(j + d)]));
    env[j] = m;
  }

  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(profile[j]);
    if (a >= threshold && a == env[j]) candidates.push_back(j);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(profile[a]) > std::abs(profile[b]);
  });

  // Lowest envelope value strictly between cells a and b (shorter arc when periodic).
  auto valley = [&](std::size_t a, std::size_t b) {
    std::size_t lo = std::min(a, b), hi = std::max(a, b);
    double m = std::min(env[lo], env[hi]);
    if (periodic && hi - lo > n / 2) {
      for (std::size_t j = hi; j < n; ++j) m = std::min(m, env[j]);
      for (std::size_t j = 0; j <= lo; ++j) m = std::min(m, env[j]);
    } else {
      for (std::size_t j = lo; j <= hi; ++j) m = std::min(m, env[j]);
    }
    return m;
  };

  std::vector<Pulse> pulses;
  for (std::size_t j : candidates) {
    const double a = std::abs(profile[j]);
    const bool separate = std::all_of(pulses.begin(), pulses.end(), [&](const Pulse& p) {
      return valley(p.cell, j) < 0.5 * std::min(a, p.amplitude);
    });
    if (separate) pulses.push_back({j, x[j], a});
  }
  std::sort(pulses.begin(), pulses.end(), [](const Pulse& a, const Pulse& b) { return a.x < b.x; });
  return pulses;
}

bool pulses_co_monotone(std::vector<Pulse> pulses, std::optional<double> period) {
  if (pulses.size() < 2) return true;
  if (period) {
    const auto front = std::max_element(pulses.begin(), pulses.end(), [](const Pulse& a, const Pulse& b) {
      return a.amplitude < b.amplitude;
    });
    const double x_front = front->x;
    for (auto& p : pulses) {
      if (p.x > x_front) p.x -= *period;
    }
  }
  std::sort(pulses.begin(), pulses.end(), [](const Pulse& a, const Pulse& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < pulses.size(); ++i) {
    if (!(pulses[i].amplitude > pulses[i - 1].amplitude)) return false;
  }
  return true;
}

}  // namespace dflux
