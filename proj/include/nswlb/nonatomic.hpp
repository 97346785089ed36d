#pragma once

#include <nswlb/errors.hpp>
#include <nswlb/game.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace nswlb {

namespace detail {

// Latency seen by a user of resource r; an empty resource shows its right limit at 0.
inline double flowCost(const NonAtomicGame& game, const std::vector<double>& load, std::size_t r) {
  const auto& lat = game.resources()[r].latency;
  return load[r] > 0.0 ? lat(load[r]) : lat.atZero();
}

}  // namespace detail

// Largest cost difference between a used resource and an admissible alternative, over all types.
inline double wardropGap(const NonAtomicGame& game, const FlowProfile& flow, double eps) {
  validateFlow(game, flow);
  const auto load = flowLoads(game, flow);
  double gap = 0.0;
  for (std::size_t i = 0; i < game.types().size(); ++i) {
    const auto& t = game.types()[i];
    double cheapest = std::numeric_limits<double>::infinity();
    for (auto r : t.admissible) cheapest = std::min(cheapest, detail::flowCost(game, load, r));
    for (std::size_t a = 0; a < t.admissible.size(); ++a)
      if (flow.share[i][a] > eps * t.rate)
        gap = std::max(gap, detail::flowCost(game, load, t.admissible[a]) - cheapest);
  }
  return gap;
}

inline bool wardropCheck(const NonAtomicGame& game, const FlowProfile& flow, double eps = 1e-6) {
  return wardropGap(game, flow, eps) <= eps;
}

inline FlowProfile symmetricWaterfill(const NonAtomicGame& game) {
  if (game.types().size() != 1) throw ValidationError("water-filling needs exactly one player type");
  const auto& type = game.types().front();
  const std::size_t m = game.resourceCount();
  if (type.admissible.size() != m) throw ValidationError("water-filling needs every resource admissible");
  for (std::size_t a = 0; a < m; ++a)
    if (std::count(type.admissible.begin(), type.admissible.end(), a) != 1)
      throw ValidationError("water-filling needs every resource admissible exactly once");
  const double total = type.rate;
  FlowProfile flow{{std::vector<double>(m, 0.0)}};
  if (total == 0.0) return flow;

  // largest x in [0, total] with l(x) <= level
  auto fill = [&](const LatencyFunction& lat, double level) {
    if (lat.atZero() > level) return 0.0;
    if (lat(total) <= level) return total;
    double lo = 0.0, hi = total;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (lat(mid) <= level ? lo : hi) = mid;
    }
    return lo;
  };
  auto massAt = [&](double level, std::vector<double>& x) {
    double sum = 0.0;
    for (std::size_t a = 0; a < m; ++a) sum += x[a] = fill(game.resources()[type.admissible[a]].latency, level);
    return sum;
  };

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (auto r : type.admissible) {
    lo = std::min(lo, game.resources()[r].latency.atZero());
    hi = std::max(hi, game.resources()[r].latency(total));
  }
  std::vector<double> xlo(m), xhi(m);
  if (massAt(lo, xlo) >= total) {
    hi = lo;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (massAt(mid, xhi) >= total ? hi : lo) = mid;
    }
  }
  const double below = massAt(lo, xlo);
  const double above = massAt(hi, xhi);
  if (above < total * (1.0 - kRelTol)) throw DidNotConverge("water-filling did not bracket the total rate");
  // resources whose fill jumps between the two levels absorb the remaining deficit
  const double deficit = std::max(0.0, total - below);
  const double room = above - below;
  for (std::size_t a = 0; a < m; ++a) {
    double x = xlo[a];
    if (room > 0.0) x += deficit * (xhi[a] - xlo[a]) / room;
    flow.share[0][a] = x;
  }
  // absorb rounding so the row sums to the rate
  double sum = 0.0;
  for (double x : flow.share[0]) sum += x;
  const auto biggest = std::max_element(flow.share[0].begin(), flow.share[0].end());
  *biggest = std::max(0.0, *biggest + (total - sum));
  if (!wardropCheck(game, flow, 1e-6)) throw DidNotConverge("water-filling result fails the equilibrium check");
  return flow;
}

enum class FlowMethod { pairwise, frankWolfe };

// Minimizes sum_j integral_0^{k_j} l_j until the Wardrop condition holds.
// pairwise: shift mass from a type's costliest used resource to its cheapest one with exact line search.
// frankWolfe: all-or-nothing direction with step 2/(t+2).
inline FlowProfile potentialMinimize(const NonAtomicGame& game, std::size_t maxIters = 100'000, double eps = 1e-6,
                                     FlowMethod method = FlowMethod::pairwise) {
  const auto& types = game.types();
  FlowProfile flow;
  for (const auto& t : types) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < t.admissible.size(); ++a)
      if (game.resources()[t.admissible[a]].latency.atZero() < game.resources()[t.admissible[best]].latency.atZero())
        best = a;
    std::vector<double> row(t.admissible.size(), 0.0);
    row[best] = t.rate;
    flow.share.push_back(std::move(row));
  }

  for (std::size_t iter = 0; iter < maxIters; ++iter) {
    if (wardropCheck(game, flow, eps)) return flow;
    auto load = flowLoads(game, flow);
    if (method == FlowMethod::frankWolfe) {
      const double step = 2.0 / (static_cast<double>(iter) + 2.0);
      for (std::size_t i = 0; i < types.size(); ++i) {
        const auto& t = types[i];
        std::size_t target = 0;
        for (std::size_t a = 1; a < t.admissible.size(); ++a)
          if (detail::flowCost(game, load, t.admissible[a]) < detail::flowCost(game, load, t.admissible[target]))
            target = a;
        for (std::size_t a = 0; a < t.admissible.size(); ++a)
          flow.share[i][a] = (1.0 - step) * flow.share[i][a] + (a == target ? step * t.rate : 0.0);
      }
      continue;
    }
    for (std::size_t i = 0; i < types.size(); ++i) {
      const auto& t = types[i];
      std::size_t from = t.admissible.size(), to = 0;
      for (std::size_t a = 0; a < t.admissible.size(); ++a) {
        const double c = detail::flowCost(game, load, t.admissible[a]);
        if (c < detail::flowCost(game, load, t.admissible[to])) to = a;
        if (flow.share[i][a] > 0.0 &&
            (from == t.admissible.size() || c > detail::flowCost(game, load, t.admissible[from])))
          from = a;
      }
      if (from == t.admissible.size()) continue;
      const std::size_t rf = t.admissible[from], rt = t.admissible[to];
      if (rf == rt) continue;
      const auto& lf = game.resources()[rf].latency;
      const auto& lt = game.resources()[rt].latency;
      // the potential's derivative along the move is l_to(k_to + s) - l_from(k_from - s), non-decreasing in s
      auto slope = [&](double s) { return lt(load[rt] + s) - lf(std::max(0.0, load[rf] - s)); };
      double lo = 0.0, hi = flow.share[i][from];
      if (slope(0.0) >= 0.0) continue;
      if (slope(hi) > 0.0) {
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid == lo || mid == hi) break;
          (slope(mid) > 0.0 ? hi : lo) = mid;
        }
      }
      const double shift = hi;
      flow.share[i][from] -= shift;
      if (flow.share[i][from] < 1e-15 * t.rate) {
        flow.share[i][to] += flow.share[i][from];
        flow.share[i][from] = 0.0;
      }
      flow.share[i][to] += shift;
      load[rf] -= shift;
      load[rt] += shift;
    }
  }
  if (wardropCheck(game, flow, eps)) return flow;
  throw DidNotConverge("potential minimization stopped with Wardrop gap " +
                       detail::formatDouble(wardropGap(game, flow, eps)));
}

inline double nonatomicRatio(const NonAtomicGame& game, const FlowProfile& eq, const FlowProfile& opt) {
  return std::exp(logNswFlow(game, eq).value - logNswFlow(game, opt).value);
}

// Desk-scale NSW optimum for one type on at most three resources: simplex grid, then pattern search.
inline FlowProfile gridOptimumFlow(const NonAtomicGame& game, std::size_t gridSteps = 400) {
  if (game.types().size() != 1) throw ValidationError("grid optimum needs exactly one player type");
  const auto& t = game.types().front();
  const std::size_t d = t.admissible.size();
  if (d > 3) throw ValidationError("grid optimum handles at most three admissible resources");
  const double total = t.rate;
  auto objective = [&](const std::vector<double>& x) {
    std::vector<double> load(game.resourceCount(), 0.0);
    for (std::size_t a = 0; a < d; ++a) load[t.admissible[a]] += x[a];
    double acc = 0.0;
    for (std::size_t r = 0; r < load.size(); ++r)
      if (load[r] > 0.0) acc += load[r] * game.resources()[r].latency.log(load[r]);
    return acc;
  };

  std::vector<double> best(d, 0.0);
  best[0] = total;
  double bestVal = objective(best);
  if (d > 1 && total > 0.0) {
    const double h = total / static_cast<double>(gridSteps);
    std::vector<double> x(d, 0.0);
    for (std::size_t i = 0; i <= gridSteps; ++i) {
      const std::size_t jMax = d == 3 ? gridSteps - i : 0;
      for (std::size_t j = 0; j <= jMax; ++j) {
        x[0] = h * static_cast<double>(i);
        if (d == 2) {
          x[1] = total - x[0];
        } else {
          x[1] = h * static_cast<double>(j);
          x[2] = std::max(0.0, total - x[0] - x[1]);
        }
        const double v = objective(x);
        if (v < bestVal) {
          bestVal = v;
          best = x;
        }
      }
    }
    for (double step = h; step > 1e-13 * total; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) {
            if (a == b || best[a] <= 0.0) continue;
            auto y = best;
            const double s = std::min(step, y[a]);
            y[a] -= s;
            y[b] += s;
            const double v = objective(y);
            if (v < bestVal) {
              bestVal = v;
              best = std::move(y);
              improved = true;
            }
          }
      }
    }
  }
  return FlowProfile{{best}};
}

}  // namespace nswlb
