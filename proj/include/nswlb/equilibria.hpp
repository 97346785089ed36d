#pragma once

#include <nswlb/errors.hpp>
#include <nswlb/game.hpp>
#include <nswlb/optima.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace nswlb {

namespace detail {

// Cost player i would pay on strategy s with everyone else fixed.
inline double deviationCost(const AtomicGame& game, const Profile& profile, const std::vector<double>& load,
                            std::size_t i, std::size_t s) {
  const auto& p = game.players()[i];
  const auto& current = p.strategies[profile[i]];
  double c = 0.0;
  for (auto r : p.strategies[s]) {
    const bool already = std::find(current.begin(), current.end(), r) != current.end();
    c += game.resources()[r].latency(already ? load[r] : load[r] + p.weight);
  }
  return c;
}

inline bool improves(double candidate, double current, double tol) { return candidate < current - tol * current; }

inline std::size_t bestResponseFromLoads(const AtomicGame& game, const Profile& profile, const std::vector<double>& load,
                                         std::size_t i, double tol) {
  const auto& strategies = game.players()[i].strategies;
  std::size_t best = 0;
  double bestCost = deviationCost(game, profile, load, i, 0);
  for (std::size_t s = 1; s < strategies.size(); ++s) {
    const double c = deviationCost(game, profile, load, i, s);
    if (improves(c, bestCost, tol)) {
      best = s;
      bestCost = c;
    }
  }
  return best;
}

inline bool isPneFromLoads(const AtomicGame& game, const Profile& profile, const std::vector<double>& load, double tol) {
  for (std::size_t i = 0; i < game.playerCount(); ++i) {
    const double cur = deviationCost(game, profile, load, i, profile[i]);
    for (std::size_t s = 0; s < game.players()[i].strategies.size(); ++s)
      if (s != profile[i] && improves(deviationCost(game, profile, load, i, s), cur, tol)) return false;
  }
  return true;
}

}  // namespace detail

// Cheapest strategy for player i against the others; near-ties keep the smaller index.
inline std::size_t bestResponse(const AtomicGame& game, const Profile& profile, std::size_t i, double tol = kRelTol) {
  const auto load = congestion(game, profile);
  if (i >= game.playerCount()) throw ValidationError("player index out of range");
  return detail::bestResponseFromLoads(game, profile, load, i, tol);
}

inline bool isPne(const AtomicGame& game, const Profile& profile, double tol = kRelTol) {
  return detail::isPneFromLoads(game, profile, congestion(game, profile), tol);
}

enum class Schedule { roundRobin, maxWeightFirst, seededRandom };

struct DynamicsMove {
  std::size_t sweep;
  std::size_t player;
  std::size_t from;
  std::size_t to;
  double oldCost;
  double newCost;
};

struct DynamicsResult {
  bool converged = false;
  Profile profile;  // the equilibrium, or the last profile reached
  std::size_t sweeps = 0;
  std::vector<DynamicsMove> trace;
};

inline DynamicsResult bestResponseDynamics(const AtomicGame& game, Profile start,
                                           Schedule schedule = Schedule::maxWeightFirst, std::size_t maxSweeps = 10'000,
                                           std::uint64_t seed = 0, double tol = kRelTol) {
  if (game.mode() != GameMode::loadBalancing) throw ValidationError("best-response dynamics needs load balancing mode");
  validateProfile(game, start);
  std::vector<std::size_t> order(game.playerCount());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (schedule == Schedule::maxWeightFirst)
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return game.players()[a].weight > game.players()[b].weight; });
  std::mt19937_64 rng(seed);

  DynamicsResult res;
  res.profile = std::move(start);
  auto load = congestion(game, res.profile);
  for (std::size_t sweep = 1; sweep <= maxSweeps; ++sweep) {
    if (schedule == Schedule::seededRandom) std::shuffle(order.begin(), order.end(), rng);
    bool moved = false;
    for (auto i : order) {
      const std::size_t to = detail::bestResponseFromLoads(game, res.profile, load, i, tol);
      const std::size_t from = res.profile[i];
      if (to == from) continue;
      const double oldCost = detail::deviationCost(game, res.profile, load, i, from);
      const double newCost = detail::deviationCost(game, res.profile, load, i, to);
      if (!detail::improves(newCost, oldCost, tol)) continue;
      res.profile[i] = to;
      load = congestion(game, res.profile);
      res.trace.push_back({sweep, i, from, to, oldCost, newCost});
      moved = true;
    }
    res.sweeps = sweep;
    if (!moved) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

inline std::vector<Profile> enumeratePne(const AtomicGame& game, std::size_t cap = kDefaultProfileCap,
                                         double tol = kRelTol) {
  std::vector<Profile> out;
  forEachProfile(game, cap, [&](const Profile& p) {
    if (detail::isPneFromLoads(game, p, congestion(game, p), tol)) out.push_back(p);
  });
  return out;
}

struct NpoaResult {
  double ratio = 1.0;
  Profile worstPne;
  Profile optimum;
  std::size_t pneCount = 0;
};

inline NpoaResult empiricalNpoa(const AtomicGame& game, std::size_t cap = kDefaultProfileCap) {
  const auto pne = enumeratePne(game, cap);
  if (pne.empty()) throw InternalAnomaly("no pure Nash equilibrium found");
  NpoaResult res;
  res.pneCount = pne.size();
  double worst = 0.0;
  bool first = true;
  for (const auto& p : pne) {
    const double v = logNsw(game, p).value;
    if (first || v > worst + 1e-12 * std::max(1.0, std::abs(worst))) {
      first = false;
      worst = v;
      res.worstPne = p;
    }
  }
  const auto opt = bruteForceOpt(game, cap);
  res.optimum = opt.profile;
  res.ratio = std::exp(worst - opt.value.value);
  return res;
}

}  // namespace nswlb
