#pragma once

#include <nswlb/errors.hpp>
#include <nswlb/game.hpp>
#include <nswlb/optima.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace nswlb {

struct OnlineInstance {
  AtomicGame game;
  std::vector<std::size_t> arrivalOrder;
};

inline void validateOnline(const OnlineInstance& inst) {
  if (inst.game.mode() != GameMode::loadBalancing) throw ValidationError("online instances use load balancing mode");
  const std::size_t n = inst.game.playerCount();
  if (inst.arrivalOrder.size() != n) throw ValidationError("arrival order must list every client once");
  std::vector<bool> seen(n, false);
  for (auto c : inst.arrivalOrder) {
    if (c >= n || seen[c]) throw ValidationError("arrival order is not a permutation");
    seen[c] = true;
  }
}

inline std::vector<std::size_t> identityOrder(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

inline std::vector<std::size_t> shuffledOrder(std::size_t n, std::uint64_t seed) {
  auto order = identityOrder(n);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// Change of the log-NSW numerator when client i joins resource j at the given loads.
inline double greedyStepCost(const AtomicGame& game, const std::vector<double>& loads, std::size_t i, std::size_t j) {
  const auto& p = game.players().at(i);
  const bool admissible =
      std::any_of(p.strategies.begin(), p.strategies.end(), [j](const Strategy& s) { return s.front() == j; });
  if (!admissible) throw ValidationError("resource is not admissible for this client");
  const auto& lat = game.resources()[j].latency;
  const double k = loads.at(j);
  const double after = (k + p.weight) * lat.log(k + p.weight);
  return k > 0.0 ? after - k * lat.log(k) : after;
}

struct GreedyStep {
  std::size_t client;
  std::size_t strategy;
  std::vector<double> increments;  // per strategy of the client
};

struct GreedyResult {
  Profile profile;
  std::vector<GreedyStep> steps;
};

inline GreedyResult greedyAssign(const OnlineInstance& inst, double tol = kRelTol) {
  validateOnline(inst);
  const auto& game = inst.game;
  GreedyResult res;
  res.profile.assign(game.playerCount(), 0);
  std::vector<double> loads(game.resourceCount(), 0.0);
  for (auto c : inst.arrivalOrder) {
    const auto& strategies = game.players()[c].strategies;
    GreedyStep step{c, 0, {}};
    for (const auto& s : strategies) step.increments.push_back(greedyStepCost(game, loads, c, s.front()));
    for (std::size_t s = 1; s < strategies.size(); ++s) {
      const double best = step.increments[step.strategy];
      if (step.increments[s] < best && !nearlyEqual(step.increments[s], best, tol)) step.strategy = s;
    }
    res.profile[c] = step.strategy;
    loads[strategies[step.strategy].front()] += game.players()[c].weight;
    res.steps.push_back(std::move(step));
  }
  return res;
}

struct CompetitiveResult {
  double ratio = 1.0;
  Profile greedy;
  Profile optimum;
};

inline CompetitiveResult competitiveRatio(const OnlineInstance& inst, std::size_t cap = kDefaultProfileCap) {
  auto greedy = greedyAssign(inst);
  const auto opt = bruteForceOpt(inst.game, cap);
  return {std::exp(logNsw(inst.game, greedy.profile).value - opt.value.value), std::move(greedy.profile), opt.profile};
}

}  // namespace nswlb
