#pragma once

#include <nswlb/game.hpp>
#include <nswlb/latency.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace nswlb {

struct RandomGameSpec {
  std::size_t maxPlayers = 6;
  std::size_t maxResources = 4;
  int maxDegree = 3;
  bool weighted = false;
  double admissibleProbability = 0.6;
};

struct RandomGame {
  AtomicGame game;
  int degree;  // largest degree among the latencies
};

// Random polynomial load balancing game; every draw comes from rng so a seed fixes the instance.
inline RandomGame randomPolynomialGame(std::mt19937_64& rng, const RandomGameSpec& spec = {}) {
  std::uniform_int_distribution<std::size_t> nDist(1, spec.maxPlayers), mDist(1, spec.maxResources);
  std::uniform_int_distribution<int> degDist(0, spec.maxDegree);
  std::uniform_real_distribution<double> coef(0.1, 2.0), weight(0.25, 4.0), unit(0.0, 1.0);
  const std::size_t n = nDist(rng), m = mDist(rng);

  int degree = 0;
  std::vector<Resource> resources;
  for (std::size_t r = 0; r < m; ++r) {
    const int d = degDist(rng);
    std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
    for (int t = 0; t < d; ++t)
      if (unit(rng) < 0.5) c[static_cast<std::size_t>(t)] = coef(rng);
    c.back() = coef(rng);
    degree = std::max(degree, d);
    resources.push_back({"r" + std::to_string(r), LatencyFunction::polynomial(std::move(c))});
  }
  std::vector<Player> players;
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (std::size_t i = 0; i < n; ++i) {
    Player p{spec.weighted ? weight(rng) : 1.0, {}};
    for (std::size_t r = 0; r < m; ++r)
      if (unit(rng) < spec.admissibleProbability) p.strategies.push_back({r});
    if (p.strategies.empty()) p.strategies.push_back({pick(rng)});
    players.push_back(std::move(p));
  }
  return {AtomicGame(std::move(resources), std::move(players)), degree};
}

}  // namespace nswlb
