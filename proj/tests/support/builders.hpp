#pragma once

#include <nswlb/game.hpp>

#include <string>
#include <utility>
#include <vector>

namespace build {

using nswlb::LatencyFunction;

inline LatencyFunction lin(double a = 1.0) { return LatencyFunction::monomial(1, a); }
inline LatencyFunction mono(int p, double a = 1.0) { return LatencyFunction::monomial(p, a); }

struct P {
  double weight;
  std::vector<std::size_t> resources;  // singleton strategies
};

inline nswlb::AtomicGame lb(const std::vector<LatencyFunction>& lats, const std::vector<P>& players) {
  std::vector<nswlb::Resource> rs;
  for (std::size_t j = 0; j < lats.size(); ++j) rs.push_back({"r" + std::to_string(j), lats[j]});
  std::vector<nswlb::Player> ps;
  for (const auto& p : players) {
    nswlb::Player pl{p.weight, {}};
    for (auto r : p.resources) pl.strategies.push_back({r});
    ps.push_back(std::move(pl));
  }
  return nswlb::AtomicGame(std::move(rs), std::move(ps));
}

// n unit players, each allowed everywhere
inline nswlb::AtomicGame symmetric(const std::vector<LatencyFunction>& lats, std::size_t n, double w = 1.0) {
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < lats.size(); ++j) all.push_back(j);
  return lb(lats, std::vector<P>(n, P{w, all}));
}

}  // namespace build
