#pragma once

// Deliberately naive reference implementations used to check the library.
// They work with plain products and full recomputation, never the log-domain shortcuts.

#include <nswlb/game.hpp>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using nswlb::AtomicGame;
using nswlb::Profile;

inline std::vector<double> loads(const AtomicGame& g, const Profile& p) {
  std::vector<double> k(g.resourceCount(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (auto r : g.players()[i].strategies[p[i]]) k[r] += g.players()[i].weight;
  return k;
}

inline double cost(const AtomicGame& g, const Profile& p, std::size_t i) {
  const auto k = loads(g, p);
  double c = 0.0;
  for (auto r : g.players()[i].strategies[p[i]]) c += g.resources()[r].latency(k[r]);
  return c;
}

// (prod_i cost_i^{w_i})^{1/W}
inline double nsw(const AtomicGame& g, const Profile& p) {
  double prod = 1.0, w = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    prod *= std::pow(cost(g, p, i), g.players()[i].weight);
    w += g.players()[i].weight;
  }
  return std::pow(prod, 1.0 / w);
}

inline void enumerate(const AtomicGame& g, Profile& p, std::size_t i, const std::function<void(const Profile&)>& fn) {
  if (i == p.size()) {
    fn(p);
    return;
  }
  for (std::size_t s = 0; s < g.players()[i].strategies.size(); ++s) {
    p[i] = s;
    enumerate(g, p, i + 1, fn);
  }
}

inline void forAll(const AtomicGame& g, const std::function<void(const Profile&)>& fn) {
  Profile p(g.playerCount(), 0);
  enumerate(g, p, 0, fn);
}

inline bool isPne(const AtomicGame& g, const Profile& p, double tol = 1e-9) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double c = cost(g, p, i);
    for (std::size_t s = 0; s < g.players()[i].strategies.size(); ++s) {
      Profile q = p;
      q[i] = s;
      if (cost(g, q, i) < c * (1.0 - tol)) return false;
    }
  }
  return true;
}

inline double optNsw(const AtomicGame& g) {
  double best = INFINITY;
  forAll(g, [&](const Profile& p) { best = std::min(best, nsw(g, p)); });
  return best;
}

inline double worstPneNsw(const AtomicGame& g) {
  double worst = 0.0;
  forAll(g, [&](const Profile& p) {
    if (oracle::isPne(g, p)) worst = std::max(worst, nsw(g, p));
  });
  return worst;
}

}  // namespace oracle
