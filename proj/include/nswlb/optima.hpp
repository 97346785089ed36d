#pragma once

#include <nswlb/errors.hpp>
#include <nswlb/game.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace nswlb {

// delta(j, t) = g_j(t) - g_j(t-1) with g_j(k) = k ln l_j(k) and g_j(0) = 0.
class SlotCostTable {
 public:
  SlotCostTable(const AtomicGame& game, std::size_t slots) : slots_(slots) {
    delta_.resize(game.resourceCount());
    for (std::size_t j = 0; j < game.resourceCount(); ++j) {
      const auto& lat = game.resources()[j].latency;
      auto& row = delta_[j];
      row.reserve(slots);
      double prev = 0.0;
      for (std::size_t t = 1; t <= slots; ++t) {
        const double g = static_cast<double>(t) * lat.log(static_cast<double>(t));
        row.push_back(g - prev);
        prev = g;
      }
      if (!lat.quasiLogConvex()) continue;
      for (std::size_t t = 1; t < row.size(); ++t)
        if (row[t] < row[t - 1] - 1e-12 * std::max(1.0, std::abs(row[t - 1])))
          throw ConvexityViolation("slot costs of resource " + game.resources()[j].id + " decrease at slot " +
                                   std::to_string(t + 1) + " although its latency is flagged quasi-log-convex");
    }
  }

  double operator()(std::size_t resource, std::size_t slot) const { return delta_[resource][slot - 1]; }
  std::size_t slots() const { return slots_; }

 private:
  std::size_t slots_;
  std::vector<std::vector<double>> delta_;
};

struct OptResult {
  Profile profile;
  LogNsw value;
  bool bruteForceFallback = false;
  // Sum of matched slot prices, unshifted; equals value.value * W for the matching method.
  double matchingCost = 0.0;
};

inline OptResult bruteForceOpt(const AtomicGame& game, std::size_t cap = kDefaultProfileCap) {
  OptResult best;
  double bestValue = 0.0;
  bool first = true;
  forEachProfile(game, cap, [&](const Profile& p) {
    const auto v = logNsw(game, p);
    if (first || v.value < bestValue - 1e-12 * std::max(1.0, std::abs(bestValue))) {
      first = false;
      bestValue = v.value;
      best.profile = p;
      best.value = v;
    }
  });
  return best;
}

namespace detail {

// Successive shortest paths with Dijkstra on reduced costs; arc costs must start non-negative.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes) : graph_(nodes) {}

  std::size_t addArc(std::size_t from, std::size_t to, int cap, double cost) {
    graph_[from].push_back({to, graph_[to].size(), cap, cost});
    graph_[to].push_back({from, graph_[from].size() - 1, 0, -cost});
    return graph_[from].size() - 1;
  }

  // Returns (flow, cost).
  std::pair<int, double> run(std::size_t s, std::size_t t, int want) {
    const std::size_t n = graph_.size();
    std::vector<double> pot(n, 0.0), dist(n);
    std::vector<std::size_t> prevNode(n), prevArc(n);
    int flow = 0;
    double cost = 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    using Item = std::pair<double, std::size_t>;
    while (flow < want) {
      std::fill(dist.begin(), dist.end(), inf);
      dist[s] = 0.0;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      pq.push({0.0, s});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (std::size_t a = 0; a < graph_[u].size(); ++a) {
          const auto& e = graph_[u][a];
          if (e.cap <= 0) continue;
          // rounding can leave reduced costs a hair below zero
          const double nd = d + std::max(0.0, e.cost + pot[u] - pot[e.to]);
          if (nd < dist[e.to]) {
            dist[e.to] = nd;
            prevNode[e.to] = u;
            prevArc[e.to] = a;
            pq.push({nd, e.to});
          }
        }
      }
      if (dist[t] == inf) break;
      for (std::size_t v = 0; v < n; ++v)
        if (dist[v] < inf) pot[v] += dist[v];
      int push = want - flow;
      for (std::size_t v = t; v != s; v = prevNode[v]) push = std::min(push, graph_[prevNode[v]][prevArc[v]].cap);
      for (std::size_t v = t; v != s; v = prevNode[v]) {
        auto& e = graph_[prevNode[v]][prevArc[v]];
        e.cap -= push;
        graph_[v][e.rev].cap += push;
        cost += push * e.cost;
      }
      flow += push;
    }
    return {flow, cost};
  }

  int residual(std::size_t from, std::size_t arc) const { return graph_[from][arc].cap; }
  std::size_t arcTarget(std::size_t from, std::size_t arc) const { return graph_[from][arc].to; }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    int cap;
    double cost;
  };
  std::vector<std::vector<Arc>> graph_;
};

}  // namespace detail

// Exact optimum of an unweighted load balancing game: players are matched to (resource, slot) pairs.
inline OptResult unweightedOptMatching(const AtomicGame& game) {
  if (game.mode() != GameMode::loadBalancing) throw ValidationError("matching optimum needs load balancing mode");
  if (!game.unweighted()) throw ValidationError("matching optimum needs unit weights");
  for (const auto& r : game.resources())
    if (!r.latency.quasiLogConvex()) {
      auto res = bruteForceOpt(game);
      res.bruteForceFallback = true;
      return res;
    }

  const std::size_t n = game.playerCount();
  const std::size_t m = game.resourceCount();
  if (n == 0) return {};
  std::vector<std::size_t> admitting(m, 0);
  for (const auto& p : game.players())
    for (const auto& s : p.strategies) ++admitting[s.front()];
  const SlotCostTable table(game, n);

  // node layout: source, players, slots, sink
  std::vector<std::size_t> slotBase(m, 0);
  std::size_t slotCount = 0;
  for (std::size_t j = 0; j < m; ++j) {
    slotBase[j] = slotCount;
    slotCount += std::min(admitting[j], n);
  }
  const std::size_t source = 0, firstPlayer = 1, firstSlot = 1 + n, sink = 1 + n + slotCount;
  detail::MinCostFlow mcf(sink + 1);

  double shift = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t t = 1; t <= std::min(admitting[j], n); ++t) shift = std::min(shift, table(j, t));

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> playerArcs(n);  // (arc, strategy)
  for (std::size_t i = 0; i < n; ++i) {
    mcf.addArc(source, firstPlayer + i, 1, 0.0);
    const auto& strategies = game.players()[i].strategies;
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      const std::size_t j = strategies[s].front();
      for (std::size_t t = 1; t <= std::min(admitting[j], n); ++t)
        playerArcs[i].push_back({mcf.addArc(firstPlayer + i, firstSlot + slotBase[j] + t - 1, 1, table(j, t) - shift), s});
    }
  }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t t = 1; t <= std::min(admitting[j], n); ++t) mcf.addArc(firstSlot + slotBase[j] + t - 1, sink, 1, 0.0);

  auto [flow, cost] = mcf.run(source, sink, static_cast<int>(n));
  if (flow != static_cast<int>(n)) throw InternalAnomaly("matching left players unassigned");

  OptResult res;
  res.profile.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (auto [arc, s] : playerArcs[i])
      if (mcf.residual(firstPlayer + i, arc) == 0) {
        res.profile[i] = s;
        found = true;
        break;
      }
    if (!found) throw InternalAnomaly("matched player without a slot");
  }
  res.value = logNsw(game, res.profile);
  res.matchingCost = cost + shift * static_cast<double>(n);
  const double direct = res.value.value * res.value.totalWeight;
  if (std::abs(res.matchingCost - direct) > 1e-9 * std::max(1.0, std::abs(direct)))
    throw InternalAnomaly("matching cost disagrees with the emitted profile");
  return res;
}

}  // namespace nswlb
