#pragma once

#include <nswlb/equilibria.hpp>
#include <nswlb/errors.hpp>
#include <nswlb/game.hpp>
#include <nswlb/nonatomic.hpp>
#include <nswlb/online_greedy.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace nswlb {

struct Provenance {
  std::string construction;
  std::vector<std::pair<std::string, std::string>> params;
};

struct GeneratedGame {
  AtomicGame game;
  Profile equilibrium;
  Profile optCandidate;
  double predictedRatio;
  Provenance provenance;
};

struct GeneratedOnline {
  OnlineInstance instance;
  Profile greedy;
  Profile optCandidate;
  double predictedRatio;
  Provenance provenance;
};

struct GeneratedFlow {
  NonAtomicGame game;
  FlowProfile equilibrium;
  FlowProfile optCandidate;
  double predictedRatio;
  Provenance provenance;
};

enum class WeightedVariant { restrictedStrategies, symmetric };

inline constexpr double kMaxGeneratedPlayers = 1e6;

namespace detail {

// e * ln f(x), with the convention f(x)^0 = 1 so f is never evaluated at a zero exponent.
inline double powLog(const LatencyFunction& f, double x, double e) { return e == 0.0 ? 0.0 : e * f.log(x); }

inline std::string num(double v) { return formatDouble(v); }

inline void requireRange(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

// Exponent sums of the weighted and greedy constructions: A = sum_{j=1}^{m-2} k^j,
// B = sum_{j=m-1}^{2m-2} h^{j+1-m} k^{m-1}, C = h^m k^{m-1}, with 0^0 = 1.
struct ChainSums {
  double a = 0.0, b = 0.0, c = 0.0;
};

inline ChainSums chainSums(int m, double k, double h) {
  ChainSums s;
  for (int j = 1; j <= m - 2; ++j) s.a += std::pow(k, j);
  const double km = std::pow(k, m - 1);
  for (int j = m - 1; j <= 2 * m - 2; ++j) s.b += (j + 1 - m == 0 ? 1.0 : std::pow(h, j + 1 - m)) * km;
  s.c = std::pow(h, m) * km;
  return s;
}

}  // namespace detail

inline double measuredRatio(const GeneratedGame& g) {
  return std::exp(logNsw(g.game, g.equilibrium).value - logNsw(g.game, g.optCandidate).value);
}

inline double measuredRatio(const GeneratedOnline& g) {
  return std::exp(logNsw(g.instance.game, g.greedy).value - logNsw(g.instance.game, g.optCandidate).value);
}

inline double measuredRatio(const GeneratedFlow& g) { return nonatomicRatio(g.game, g.equilibrium, g.optCandidate); }

inline bool checkPne(const GeneratedGame& g) { return isPne(g.game, g.equilibrium); }

inline GeneratedGame genWeightedLB(int m, int s, double k, double h, const LatencyFunction& f, const LatencyFunction& g,
                                   WeightedVariant variant = WeightedVariant::restrictedStrategies) {
  detail::requireRange(m >= 3, "genWeightedLB needs m >= 3");
  detail::requireRange(s >= 1, "genWeightedLB needs s >= 1");
  detail::requireRange(k >= 1.0 && std::isfinite(k), "genWeightedLB needs k >= 1");
  detail::requireRange(h >= 0.0 && h < 1.0, "genWeightedLB needs 0 <= h < 1");
  // h = 0 keeps resource groups R_1..R_m and player groups N_1..N_{m-1}
  const int resourceGroups = h > 0.0 ? 2 * m : m;
  const int playerGroups = resourceGroups - 1;
  double totalPlayers = 0.0;
  for (int j = 1; j <= playerGroups; ++j) totalPlayers += std::pow(static_cast<double>(s), j);
  if (totalPlayers > kMaxGeneratedPlayers)
    throw InstanceTooLarge("genWeightedLB would create " + detail::num(totalPlayers) + " players");

  const double ls = std::log(static_cast<double>(s));
  const double fk = f.log(k), fk1 = f.log(k + 1.0), f1 = f.log(1.0);
  const double gh = h > 0.0 ? g.log(h) : 0.0, gh1 = g.log(h + 1.0), g1 = g.log(1.0);
  auto logBeta = [&](int j) {
    if (j <= m - 1) return (j - 1) * (ls - std::log(k));
    const double hPart = j == m ? 0.0 : (j - m) * (ls - std::log(h));
    return hPart + (m - 1) * (ls - std::log(k));
  };
  auto logAlpha = [&](int j) {
    if (j <= m - 1) return (j - 1) * (fk - fk1);
    const double tail = (fk - gh1) + (m - 2) * (fk - fk1);
    if (j <= 2 * m - 1) return (j == m ? 0.0 : (j - m) * (gh - gh1)) + tail;
    return (gh - g1) + (m - 1) * (gh - gh1) + tail;
  };

  std::vector<Resource> resources;
  std::vector<std::vector<std::size_t>> group(resourceGroups + 1);
  for (int j = 1; j <= resourceGroups; ++j) {
    const auto lat = LatencyFunction::scaled(std::exp(logAlpha(j)), std::exp(logBeta(j)), j <= m - 1 ? f : g);
    const auto size = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(s), j - 1)));
    for (std::size_t q = 0; q < size; ++q) {
      group[j].push_back(resources.size());
      resources.push_back({"R" + std::to_string(j) + "_" + std::to_string(q), lat});
    }
  }
  std::vector<std::size_t> everything(resources.size());
  for (std::size_t r = 0; r < everything.size(); ++r) everything[r] = r;

  std::vector<Player> players;
  Profile sigma, sigmaStar;
  for (int j = 1; j <= playerGroups; ++j) {
    const double w = std::exp(-logBeta(j + 1));
    const auto size = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(s), j)));
    Player proto{w, {}};
    const auto& own = group[j];
    const auto& next = group[j + 1];
    if (variant == WeightedVariant::restrictedStrategies) {
      for (auto r : own) proto.strategies.push_back({r});
      for (auto r : next) proto.strategies.push_back({r});
    } else {
      for (auto r : everything) proto.strategies.push_back({r});
    }
    for (std::size_t q = 0; q < size; ++q) {
      players.push_back(proto);
      const std::size_t home = own[q / static_cast<std::size_t>(s)], away = next[q];
      if (variant == WeightedVariant::restrictedStrategies) {
        sigma.push_back(q / static_cast<std::size_t>(s));
        sigmaStar.push_back(own.size() + q);
      } else {
        sigma.push_back(home);
        sigmaStar.push_back(away);
      }
    }
  }

  const auto sums = detail::chainSums(m, k, h);
  const double logRatio = (sums.a * (fk1 - f1) + sums.b * (gh1 - g1)) / (sums.a + sums.b + sums.c);
  Provenance prov{"weightedLB",
                  {{"m", std::to_string(m)},
                   {"s", std::to_string(s)},
                   {"k", detail::num(k)},
                   {"h", detail::num(h)},
                   {"f", f.describe()},
                   {"g", g.describe()},
                   {"variant", variant == WeightedVariant::symmetric ? "symmetric" : "restricted"}}};
  return {AtomicGame(std::move(resources), std::move(players)), std::move(sigma), std::move(sigmaStar),
          std::exp(logRatio), std::move(prov)};
}

// Smallest s in [1, sMax] for which the symmetric variant's designated profile is a PNE.
inline std::optional<int> smallestPneS(int m, double k, double h, const LatencyFunction& f, const LatencyFunction& g,
                                       int sMax) {
  for (int s = 1; s <= sMax; ++s)
    if (checkPne(genWeightedLB(m, s, k, h, f, g, WeightedVariant::symmetric))) return s;
  return std::nullopt;
}

inline GeneratedGame genIdenticalResourcesLB(int m, int p = 1) {
  const auto mono = LatencyFunction::monomial(p);
  auto gen = genWeightedLB(m, 2, 1.0, 0.0, mono, mono);
  gen.provenance = {"identicalResourcesLB", {{"m", std::to_string(m)}, {"p", std::to_string(p)}}};
  return gen;
}

inline GeneratedGame genUnweightedLB(int m, int k, int o, const LatencyFunction& f) {
  detail::requireRange(m >= 1, "genUnweightedLB needs m >= 1");
  detail::requireRange(k >= 1 && o >= 1 && o <= k, "genUnweightedLB needs 1 <= o <= k");
  if (static_cast<double>(m) * k > kMaxGeneratedPlayers) throw InstanceTooLarge("genUnweightedLB is too large");
  const double fk = f.log(k), fk1 = f.log(k + 1.0), f1 = f.log(1.0), fo = f.log(o);

  std::vector<Resource> resources;
  std::vector<std::vector<std::size_t>> group(m + 1);
  for (int j = 1; j <= m; ++j) {
    const int extra = j < m ? k - o : k;
    for (int h = 0; h <= extra; ++h) {
      const double logAlpha = (j - 1) * (fk - fk1) + (h == 0 ? 0.0 : fk - f1);
      group[j].push_back(resources.size());
      resources.push_back({"r" + std::to_string(j) + "_" + std::to_string(h),
                           LatencyFunction::scaled(std::exp(logAlpha), 1.0, f)});
    }
  }
  std::vector<Player> players;
  Profile sigma, sigmaStar;
  for (int j = 1; j <= m; ++j) {
    Player proto{1.0, {}};
    for (auto r : group[j]) proto.strategies.push_back({r});
    if (j < m) proto.strategies.push_back({group[j + 1].front()});
    for (int q = 0; q < k; ++q) {
      players.push_back(proto);
      sigma.push_back(0);
      if (j < m)
        sigmaStar.push_back(q < o ? group[j].size() : static_cast<std::size_t>(q - o + 1));
      else
        sigmaStar.push_back(static_cast<std::size_t>(q + 1));
    }
  }
  const double logRatio = (fk1 - fo) * o * (m - 1) / (static_cast<double>(k) * m);
  Provenance prov{"unweightedLB",
                  {{"m", std::to_string(m)}, {"k", std::to_string(k)}, {"o", std::to_string(o)}, {"f", f.describe()}}};
  return {AtomicGame(std::move(resources), std::move(players)), std::move(sigma), std::move(sigmaStar),
          std::exp(logRatio), std::move(prov)};
}

inline GeneratedFlow genNonAtomic(double k, double o, const LatencyFunction& f) {
  detail::requireRange(std::isfinite(k) && o > 0.0 && k >= o, "genNonAtomic needs k >= o > 0");
  std::vector<Resource> resources{{"r1", f}, {"r2", LatencyFunction::constant(f(k))}};
  NonAtomicGame game(std::move(resources), {{k, {0, 1}}});
  const double logRatio = (f.log(k) - f.log(o)) * o / k;
  Provenance prov{"nonAtomic", {{"k", detail::num(k)}, {"o", detail::num(o)}, {"f", f.describe()}}};
  return {std::move(game), FlowProfile{{{k, 0.0}}}, FlowProfile{{{o, k - o}}}, std::exp(logRatio), std::move(prov)};
}

inline GeneratedOnline genOnlineGreedyLB(int m, double k, double h, const LatencyFunction& f, const LatencyFunction& g) {
  detail::requireRange(m >= 3, "genOnlineGreedyLB needs m >= 3");
  detail::requireRange(k >= 1.0 && std::isfinite(k), "genOnlineGreedyLB needs k >= 1");
  detail::requireRange(h >= 0.0 && h < 1.0, "genOnlineGreedyLB needs 0 <= h < 1");
  const int resourceCount = h > 0.0 ? 2 * m : m;
  const int clientCount = resourceCount - 1;

  const double fk = f.log(k), fk1 = f.log(k + 1.0), f1 = f.log(1.0);
  const double gh = h > 0.0 ? g.log(h) : 0.0, gh1 = g.log(h + 1.0), g1 = g.log(1.0);
  const double ghh = detail::powLog(g, h, h);  // h ln g(h), zero at h = 0
  auto logBeta = [&](int j) {
    if (j <= m - 1) return -(j - 1) * std::log(k);
    return (j == m ? 0.0 : -(j - m) * std::log(h)) - (m - 1) * std::log(k);
  };
  auto logAlpha = [&](int j) {
    const double fRatio = (k + 1.0) * (fk - fk1);
    if (j <= m - 1) return (j - 1) * fRatio;
    const double gRatio = (h + 1.0) * (gh - gh1);
    const double tail = (fk + ghh - (h + 1.0) * gh1) + (m - 2) * fRatio;
    if (j <= 2 * m - 1) return (j == m ? 0.0 : (j - m) * gRatio) + tail;
    return (gh - g1) + (m - 1) * gRatio + tail;
  };

  std::vector<Resource> resources;
  for (int j = 1; j <= resourceCount; ++j)
    resources.push_back({"r" + std::to_string(j), LatencyFunction::scaled(std::exp(logAlpha(j)), std::exp(logBeta(j)),
                                                                          j <= m - 1 ? f : g)});
  std::vector<Player> players;
  for (int j = 1; j <= clientCount; ++j)
    players.push_back({std::exp(-logBeta(j + 1)),
                       {{static_cast<std::size_t>(j - 1)}, {static_cast<std::size_t>(j)}}});
  std::vector<std::size_t> order;
  for (int j = clientCount; j >= 1; --j) order.push_back(static_cast<std::size_t>(j - 1));

  const auto sums = detail::chainSums(m, k, h);
  const double fTerm = (k + 1.0) * fk1 - k * fk - f1;
  const double gTerm = (h + 1.0) * gh1 - ghh - g1;
  const double logRatio = (sums.a * fTerm + sums.b * gTerm) / (sums.a + sums.b + sums.c);
  const auto n = static_cast<std::size_t>(clientCount);
  Provenance prov{"onlineGreedyLB",
                  {{"m", std::to_string(m)}, {"k", detail::num(k)}, {"h", detail::num(h)}, {"f", f.describe()},
                   {"g", g.describe()}}};
  return {OnlineInstance{AtomicGame(std::move(resources), std::move(players)), std::move(order)}, Profile(n, 0),
          Profile(n, 1), std::exp(logRatio), std::move(prov)};
}

// Closed-form greedy/opt ratio of the recursive instance, counting one copy of the top-level instance.
inline double universalPredictedRatio(int m, int p) {
  if (m <= 0) return 1.0;
  double numSigma = 0.0, numStar = 0.0, weight = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double copies = i == m ? 1.0 : std::ldexp(1.0, m - i - 1);
    const double load = std::ldexp(1.0, i) - 1.0;
    numSigma += copies * load * p * std::log(load);
    for (int j = 1; j <= i; ++j) numStar += copies * std::ldexp(1.0, j - 1) * p * (j - 1) * std::log(2.0);
    weight += copies * load;
  }
  return std::exp((numSigma - numStar) / weight);
}

inline GeneratedOnline genOnlineUniversal(int m, int p) {
  detail::requireRange(m >= 0 && m <= 16, "genOnlineUniversal needs 0 <= m <= 16");
  detail::requireRange(p >= 0, "genOnlineUniversal needs p >= 0");
  const auto lat = LatencyFunction::monomial(p);
  std::vector<Resource> resources;
  std::vector<Player> players;
  std::vector<std::tuple<int, std::size_t, double, std::size_t>> keys;  // (level, sub-instance, weight, client)
  std::size_t subInstances = 0;

  // returns the fundamental resource of a fresh copy of I(level)
  auto build = [&](auto&& self, int level) -> std::size_t {
    std::vector<std::size_t> fundamentals;
    for (int i = 1; i <= level; ++i) fundamentals.push_back(self(self, i - 1));
    const std::size_t r = resources.size();
    resources.push_back({"u" + std::to_string(r), lat});
    const std::size_t id = subInstances++;
    for (int i = 1; i <= level; ++i) {
      const double w = std::ldexp(1.0, i - 1);
      keys.emplace_back(level, id, w, players.size());
      // own fundamental resource first: with first-listed tie-breaking greedy picks it
      players.push_back({w, {{r}, {fundamentals[static_cast<std::size_t>(i - 1)]}}});
    }
    return r;
  };
  build(build, m);
  std::sort(keys.begin(), keys.end());
  std::vector<std::size_t> order;
  for (const auto& key : keys) order.push_back(std::get<3>(key));
  const std::size_t n = players.size();
  Provenance prov{"onlineUniversal", {{"m", std::to_string(m)}, {"p", std::to_string(p)}}};
  return {OnlineInstance{AtomicGame(std::move(resources), std::move(players)), std::move(order)}, Profile(n, 0),
          Profile(n, 1), universalPredictedRatio(m, p), std::move(prov)};
}

// Linear congestion game whose NSW price of anarchy grows like n^{1-eps}.
inline GeneratedGame genLinearCG(int n, double eps) {
  detail::requireRange(n >= 2, "genLinearCG needs n >= 2");
  detail::requireRange(eps > 0.0 && eps < 0.5, "genLinearCG needs 0 < eps < 1/2");
  if (n > kMaxGeneratedPlayers) throw InstanceTooLarge("genLinearCG is too large");
  // n * eps is rounded before the ceiling: 10 * 0.3 is 3.0000000000000004 in binary
  const int m = static_cast<int>(std::ceil(n * eps - 1e-9));
  const int rest = n - m;
  // third-group slope m(n-m) makes the equal-cost swap argument hold for N_2
  const double slopes[3] = {m + 1.0, 1.0, static_cast<double>(m) * rest};
  std::vector<Resource> resources;
  for (int grp = 0; grp < 3; ++grp) {
    const int size = grp < 2 ? rest : m;
    const auto lat = LatencyFunction::monomial(1, slopes[grp]);
    for (int q = 0; q < size; ++q) resources.push_back({"R" + std::to_string(grp + 1) + "_" + std::to_string(q), lat});
  }
  const auto r1 = [](int q) { return static_cast<std::size_t>(q); };
  const auto r2 = [rest](int q) { return static_cast<std::size_t>(rest + q); };
  const auto r3 = [rest](int q) { return static_cast<std::size_t>(2 * rest + q); };
  Strategy allR2;
  for (int q = 0; q < rest; ++q) allR2.push_back(r2(q));
  std::vector<Player> players;
  for (int q = 0; q < rest; ++q) players.push_back({1.0, {{r1(q)}, {r2(q)}}});
  for (int q = 0; q < m; ++q) players.push_back({1.0, {allR2, {r3(q)}}});
  const auto total = static_cast<std::size_t>(n);
  const double logRatio = std::log(m + 1.0) * rest / n;
  Provenance prov{"linearCG", {{"n", std::to_string(n)}, {"eps", detail::num(eps)}, {"m", std::to_string(m)}}};
  return {AtomicGame(std::move(resources), std::move(players), GameMode::congestion), Profile(total, 0),
          Profile(total, 1), std::exp(logRatio), std::move(prov)};
}

}  // namespace nswlb
