#pragma once

#include <nswlb/errors.hpp>
#include <nswlb/latency.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nswlb {

struct Resource {
  std::string id;
  LatencyFunction latency;
};

enum class GameMode { loadBalancing, congestion };

using Strategy = std::vector<std::size_t>;  // resource indices

struct Player {
  double weight = 1.0;
  std::vector<Strategy> strategies;
};

// Relative tolerance used for every equality-type comparison.
inline constexpr double kRelTol = 1e-9;

inline bool nearlyEqual(double a, double b, double tol = kRelTol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

class AtomicGame {
 public:
  AtomicGame(std::vector<Resource> resources, std::vector<Player> players, GameMode mode = GameMode::loadBalancing)
      : resources_(std::move(resources)), players_(std::move(players)), mode_(mode) {
    for (std::size_t j = 0; j < resources_.size(); ++j)
      if (!index_.emplace(resources_[j].id, j).second) throw ValidationError("duplicate resource id " + resources_[j].id);
    for (std::size_t i = 0; i < players_.size(); ++i) {
      const auto& p = players_[i];
      if (!(p.weight > 0.0) || !std::isfinite(p.weight))
        throw ValidationError("player " + std::to_string(i) + " needs a finite positive weight");
      if (p.strategies.empty()) throw ValidationError("player " + std::to_string(i) + " has no strategies");
      for (const auto& s : p.strategies) {
        if (s.empty()) throw ValidationError("player " + std::to_string(i) + " has an empty strategy");
        if (mode_ == GameMode::loadBalancing && s.size() != 1)
          throw ValidationError("load balancing strategies must be single resources (player " + std::to_string(i) + ")");
        for (auto r : s)
          if (r >= resources_.size()) throw ValidationError("player " + std::to_string(i) + " references a missing resource");
      }
      totalWeight_ += p.weight;
      unweighted_ = unweighted_ && p.weight == 1.0;
    }
  }

  const std::vector<Resource>& resources() const { return resources_; }
  const std::vector<Player>& players() const { return players_; }
  std::size_t resourceCount() const { return resources_.size(); }
  std::size_t playerCount() const { return players_.size(); }
  GameMode mode() const { return mode_; }
  double totalWeight() const { return totalWeight_; }
  bool unweighted() const { return unweighted_; }

  std::size_t resourceIndex(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown resource id " + id);
    return it->second;
  }

  // Number of pure profiles, saturating at SIZE_MAX.
  std::size_t profileCount() const {
    std::size_t total = 1;
    for (const auto& p : players_) {
      if (total > std::numeric_limits<std::size_t>::max() / p.strategies.size())
        return std::numeric_limits<std::size_t>::max();
      total *= p.strategies.size();
    }
    return total;
  }

 private:
  std::vector<Resource> resources_;
  std::vector<Player> players_;
  GameMode mode_;
  std::unordered_map<std::string, std::size_t> index_;
  double totalWeight_ = 0.0;
  bool unweighted_ = true;
};

// Index into each player's strategy list.
using Profile = std::vector<std::size_t>;

struct LogNsw {
  double value = 0.0;
  double totalWeight = 0.0;
  double nsw() const { return std::exp(value); }
};

inline void validateProfile(const AtomicGame& game, const Profile& profile) {
  if (profile.size() != game.playerCount())
    throw ValidationError("profile has " + std::to_string(profile.size()) + " entries for " +
                          std::to_string(game.playerCount()) + " players");
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (profile[i] >= game.players()[i].strategies.size())
      throw ValidationError("profile index out of range for player " + std::to_string(i));
}

inline std::vector<double> congestion(const AtomicGame& game, const Profile& profile) {
  validateProfile(game, profile);
  std::vector<double> load(game.resourceCount(), 0.0);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& p = game.players()[i];
    for (auto r : p.strategies[profile[i]]) load[r] += p.weight;
  }
  return load;
}

namespace detail {

inline double logLatency(const AtomicGame& game, std::size_t r, double load) {
  const double v = game.resources()[r].latency.log(load);
  if (!(v > -std::numeric_limits<double>::infinity()) || std::isnan(v))
    throw DomainError("non-positive latency on resource " + game.resources()[r].id);
  return v;
}

inline double costFromLoads(const AtomicGame& game, const std::vector<double>& load, const Strategy& s) {
  double c = 0.0;
  for (auto r : s) c += game.resources()[r].latency(load[r]);
  return c;
}

inline double logNswFromLoads(const AtomicGame& game, const Profile& profile, const std::vector<double>& load) {
  double acc = 0.0;
  if (game.mode() == GameMode::loadBalancing) {
    for (std::size_t r = 0; r < load.size(); ++r)
      if (load[r] > 0.0) acc += load[r] * logLatency(game, r, load[r]);
  } else {
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const auto& p = game.players()[i];
      const double c = costFromLoads(game, load, p.strategies[profile[i]]);
      if (!(c > 0.0)) throw DomainError("non-positive cost for player " + std::to_string(i));
      acc += p.weight * std::log(c);
    }
  }
  return acc;
}

}  // namespace detail

inline double playerCost(const AtomicGame& game, const Profile& profile, std::size_t i) {
  const auto load = congestion(game, profile);
  if (i >= game.playerCount()) throw ValidationError("player index out of range");
  return detail::costFromLoads(game, load, game.players()[i].strategies[profile[i]]);
}

// Load balancing: sum_j k_j ln l_j(k_j) / W over used resources.
// Congestion mode: sum_i w_i ln cost_i / W, the same quantity when strategies are singletons.
inline LogNsw logNsw(const AtomicGame& game, const Profile& profile) {
  const auto load = congestion(game, profile);
  const double w = game.totalWeight();
  if (w == 0.0) return {0.0, 0.0};
  return {detail::logNswFromLoads(game, profile, load) / w, w};
}

inline constexpr std::size_t kDefaultProfileCap = 2'000'000;

// Visits every profile in lexicographic order (player 0 most significant).
template <class Fn>
void forEachProfile(const AtomicGame& game, std::size_t cap, Fn&& fn) {
  const std::size_t count = game.profileCount();
  if (count > cap)
    throw InstanceTooLarge("instance has " +
                           (count == std::numeric_limits<std::size_t>::max() ? std::string("more than 2^64")
                                                                             : std::to_string(count)) +
                           " profiles, cap is " + std::to_string(cap));
  Profile profile(game.playerCount(), 0);
  while (true) {
    fn(static_cast<const Profile&>(profile));
    std::size_t i = profile.size();
    while (i > 0) {
      --i;
      if (++profile[i] < game.players()[i].strategies.size()) break;
      profile[i] = 0;
      if (i == 0) return;
    }
    if (profile.empty()) return;
  }
}

// ---- non-atomic games ----

struct PlayerType {
  double rate = 0.0;
  std::vector<std::size_t> admissible;  // resource indices
};

class NonAtomicGame {
 public:
  NonAtomicGame(std::vector<Resource> resources, std::vector<PlayerType> types)
      : resources_(std::move(resources)), types_(std::move(types)) {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t j = 0; j < resources_.size(); ++j)
      if (!seen.emplace(resources_[j].id, j).second) throw ValidationError("duplicate resource id " + resources_[j].id);
    for (std::size_t i = 0; i < types_.size(); ++i) {
      const auto& t = types_[i];
      if (!std::isfinite(t.rate) || t.rate < 0.0) throw ValidationError("type " + std::to_string(i) + " needs a finite rate >= 0");
      if (t.admissible.empty()) throw ValidationError("type " + std::to_string(i) + " has no admissible resources");
      for (auto r : t.admissible)
        if (r >= resources_.size()) throw ValidationError("type " + std::to_string(i) + " references a missing resource");
      totalRate_ += t.rate;
    }
  }

  const std::vector<Resource>& resources() const { return resources_; }
  const std::vector<PlayerType>& types() const { return types_; }
  std::size_t resourceCount() const { return resources_.size(); }
  double totalRate() const { return totalRate_; }

 private:
  std::vector<Resource> resources_;
  std::vector<PlayerType> types_;
  double totalRate_ = 0.0;
};

// share[i][a] is the mass of type i on its a-th admissible resource.
struct FlowProfile {
  std::vector<std::vector<double>> share;
};

inline void validateFlow(const NonAtomicGame& game, const FlowProfile& flow) {
  if (flow.share.size() != game.types().size()) throw ValidationError("flow needs one row per type");
  for (std::size_t i = 0; i < flow.share.size(); ++i) {
    const auto& t = game.types()[i];
    if (flow.share[i].size() != t.admissible.size())
      throw ValidationError("flow row " + std::to_string(i) + " must match the admissible set");
    double sum = 0.0;
    for (double x : flow.share[i]) {
      if (!std::isfinite(x) || x < 0.0) throw ValidationError("flow entries must be finite and >= 0");
      sum += x;
    }
    if (std::abs(sum - t.rate) > kRelTol * std::max(1.0, t.rate))
      throw ValidationError("flow row " + std::to_string(i) + " does not sum to the type rate");
  }
}

inline std::vector<double> flowLoads(const NonAtomicGame& game, const FlowProfile& flow) {
  std::vector<double> load(game.resourceCount(), 0.0);
  for (std::size_t i = 0; i < flow.share.size(); ++i)
    for (std::size_t a = 0; a < flow.share[i].size(); ++a) load[game.types()[i].admissible[a]] += flow.share[i][a];
  return load;
}

inline LogNsw logNswFlow(const NonAtomicGame& game, const FlowProfile& flow) {
  validateFlow(game, flow);
  const auto load = flowLoads(game, flow);
  double acc = 0.0;
  for (std::size_t r = 0; r < load.size(); ++r) {
    if (load[r] <= 0.0) continue;
    const double v = game.resources()[r].latency.log(load[r]);
    if (!(v > -std::numeric_limits<double>::infinity()) || std::isnan(v))
      throw DomainError("non-positive latency on resource " + game.resources()[r].id);
    acc += load[r] * v;
  }
  const double w = game.totalRate();
  if (w == 0.0) return {0.0, 0.0};
  return {acc / w, w};
}

}  // namespace nswlb
