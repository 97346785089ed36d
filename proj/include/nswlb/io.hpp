#pragma once

#include <nswlb/errors.hpp>
#include <nswlb/game.hpp>
#include <nswlb/generators.hpp>
#include <nswlb/online_greedy.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nswlb::io {

using nlohmann::json;

inline json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline LatencyFunction latencyFromJson(const json& j) {
  if (j.is_string()) return LatencyFunction::parse(j.get<std::string>());
  const auto family = detail::get<std::string>(j, "family");
  if (family == "poly") return LatencyFunction::polynomial(detail::get<std::vector<double>>(j, "coeffs"));
  if (family == "const") return LatencyFunction::constant(detail::get<double>(j, "value"));
  if (family == "scaled")
    return LatencyFunction::scaled(detail::get<double>(j, "a"), detail::get<double>(j, "b"),
                                   latencyFromJson(detail::field(j, "inner")));
  throw ValidationError("unknown latency family '" + family + "'");
}

inline json latencyToJson(const LatencyFunction& f) {
  if (auto c = f.constantValue()) return {{"family", "const"}, {"value", *c}};
  if (auto s = f.scaledView()) return {{"family", "scaled"}, {"a", s->a}, {"b", s->b}, {"inner", latencyToJson(*s->inner)}};
  if (f.family() == LatencyFunction::Family::polynomial) return {{"family", "poly"}, {"coeffs", f.coefficients()}};
  throw ValidationError("latency " + f.describe() + " has no JSON form");
}

inline std::vector<Resource> resourcesFromJson(const json& j) {
  std::vector<Resource> out;
  for (const auto& r : detail::field(j, "resources"))
    out.push_back({detail::get<std::string>(r, "id"), latencyFromJson(detail::field(r, "latency"))});
  return out;
}

inline json resourcesToJson(const std::vector<Resource>& resources) {
  json arr = json::array();
  for (const auto& r : resources) arr.push_back({{"id", r.id}, {"latency", latencyToJson(r.latency)}});
  return arr;
}

inline AtomicGame gameFromJson(const json& j) {
  auto resources = resourcesFromJson(j);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < resources.size(); ++r) index.emplace(resources[r].id, r);
  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw ValidationError("unknown resource id " + id);
    return it->second;
  };
  GameMode mode = GameMode::loadBalancing;
  if (j.contains("mode")) {
    const auto m = detail::get<std::string>(j, "mode");
    if (m == "congestion")
      mode = GameMode::congestion;
    else if (m != "loadBalancing")
      throw ValidationError("unknown mode '" + m + "'");
  }
  std::vector<Player> players;
  for (const auto& p : detail::field(j, "players")) {
    Player player{p.contains("weight") ? detail::get<double>(p, "weight") : 1.0, {}};
    for (const auto& s : detail::field(p, "strategies")) {
      Strategy strategy;
      for (const auto& id : s) strategy.push_back(lookup(id.get<std::string>()));
      player.strategies.push_back(std::move(strategy));
    }
    players.push_back(std::move(player));
  }
  return AtomicGame(std::move(resources), std::move(players), mode);
}

inline json gameToJson(const AtomicGame& game) {
  json players = json::array();
  for (const auto& p : game.players()) {
    json strategies = json::array();
    for (const auto& s : p.strategies) {
      json ids = json::array();
      for (auto r : s) ids.push_back(game.resources()[r].id);
      strategies.push_back(std::move(ids));
    }
    players.push_back({{"weight", p.weight}, {"strategies", std::move(strategies)}});
  }
  return {{"mode", game.mode() == GameMode::congestion ? "congestion" : "loadBalancing"},
          {"resources", resourcesToJson(game.resources())},
          {"players", std::move(players)}};
}

inline OnlineInstance onlineFromJson(const json& j) {
  auto game = gameFromJson(j);
  auto order = j.contains("arrivalOrder") ? detail::get<std::vector<std::size_t>>(j, "arrivalOrder")
                                          : identityOrder(game.playerCount());
  OnlineInstance inst{std::move(game), std::move(order)};
  validateOnline(inst);
  return inst;
}

inline json onlineToJson(const OnlineInstance& inst) {
  auto j = gameToJson(inst.game);
  j["arrivalOrder"] = inst.arrivalOrder;
  return j;
}

inline NonAtomicGame nonAtomicFromJson(const json& j) {
  auto resources = resourcesFromJson(j);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < resources.size(); ++r) index.emplace(resources[r].id, r);
  std::vector<PlayerType> types;
  for (const auto& t : detail::field(j, "types")) {
    PlayerType type{detail::get<double>(t, "rate"), {}};
    for (const auto& id : detail::field(t, "resources")) {
      auto it = index.find(id.get<std::string>());
      if (it == index.end()) throw ValidationError("unknown resource id " + id.get<std::string>());
      type.admissible.push_back(it->second);
    }
    types.push_back(std::move(type));
  }
  return NonAtomicGame(std::move(resources), std::move(types));
}

inline json nonAtomicToJson(const NonAtomicGame& game) {
  json types = json::array();
  for (const auto& t : game.types()) {
    json ids = json::array();
    for (auto r : t.admissible) ids.push_back(game.resources()[r].id);
    types.push_back({{"rate", t.rate}, {"resources", std::move(ids)}});
  }
  return {{"resources", resourcesToJson(game.resources())}, {"types", std::move(types)}};
}

inline Profile profileFromJson(const json& j) {
  if (j.is_array()) return j.get<Profile>();
  return detail::get<Profile>(j, "profile");
}

inline json provenanceToJson(const Provenance& p) {
  json params = json::object();
  for (const auto& [k, v] : p.params) params[k] = v;
  return {{"construction", p.construction}, {"params", std::move(params)}};
}

inline json generatedToJson(const GeneratedGame& g) {
  auto j = gameToJson(g.game);
  j["metadata"] = {{"provenance", provenanceToJson(g.provenance)},
                   {"predictedRatio", g.predictedRatio},
                   {"designatedEquilibrium", g.equilibrium},
                   {"designatedOpt", g.optCandidate}};
  return j;
}

inline json generatedToJson(const GeneratedOnline& g) {
  auto j = onlineToJson(g.instance);
  j["metadata"] = {{"provenance", provenanceToJson(g.provenance)},
                   {"predictedRatio", g.predictedRatio},
                   {"designatedGreedy", g.greedy},
                   {"designatedOpt", g.optCandidate}};
  return j;
}

inline json generatedToJson(const GeneratedFlow& g) {
  auto j = nonAtomicToJson(g.game);
  j["metadata"] = {{"provenance", provenanceToJson(g.provenance)},
                   {"predictedRatio", g.predictedRatio},
                   {"designatedEquilibrium", g.equilibrium.share},
                   {"designatedOpt", g.optCandidate.share}};
  return j;
}

}  // namespace nswlb::io
