#pragma once

#include <nswlb/bounds.hpp>
#include <nswlb/equilibria.hpp>
#include <nswlb/errors.hpp>
#include <nswlb/generators.hpp>
#include <nswlb/io.hpp>
#include <nswlb/nonatomic.hpp>
#include <nswlb/online_greedy.hpp>
#include <nswlb/random_instances.hpp>

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace nswlb::experiment {

using nlohmann::json;

struct Row {
  std::string family;
  std::string params;
  std::size_t players = 0;
  std::size_t resources = 0;
  std::optional<double> predicted;
  double measured = 0.0;
  std::optional<double> bound;
  double absErr = 0.0;
  bool pass = false;
};

inline constexpr const char* kCsvHeader = "family,params,n,m_resources,predicted_ratio,measured_ratio,bound,abs_err,pass";

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csvQuote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string joinParams(const Provenance& p) {
  std::string out;
  for (const auto& [k, v] : p.params) out += (out.empty() ? "" : ";") + k + "=" + v;
  return out;
}

template <class T>
T opt(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline LatencyFunction latencyParam(const json& j, const char* key, const char* fallback) {
  return j.contains(key) ? io::latencyFromJson(j.at(key)) : LatencyFunction::parse(fallback);
}

// Polynomial-degree ceiling, or nothing when the degree is unknown.
inline std::optional<double> degreeBound(int degree, double base) {
  if (degree < 0) return std::nullopt;
  return std::pow(base, degree);
}

inline bool within(double measured, double predicted, double tol) {
  return std::abs(measured - predicted) <= tol * std::max(1.0, std::abs(predicted));
}

inline Row closedFormRow(const std::string& family, const Provenance& prov, std::size_t n, std::size_t m,
                         double predicted, double measured, std::optional<double> bound, bool extra, double tol) {
  Row row{family, joinParams(prov), n, m, predicted, measured, bound, std::abs(measured - predicted), false};
  row.pass = extra && within(measured, predicted, tol) && (!bound || measured <= *bound + 1e-9);
  return row;
}

inline Row boundRow(const std::string& family, const std::string& params, std::size_t n, std::size_t m,
                    double measured, std::optional<double> bound) {
  Row row{family, params, n, m, std::nullopt, measured, bound, 0.0, true};
  if (bound) {
    row.absErr = std::max(0.0, measured - *bound);
    row.pass = measured <= *bound + 1e-9 && measured >= 1.0 - 1e-12;
  }
  return row;
}

}  // namespace detail

// One unit of work: a closure producing one CSV row.
using Task = std::function<Row()>;

inline std::vector<Task> planTasks(const json& plan) {
  const auto seed = detail::opt<std::uint64_t>(plan, "seed", 0);
  std::vector<Task> tasks;
  if (!plan.contains("entries") || !plan.at("entries").is_array()) throw ValidationError("plan needs an 'entries' array");
  std::size_t entryIndex = 0;
  for (const auto& e : plan.at("entries")) {
    const auto family = detail::opt<std::string>(e, "family", "");
    const std::uint64_t entrySeed = seed * 1'000'003ULL + entryIndex++;
    if (family == "weightedLB" || family == "identicalResourcesLB") {
      tasks.push_back([e, family] {
        const auto f = detail::latencyParam(e, "f", "poly:0,1");
        const auto g = detail::latencyParam(e, "g", "poly:0,1");
        const auto gen = family == "identicalResourcesLB"
                             ? genIdenticalResourcesLB(detail::opt(e, "m", 3), detail::opt(e, "p", 1))
                             : genWeightedLB(detail::opt(e, "m", 3), detail::opt(e, "s", 1), detail::opt(e, "k", 1.0),
                                             detail::opt(e, "h", 0.0), f, g,
                                             detail::opt<std::string>(e, "variant", "restricted") == "symmetric"
                                                 ? WeightedVariant::symmetric
                                                 : WeightedVariant::restrictedStrategies);
        int degree = family == "identicalResourcesLB" ? detail::opt(e, "p", 1) : std::max(f.degree(), g.degree());
        if (family != "identicalResourcesLB" && (f.degree() < 0 || g.degree() < 0)) degree = -1;
        return detail::closedFormRow(family, gen.provenance, gen.game.playerCount(), gen.game.resourceCount(),
                                     gen.predictedRatio, measuredRatio(gen), detail::degreeBound(degree, 2.0),
                                     checkPne(gen), 1e-9);
      });
    } else if (family == "unweightedLB") {
      tasks.push_back([e] {
        const auto f = detail::latencyParam(e, "f", "poly:0,1");
        const auto gen = genUnweightedLB(detail::opt(e, "m", 2), detail::opt(e, "k", 1), detail::opt(e, "o", 1), f);
        return detail::closedFormRow("unweightedLB", gen.provenance, gen.game.playerCount(), gen.game.resourceCount(),
                                     gen.predictedRatio, measuredRatio(gen), detail::degreeBound(f.degree(), 2.0),
                                     checkPne(gen), 1e-9);
      });
    } else if (family == "linearCG") {
      tasks.push_back([e] {
        const auto gen = genLinearCG(detail::opt(e, "n", 4), detail::opt(e, "eps", 0.4));
        return detail::closedFormRow("linearCG", gen.provenance, gen.game.playerCount(), gen.game.resourceCount(),
                                     gen.predictedRatio, measuredRatio(gen), std::nullopt, checkPne(gen), 1e-9);
      });
    } else if (family == "nonAtomic") {
      tasks.push_back([e] {
        const auto f = detail::latencyParam(e, "f", "poly:0,1");
        const auto gen = genNonAtomic(detail::opt(e, "k", std::exp(1.0)), detail::opt(e, "o", 1.0), f);
        const auto eq = potentialMinimize(gen.game);
        const auto bound =
            f.degree() < 0 ? std::nullopt : std::optional<double>(polyBounds(f.degree()).nonatomicNpoa);
        return detail::closedFormRow("nonAtomic", gen.provenance, 0, gen.game.resourceCount(), gen.predictedRatio,
                                     nonatomicRatio(gen.game, eq, gen.optCandidate), bound,
                                     wardropCheck(gen.game, eq), 1e-6);
      });
    } else if (family == "onlineGreedyLB") {
      tasks.push_back([e] {
        const auto f = detail::latencyParam(e, "f", "poly:0,1");
        const auto g = detail::latencyParam(e, "g", "poly:0,1");
        const auto gen = genOnlineGreedyLB(detail::opt(e, "m", 3), detail::opt(e, "k", 1.0), detail::opt(e, "h", 0.0), f, g);
        const auto greedy = greedyAssign(gen.instance).profile;
        const auto& game = gen.instance.game;
        const double measured = std::exp(logNsw(game, greedy).value - logNsw(game, gen.optCandidate).value);
        const int degree = (f.degree() < 0 || g.degree() < 0) ? -1 : std::max(f.degree(), g.degree());
        return detail::closedFormRow("onlineGreedyLB", gen.provenance, game.playerCount(), game.resourceCount(),
                                     gen.predictedRatio, measured, detail::degreeBound(degree, 4.0),
                                     greedy == gen.greedy, 1e-9);
      });
    } else if (family == "onlineUniversal") {
      tasks.push_back([e] {
        const int p = detail::opt(e, "p", 1);
        const auto gen = genOnlineUniversal(detail::opt(e, "m", 2), p);
        const auto& game = gen.instance.game;
        const auto greedy = greedyAssign(gen.instance).profile;
        const double measured = std::exp(logNsw(game, greedy).value - logNsw(game, gen.optCandidate).value);
        return detail::closedFormRow("onlineUniversal", gen.provenance, game.playerCount(), game.resourceCount(),
                                     gen.predictedRatio, measured, std::pow(4.0, p), greedy == gen.greedy, 1e-9);
      });
    } else if (family == "randomWeighted" || family == "randomUnweighted" || family == "randomGreedy") {
      RandomGameSpec spec;
      spec.maxPlayers = detail::opt<std::size_t>(e, "maxPlayers", 6);
      spec.maxResources = detail::opt<std::size_t>(e, "maxResources", 4);
      spec.maxDegree = detail::opt(e, "maxDegree", 3);
      spec.weighted = family != "randomUnweighted";
      const auto count = detail::opt<std::size_t>(e, "count", 10);
      for (std::size_t idx = 0; idx < count; ++idx)
        tasks.push_back([spec, family, entrySeed, idx] {
          std::mt19937_64 rng(entrySeed * 7919ULL + idx);
          const auto rg = randomPolynomialGame(rng, spec);
          const std::string params = "seed=" + std::to_string(entrySeed) + ";index=" + std::to_string(idx) +
                                     ";p=" + std::to_string(rg.degree);
          if (family == "randomGreedy") {
            const OnlineInstance inst{rg.game, identityOrder(rg.game.playerCount())};
            return detail::boundRow(family, params, rg.game.playerCount(), rg.game.resourceCount(),
                                    competitiveRatio(inst).ratio, std::pow(4.0, rg.degree));
          }
          return detail::boundRow(family, params, rg.game.playerCount(), rg.game.resourceCount(),
                                  empiricalNpoa(rg.game).ratio, std::pow(2.0, rg.degree));
        });
    } else {
      throw ValidationError("unknown experiment family '" + family + "'");
    }
  }
  return tasks;
}

// Runs tasks on up to `jobs` threads; row order follows task order whatever the scheduling.
inline std::vector<Row> runTasks(const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<Row> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        rows[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

inline std::string toCsv(const std::vector<Row>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += detail::csvQuote(r.family) + "," + detail::csvQuote(r.params) + "," + std::to_string(r.players) + "," +
           std::to_string(r.resources) + "," + (r.predicted ? detail::fmt(*r.predicted) : "") + "," +
           detail::fmt(r.measured) + "," + (r.bound ? detail::fmt(*r.bound) : "") + "," + detail::fmt(r.absErr) + "," +
           (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace nswlb::experiment
