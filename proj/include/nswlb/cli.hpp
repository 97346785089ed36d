#pragma once

#include <nswlb/bounds.hpp>
#include <nswlb/equilibria.hpp>
#include <nswlb/errors.hpp>
#include <nswlb/experiment.hpp>
#include <nswlb/generators.hpp>
#include <nswlb/io.hpp>
#include <nswlb/nonatomic.hpp>
#include <nswlb/online_greedy.hpp>
#include <nswlb/optima.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace nswlb::cli {

using nlohmann::json;

// Exit code when an experiment ran but some of its checks failed.
inline constexpr int kChecksFailed = 4;

namespace detail {

inline json loadsJson(const AtomicGame& game, const std::vector<double>& load) {
  json j = json::object();
  for (std::size_t r = 0; r < load.size(); ++r)
    if (load[r] > 0.0) j[game.resources()[r].id] = load[r];
  return j;
}

inline json profileReport(const AtomicGame& game, const Profile& profile) {
  const auto v = logNsw(game, profile);
  json costs = json::array();
  for (std::size_t i = 0; i < game.playerCount(); ++i) costs.push_back(playerCost(game, profile, i));
  return {{"profile", profile},
          {"loads", loadsJson(game, congestion(game, profile))},
          {"costs", std::move(costs)},
          {"logNsw", v.value},
          {"nsw", v.nsw()},
          {"isPne", isPne(game, profile)}};
}

inline void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline int analyze(const std::string& path, const std::string& profilePath, std::ostream& out) {
  const auto j = io::readJsonFile(path);
  const auto game = io::gameFromJson(j);
  json report;
  if (!profilePath.empty()) {
    report = profileReport(game, io::profileFromJson(io::readJsonFile(profilePath)));
  } else if (j.contains("metadata") && j["metadata"].contains("designatedEquilibrium")) {
    const auto& meta = j["metadata"];
    const auto eq = meta["designatedEquilibrium"].get<Profile>();
    const auto opt = meta["designatedOpt"].get<Profile>();
    report = profileReport(game, eq);
    report["designated"] = {{"ratio", std::exp(logNsw(game, eq).value - logNsw(game, opt).value)},
                            {"predictedRatio", meta.value("predictedRatio", 0.0)}};
  } else {
    report = profileReport(game, Profile(game.playerCount(), 0));
  }
  out << report.dump(2) << "\n";
  return 0;
}

inline Schedule parseSchedule(const std::string& s) {
  if (s == "roundRobin") return Schedule::roundRobin;
  if (s == "maxWeightFirst") return Schedule::maxWeightFirst;
  if (s == "seededRandom") return Schedule::seededRandom;
  throw ValidationError("unknown schedule '" + s + "'");
}

inline int dynamics(const std::string& path, const std::string& schedule, std::uint64_t seed, std::size_t maxSweeps,
                    const std::string& startPath, const std::string& tracePath, std::ostream& out) {
  const auto game = io::gameFromJson(io::readJsonFile(path));
  const Profile start = startPath.empty() ? Profile(game.playerCount(), 0)
                                          : io::profileFromJson(io::readJsonFile(startPath));
  const auto res = bestResponseDynamics(game, start, parseSchedule(schedule), maxSweeps, seed);
  std::string csv = "sweep,player,from,to,old_cost,new_cost\n";
  for (const auto& mv : res.trace)
    csv += std::to_string(mv.sweep) + "," + std::to_string(mv.player) + "," + std::to_string(mv.from) + "," +
           std::to_string(mv.to) + "," + experiment::detail::fmt(mv.oldCost) + "," +
           experiment::detail::fmt(mv.newCost) + "\n";
  if (!tracePath.empty()) writeText(tracePath, csv);
  json report = {{"converged", res.converged}, {"sweeps", res.sweeps}, {"moves", res.trace.size()}};
  report.update(profileReport(game, res.profile));
  if (tracePath.empty()) report["trace"] = csv;
  out << report.dump(2) << "\n";
  if (!res.converged) throw DidNotConverge("no equilibrium after " + std::to_string(maxSweeps) + " sweeps");
  return 0;
}

inline int opt(const std::string& path, const std::string& method, std::ostream& out) {
  const auto game = io::gameFromJson(io::readJsonFile(path));
  OptResult res;
  if (method == "brute")
    res = bruteForceOpt(game);
  else if (method == "matching")
    res = unweightedOptMatching(game);
  else
    throw ValidationError("unknown method '" + method + "'");
  json report = profileReport(game, res.profile);
  report["method"] = method;
  report["bruteForceFallback"] = res.bruteForceFallback;
  out << report.dump(2) << "\n";
  return 0;
}

inline int greedy(const std::string& path, std::ostream& out) {
  const auto inst = io::onlineFromJson(io::readJsonFile(path));
  const auto res = greedyAssign(inst);
  json steps = json::array();
  for (const auto& s : res.steps) steps.push_back({{"client", s.client}, {"strategy", s.strategy}, {"increments", s.increments}});
  json report = profileReport(inst.game, res.profile);
  report["steps"] = std::move(steps);
  if (inst.game.profileCount() <= kDefaultProfileCap) {
    const auto opt = bruteForceOpt(inst.game);
    report["optimum"] = opt.profile;
    report["competitiveRatio"] = std::exp(logNsw(inst.game, res.profile).value - opt.value.value);
  }
  out << report.dump(2) << "\n";
  return 0;
}

inline int nonatomic(const std::string& path, const std::string& method, double eps, std::size_t maxIters,
                     std::ostream& out) {
  const auto game = io::nonAtomicFromJson(io::readJsonFile(path));
  FlowProfile flow;
  if (method == "waterfill")
    flow = symmetricWaterfill(game);
  else if (method == "pairwise")
    flow = potentialMinimize(game, maxIters, eps, FlowMethod::pairwise);
  else if (method == "frankWolfe")
    flow = potentialMinimize(game, maxIters, eps, FlowMethod::frankWolfe);
  else
    throw ValidationError("unknown method '" + method + "'");
  const auto v = logNswFlow(game, flow);
  out << json{{"flow", flow.share},
              {"wardropGap", wardropGap(game, flow, eps)},
              {"logNsw", v.value},
              {"nsw", v.nsw()}}
             .dump(2)
      << "\n";
  return 0;
}

struct GenerateArgs {
  std::string family;
  int m = 3, s = 1, o = 1, p = 1, n = 4;
  double k = 1.0, h = 0.0, eps = 0.4;
  std::string f = "poly:0,1", g = "poly:0,1", variant = "restricted", outPath;
};

inline int generate(const GenerateArgs& a, std::ostream& out) {
  const auto f = LatencyFunction::parse(a.f);
  const auto g = LatencyFunction::parse(a.g);
  json j;
  if (a.family == "weightedLB")
    j = io::generatedToJson(genWeightedLB(a.m, a.s, a.k, a.h, f, g,
                                          a.variant == "symmetric" ? WeightedVariant::symmetric
                                                                   : WeightedVariant::restrictedStrategies));
  else if (a.family == "identicalResourcesLB")
    j = io::generatedToJson(genIdenticalResourcesLB(a.m, a.p));
  else if (a.family == "unweightedLB")
    j = io::generatedToJson(genUnweightedLB(a.m, static_cast<int>(std::lround(a.k)), a.o, f));
  else if (a.family == "nonAtomic")
    j = io::generatedToJson(genNonAtomic(a.k, a.o, f));
  else if (a.family == "onlineGreedyLB")
    j = io::generatedToJson(genOnlineGreedyLB(a.m, a.k, a.h, f, g));
  else if (a.family == "onlineUniversal")
    j = io::generatedToJson(genOnlineUniversal(a.m, a.p));
  else if (a.family == "linearCG")
    j = io::generatedToJson(genLinearCG(a.n, a.eps));
  else
    throw ValidationError("unknown generator family '" + a.family + "'");
  if (a.outPath.empty())
    out << j.dump(2) << "\n";
  else
    writeText(a.outPath, j.dump(2) + "\n");
  return 0;
}

inline std::vector<LatencyFunction> polyFamily(int p) {
  std::vector<LatencyFunction> fam;
  for (int d = 0; d <= p; ++d) fam.push_back(LatencyFunction::monomial(d));
  fam.push_back(LatencyFunction::polynomial(std::vector<double>(static_cast<std::size_t>(p) + 1, 1.0)));
  return fam;
}

inline int verifyBounds(const std::vector<int>& degrees, const std::string& family, std::ostream& out) {
  if (family != "poly") throw ValidationError("only the 'poly' family is supported");
  out << "p\tweighted\tunweighted\tnonatomic\tonline\n";
  for (int p : degrees) {
    const auto b = polyBounds(p);
    out << p << "\t" << num(b.weightedNpoa) << "\t" << num(b.unweightedNpoa) << "\t" << num(b.nonatomicNpoa) << "\t"
        << num(b.greedyCr) << "\n";
    const auto fam = polyFamily(p);
    out << "sup\t" << num(supWeightedGeneral(fam, fam).value) << "\t" << num(supUnweighted(fam).value) << "\t"
        << num(supNonatomic(fam).value) << "\t" << num(supGreedyGeneral(fam, fam).value) << "\n";
  }
  return 0;
}

inline int runExperiment(const std::string& planPath, const std::string& outDir, unsigned jobs, std::ostream& out) {
  const auto tasks = experiment::planTasks(io::readJsonFile(planPath));
  const auto rows = experiment::runTasks(tasks, jobs);
  const auto csv = experiment::toCsv(rows);
  if (outDir.empty()) {
    out << csv;
  } else {
    std::filesystem::create_directories(outDir);
    writeText((std::filesystem::path(outDir) / "results.csv").string(), csv);
  }
  for (const auto& r : rows)
    if (!r.pass) return kChecksFailed;
  return 0;
}

inline void reportError(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash social welfare tools for selfish and online load balancing", "nswlb"};
  app.require_subcommand(1);
  // long form only: generate takes --h
  app.set_help_flag("--help", "print this help");

  std::string path, profilePath, startPath, tracePath, method, schedule = "maxWeightFirst", planPath, outDir;
  std::uint64_t seed = 0;
  std::size_t maxSweeps = 10'000, maxIters = 100'000;
  double eps = 1e-6;
  unsigned jobs = 1;
  detail::GenerateArgs gen;
  std::vector<int> degrees{0, 1, 2, 3};
  std::string boundFamily = "poly";

  auto* analyze = app.add_subcommand("analyze", "NSW, costs and equilibrium check of a profile");
  analyze->add_option("game", path, "game JSON")->required();
  analyze->add_option("--profile", profilePath, "profile JSON");

  auto* dyn = app.add_subcommand("dynamics", "best-response dynamics");
  dyn->add_option("game", path, "game JSON")->required();
  dyn->add_option("--schedule", schedule, "roundRobin | maxWeightFirst | seededRandom");
  dyn->add_option("--seed", seed);
  dyn->add_option("--max-sweeps", maxSweeps);
  dyn->add_option("--start", startPath, "starting profile JSON");
  dyn->add_option("--trace", tracePath, "write the move trace CSV here");

  auto* optCmd = app.add_subcommand("opt", "NSW-optimal profile");
  optCmd->add_option("game", path, "game JSON")->required();
  method = "brute";
  optCmd->add_option("--method", method, "brute | matching");

  auto* greedyCmd = app.add_subcommand("greedy", "greedy online assignment");
  greedyCmd->add_option("instance", path, "online instance JSON")->required();

  std::string flowMethod = "pairwise";
  auto* nonatomicCmd = app.add_subcommand("nonatomic", "Wardrop equilibrium of a non-atomic game");
  nonatomicCmd->add_option("game", path, "non-atomic game JSON")->required();
  nonatomicCmd->add_option("--method", flowMethod, "pairwise | frankWolfe | waterfill");
  nonatomicCmd->add_option("--eps", eps);
  nonatomicCmd->add_option("--max-iters", maxIters);

  auto* genCmd = app.add_subcommand("generate", "lower-bound instance families");
  genCmd->add_option("family", gen.family,
                     "weightedLB | identicalResourcesLB | unweightedLB | nonAtomic | onlineGreedyLB | onlineUniversal | linearCG")
      ->required();
  genCmd->add_option("--m", gen.m);
  genCmd->add_option("--s", gen.s);
  genCmd->add_option("--k", gen.k);
  genCmd->add_option("--h", gen.h);
  genCmd->add_option("--o", gen.o);
  genCmd->add_option("--p", gen.p);
  genCmd->add_option("--n", gen.n);
  genCmd->add_option("--eps", gen.eps);
  genCmd->add_option("--f", gen.f, "latency spec, e.g. poly:0,1");
  genCmd->add_option("--g", gen.g, "latency spec");
  genCmd->add_option("--variant", gen.variant, "restricted | symmetric");
  genCmd->add_option("--out", gen.outPath);

  auto* boundsCmd = app.add_subcommand("verify-bounds", "tight bounds for polynomial latencies");
  boundsCmd->add_option("--p", degrees, "polynomial degrees");
  boundsCmd->add_option("--family", boundFamily);

  auto* expCmd = app.add_subcommand("experiment", "batch run producing CSV");
  expCmd->add_option("plan", planPath, "plan JSON")->required();
  expCmd->add_option("--out", outDir, "output directory");
  expCmd->add_option("--jobs", jobs);

  std::vector<const char*> argv{"nswlb"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    detail::reportError(err, "validation", e.what());
    return 1;
  }

  try {
    if (*analyze) return detail::analyze(path, profilePath, out);
    if (*dyn) return detail::dynamics(path, schedule, seed, maxSweeps, startPath, tracePath, out);
    if (*optCmd) return detail::opt(path, method, out);
    if (*greedyCmd) return detail::greedy(path, out);
    if (*nonatomicCmd) return detail::nonatomic(path, flowMethod, eps, maxIters, out);
    if (*genCmd) return detail::generate(gen, out);
    if (*boundsCmd) return detail::verifyBounds(degrees, boundFamily, out);
    if (*expCmd) return detail::runExperiment(planPath, outDir, jobs, out);
  } catch (const Error& e) {
    detail::reportError(err, kindName(e.kind()), e.what());
    return exitCode(e.kind());
  } catch (const std::exception& e) {
    detail::reportError(err, "internal", e.what());
    return 1;
  }
  return 1;
}

}  // namespace nswlb::cli
