#pragma once

#include <nswlb/errors.hpp>
#include <nswlb/latency.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nswlb {

namespace detail {

inline void requireKH(double k, double h) {
  if (!(k >= 1.0) || !std::isfinite(k) || !(h >= 0.0) || !(h < 1.0))
    throw ValidationError("bound functions need k >= 1 and 0 <= h < 1");
}

inline double xLogX(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace detail

// (k+1)^{(1-h)/(k-h)} (h+1)^{(k-1)/(k-h)}
inline double fWeighted(double k, double h) {
  detail::requireKH(k, h);
  return std::exp(((1.0 - h) * std::log(k + 1.0) + (k - 1.0) * std::log(h + 1.0)) / (k - h));
}

// ((k+1)^{k+1}/k^k)^{(1-h)/(k-h)} ((h+1)^{h+1}/h^h)^{(k-1)/(k-h)}, with 0^0 = 1
inline double fGreedy(double k, double h) {
  detail::requireKH(k, h);
  const double a = detail::xLogX(k + 1.0) - detail::xLogX(k);
  const double b = detail::xLogX(h + 1.0) - detail::xLogX(h);
  return std::exp(((1.0 - h) * a + (k - 1.0) * b) / (k - h));
}

struct PolyBounds {
  double weightedNpoa;
  double unweightedNpoa;
  double nonatomicNpoa;
  double greedyCr;
};

inline PolyBounds polyBounds(double p) {
  if (!(p >= 0.0)) throw ValidationError("polynomial degree must be >= 0");
  return {std::pow(2.0, p), std::pow(2.0, p), std::exp(p / std::exp(1.0)), std::pow(4.0, p)};
}

struct SupResult {
  double value = 1.0;
  std::vector<double> argmax;   // (k, o) or (k, h)
  std::size_t fIndex = 0;
  std::size_t gIndex = 0;
  std::vector<double> trajectory;  // incumbent after the grid and after each refinement round
};

struct SupGrid {
  std::size_t points = 512;
  int rounds = 3;
  double lo = 1e-3;   // coordinate range for the non-atomic (k, o) grid
  double hi = 1e3;
  double kMax = 1e3;  // k range [1, kMax] for the (k, h) grids
};

namespace detail {

// argmax of a unimodal fn on [a, b]
template <class Fn>
double goldenMax(Fn&& fn, double a, double b, int iters = 100) {
  const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invPhi * (b - a), d = a + invPhi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < iters && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invPhi * (b - a);
      fd = fn(d);
    }
  }
  const double x = 0.5 * (a + b);
  return x;
}

// Coordinate-wise golden-section polish of a grid incumbent; objective in log domain.
template <class Fn>
void refine(Fn&& fn, double& u, double& v, double du, double dv, double uLo, double uHi, double vLo, double vHi,
            int rounds, double& best, std::vector<double>& trajectory) {
  for (int r = 0; r < rounds; ++r) {
    const double nu = goldenMax([&](double x) { return fn(x, v); }, std::max(uLo, u - du), std::min(uHi, u + du));
    if (fn(nu, v) > best) {
      best = fn(nu, v);
      u = nu;
    }
    const double nv = goldenMax([&](double y) { return fn(u, y); }, std::max(vLo, v - dv), std::min(vHi, v + dv));
    if (fn(u, nv) > best) {
      best = fn(u, nv);
      v = nv;
    }
    trajectory.push_back(std::exp(best));
    du *= 0.5;
    dv *= 0.5;
  }
}

}  // namespace detail

// max over integers 1 <= o <= k <= kMax of (f(k+1)/f(o))^{o/k}
inline SupResult supUnweighted(const std::vector<LatencyFunction>& family, int kMax = 50) {
  if (family.empty()) throw ValidationError("empty function family");
  SupResult res;
  double best = -std::numeric_limits<double>::infinity();
  int bk = 1, bo = 1;
  for (std::size_t fi = 0; fi < family.size(); ++fi) {
    const auto& f = family[fi];
    for (int k = 1; k <= kMax; ++k)
      for (int o = 1; o <= k; ++o) {
        const double v = (static_cast<double>(o) / k) * (f.log(k + 1.0) - f.log(o));
        if ((fi == 0 && k == 1) || v > best + 1e-15 * std::max(1.0, std::abs(best))) {
          best = v;
          bk = k;
          bo = o;
          res.fIndex = fi;
        }
      }
  }
  const auto& f = family[res.fIndex];
  // direct powers keep 2^p exact at (1, 1)
  res.value = std::pow(f(bk + 1.0) / f(bo), static_cast<double>(bo) / bk);
  res.argmax = {static_cast<double>(bk), static_cast<double>(bo)};
  res.trajectory = {res.value};
  return res;
}

// sup over k >= o > 0 of (f(k)/f(o))^{o/k}
inline SupResult supNonatomic(const std::vector<LatencyFunction>& family, const SupGrid& grid = {}) {
  if (family.empty()) throw ValidationError("empty function family");
  const double uLo = std::log(grid.lo), uHi = std::log(grid.hi);
  const double step = (uHi - uLo) / static_cast<double>(grid.points - 1);
  SupResult res;
  double best = 0.0;  // k = o gives ratio 1
  double bu = uLo, bv = uLo;
  for (std::size_t fi = 0; fi < family.size(); ++fi) {
    const auto& f = family[fi];
    std::vector<double> logs(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) logs[i] = f.log(std::exp(uLo + step * i));
    for (std::size_t i = 0; i < grid.points; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const double v = std::exp(step * (static_cast<double>(j) - static_cast<double>(i))) * (logs[i] - logs[j]);
        if (v > best) {
          best = v;
          bu = uLo + step * i;
          bv = uLo + step * j;
          res.fIndex = fi;
        }
      }
  }
  res.trajectory.push_back(std::exp(best));
  const auto& f = family[res.fIndex];
  auto fn = [&](double u, double v) { return v > u ? 0.0 : std::exp(v - u) * (f.log(std::exp(u)) - f.log(std::exp(v))); };
  detail::refine(fn, bu, bv, step, step, uLo, uHi, uLo, uHi, grid.rounds, best, res.trajectory);
  res.value = std::exp(best);
  res.argmax = {std::exp(bu), std::exp(bv)};
  return res;
}

namespace detail {

// Shared (k, h) search; term(f, g, k, h) returns the log of the bound expression.
template <class Term>
SupResult supKH(const std::vector<LatencyFunction>& fFamily, const std::vector<LatencyFunction>& gFamily,
                const SupGrid& grid, Term&& term) {
  if (fFamily.empty() || gFamily.empty()) throw ValidationError("empty function family");
  const double uHi = std::log(grid.kMax);
  const double du = uHi / static_cast<double>(grid.points - 1);
  const double dh = 1.0 / static_cast<double>(grid.points);
  const double hMax = 1.0 - 1e-12;
  SupResult res;
  double best = -std::numeric_limits<double>::infinity();
  double bu = 0.0, bh = 0.0;
  for (std::size_t fi = 0; fi < fFamily.size(); ++fi)
    for (std::size_t gi = 0; gi < gFamily.size(); ++gi)
      for (std::size_t i = 0; i < grid.points; ++i)
        for (std::size_t j = 0; j < grid.points; ++j) {
          const double v = term(fFamily[fi], gFamily[gi], std::exp(du * i), dh * j);
          if (v > best) {
            best = v;
            bu = du * i;
            bh = dh * j;
            res.fIndex = fi;
            res.gIndex = gi;
          }
        }
  res.trajectory.push_back(std::exp(best));
  const auto& f = fFamily[res.fIndex];
  const auto& g = gFamily[res.gIndex];
  auto fn = [&](double u, double h) { return term(f, g, std::exp(u), h); };
  refine(fn, bu, bh, du, dh, 0.0, uHi, 0.0, hMax, grid.rounds, best, res.trajectory);
  res.value = std::exp(best);
  res.argmax = {std::exp(bu), bh};
  return res;
}

}  // namespace detail

// Reduced two-variable form of the weighted upper bound.
inline SupResult supWeightedGeneral(const std::vector<LatencyFunction>& fFamily,
                                    const std::vector<LatencyFunction>& gFamily, const SupGrid& grid = {}) {
  return detail::supKH(fFamily, gFamily, grid, [](const LatencyFunction& f, const LatencyFunction& g, double k, double h) {
    return ((1.0 - h) * (f.log(k + 1.0) - f.log(1.0)) + (k - 1.0) * (g.log(h + 1.0) - g.log(1.0))) / (k - h);
  });
}

// Reduced two-variable form of the greedy upper bound; h ln g(h) vanishes at h = 0.
inline SupResult supGreedyGeneral(const std::vector<LatencyFunction>& fFamily,
                                  const std::vector<LatencyFunction>& gFamily, const SupGrid& grid = {}) {
  return detail::supKH(fFamily, gFamily, grid, [](const LatencyFunction& f, const LatencyFunction& g, double k, double h) {
    const double a = (k + 1.0) * f.log(k + 1.0) - k * f.log(k) - f.log(1.0);
    const double b = (h + 1.0) * g.log(h + 1.0) - (h == 0.0 ? 0.0 : h * g.log(h)) - g.log(1.0);
    return ((1.0 - h) * a + (k - 1.0) * b) / (k - h);
  });
}

}  // namespace nswlb
