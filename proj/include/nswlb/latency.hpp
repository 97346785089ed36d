#pragma once

#include <nswlb/errors.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace nswlb {

namespace detail {

inline std::string formatDouble(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parseDouble(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError("malformed number '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

// Non-decreasing, positive latency curve. Cheap to copy; the representation is shared and immutable.
class LatencyFunction {
 public:
  enum class Family { polynomial, scaled, constant, custom };

  static LatencyFunction polynomial(std::vector<double> coeffs);
  static LatencyFunction monomial(int degree, double coeff = 1.0);
  static LatencyFunction constant(double c);
  // a * inner(b * x)
  static LatencyFunction scaled(double a, double b, const LatencyFunction& inner);
  // Arbitrary callable; the caller asserts whether x ln f(x) is convex.
  static LatencyFunction custom(std::string name, std::function<double(double)> fn, bool quasiLogConvex);
  // "poly:c0,c1,..." or "const:c"
  static LatencyFunction parse(std::string_view spec);

  double operator()(double x) const;
  double log(double x) const;
  // Right limit at 0, the cost seen by an infinitesimal first user.
  double atZero() const;

  Family family() const;
  bool quasiLogConvex() const;
  // Highest degree for polynomials (through wrappers); 0 for constants; -1 if unknown.
  int degree() const;
  std::string describe() const;

  const std::vector<double>& coefficients() const;
  struct ScaledView {
    double a;
    double b;
    const LatencyFunction* inner;
  };
  std::optional<ScaledView> scaledView() const;
  std::optional<double> constantValue() const;

 private:
  struct Poly {
    std::vector<double> c;
  };
  struct Scaled {
    double a;
    double b;
    std::shared_ptr<const LatencyFunction> inner;
  };
  struct Const {
    double c;
  };
  struct Custom {
    std::string name;
    std::function<double(double)> fn;
    bool qlc;
  };
  using Rep = std::variant<Poly, Scaled, Const, Custom>;

  explicit LatencyFunction(Rep rep) : rep_(std::make_shared<const Rep>(std::move(rep))) { validate(); }
  void validate() const;

  std::shared_ptr<const Rep> rep_;
};

inline LatencyFunction LatencyFunction::polynomial(std::vector<double> coeffs) {
  bool anyPositive = false;
  for (double c : coeffs) {
    if (!std::isfinite(c) || c < 0.0) throw ValidationError("polynomial coefficients must be finite and >= 0");
    anyPositive = anyPositive || c > 0.0;
  }
  if (!anyPositive) throw ValidationError("polynomial needs at least one positive coefficient");
  return LatencyFunction(Poly{std::move(coeffs)});
}

inline LatencyFunction LatencyFunction::monomial(int degree, double coeff) {
  if (degree < 0) throw ValidationError("negative monomial degree");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = coeff;
  return polynomial(std::move(c));
}

inline LatencyFunction LatencyFunction::constant(double c) {
  if (!std::isfinite(c) || c <= 0.0) throw ValidationError("constant latency must be finite and > 0");
  return LatencyFunction(Const{c});
}

inline LatencyFunction LatencyFunction::scaled(double a, double b, const LatencyFunction& inner) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0)
    throw ValidationError("scaling factors must be finite and >= 0");
  return LatencyFunction(Scaled{a, b, std::make_shared<const LatencyFunction>(inner)});
}

inline LatencyFunction LatencyFunction::custom(std::string name, std::function<double(double)> fn,
                                               bool quasiLogConvex) {
  if (!fn) throw ValidationError("custom latency needs a callable");
  return LatencyFunction(Custom{std::move(name), std::move(fn), quasiLogConvex});
}

inline LatencyFunction LatencyFunction::parse(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ValidationError("latency spec needs 'family:args': " + std::string(spec));
  auto family = spec.substr(0, colon);
  auto args = spec.substr(colon + 1);
  std::vector<double> values;
  while (true) {
    auto comma = args.find(',');
    values.push_back(detail::parseDouble(args.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  if (family == "poly") return polynomial(std::move(values));
  if (family == "const") {
    if (values.size() != 1) throw ValidationError("const latency takes exactly one value");
    return constant(values[0]);
  }
  throw ValidationError("unknown latency family '" + std::string(family) + "'");
}

inline double LatencyFunction::operator()(double x) const {
  return std::visit(
      [x](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Poly>) {
          double acc = 0.0;
          for (auto it = r.c.rbegin(); it != r.c.rend(); ++it) acc = acc * x + *it;
          return acc;
        } else if constexpr (std::is_same_v<T, Scaled>) {
          return r.a * (*r.inner)(r.b * x);
        } else if constexpr (std::is_same_v<T, Const>) {
          return r.c;
        } else {
          return r.fn(x);
        }
      },
      *rep_);
}

inline double LatencyFunction::log(double x) const {
  return std::visit(
      [x, this](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Poly>) {
          if (x <= 0.0) return std::log(atZero());
          // log-sum-exp over the positive terms, anchored at the largest
          const double lx = std::log(x);
          double hi = -std::numeric_limits<double>::infinity();
          for (std::size_t d = 0; d < r.c.size(); ++d)
            if (r.c[d] > 0.0) hi = std::max(hi, std::log(r.c[d]) + static_cast<double>(d) * lx);
          double acc = 0.0;
          for (std::size_t d = 0; d < r.c.size(); ++d)
            if (r.c[d] > 0.0) acc += std::exp(std::log(r.c[d]) + static_cast<double>(d) * lx - hi);
          return hi + std::log(acc);
        } else if constexpr (std::is_same_v<T, Scaled>) {
          if (r.b == 0.0) return std::log(r.a) + std::log(r.inner->atZero());
          return std::log(r.a) + r.inner->log(r.b * x);
        } else if constexpr (std::is_same_v<T, Const>) {
          return std::log(r.c);
        } else {
          return std::log(r.fn(x));
        }
      },
      *rep_);
}

inline double LatencyFunction::atZero() const {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Poly>) {
          return r.c.front();
        } else if constexpr (std::is_same_v<T, Scaled>) {
          return r.a * r.inner->atZero();
        } else if constexpr (std::is_same_v<T, Const>) {
          return r.c;
        } else {
          return r.fn(0.0);
        }
      },
      *rep_);
}

inline LatencyFunction::Family LatencyFunction::family() const {
  return static_cast<Family>(rep_->index());
}

inline bool LatencyFunction::quasiLogConvex() const {
  if (auto* s = std::get_if<Scaled>(rep_.get())) return s->inner->quasiLogConvex();
  if (auto* c = std::get_if<Custom>(rep_.get())) return c->qlc;
  return true;
}

inline int LatencyFunction::degree() const {
  if (auto* p = std::get_if<Poly>(rep_.get())) {
    for (std::size_t d = p->c.size(); d-- > 0;)
      if (p->c[d] > 0.0) return static_cast<int>(d);
    return 0;
  }
  if (auto* s = std::get_if<Scaled>(rep_.get())) return s->b == 0.0 ? 0 : s->inner->degree();
  if (std::holds_alternative<Const>(*rep_)) return 0;
  return -1;
}

inline std::string LatencyFunction::describe() const {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Poly>) {
          std::string s = "poly:";
          for (std::size_t d = 0; d < r.c.size(); ++d) s += (d ? "," : "") + detail::formatDouble(r.c[d]);
          return s;
        } else if constexpr (std::is_same_v<T, Scaled>) {
          return detail::formatDouble(r.a) + "*(" + r.inner->describe() + ")(" + detail::formatDouble(r.b) + "x)";
        } else if constexpr (std::is_same_v<T, Const>) {
          return "const:" + detail::formatDouble(r.c);
        } else {
          return "custom:" + r.name;
        }
      },
      *rep_);
}

inline const std::vector<double>& LatencyFunction::coefficients() const {
  static const std::vector<double> none;
  if (auto* p = std::get_if<Poly>(rep_.get())) return p->c;
  return none;
}

inline std::optional<LatencyFunction::ScaledView> LatencyFunction::scaledView() const {
  if (auto* sc = std::get_if<Scaled>(rep_.get())) return ScaledView{sc->a, sc->b, sc->inner.get()};
  return std::nullopt;
}

inline std::optional<double> LatencyFunction::constantValue() const {
  if (auto* c = std::get_if<Const>(rep_.get())) return c->c;
  return std::nullopt;
}

inline void LatencyFunction::validate() const {
  constexpr int kSamples = 64;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSamples; ++i) {
    const double x = std::pow(10.0, -6.0 + 12.0 * i / (kSamples - 1));
    const double v = log(x);
    if (std::isnan(v)) throw ValidationError("latency " + describe() + " is NaN at x=" + detail::formatDouble(x));
    if (v == -std::numeric_limits<double>::infinity())
      throw ValidationError("latency " + describe() + " is not positive at x=" + detail::formatDouble(x));
    if (v < prev - 1e-12 * std::max(1.0, std::abs(prev)))
      throw ValidationError("latency " + describe() + " decreases near x=" + detail::formatDouble(x));
    prev = v;
  }
}

}  // namespace nswlb
