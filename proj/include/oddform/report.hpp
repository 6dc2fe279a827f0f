#pragma once

// Axiom reports and the tuple iteration used by every checker.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace oddform {

struct Violation {
  std::string axiom;
  std::string witness;
};

struct AxiomStat {
  std::string axiom;
  std::uint64_t tuples = 0;
  std::uint64_t failures = 0;
  bool exhaustive = false;
};

struct Report {
  std::vector<Violation> violations;
  std::vector<AxiomStat> stats;

  bool ok() const { return violations.empty(); }
  bool cites(const std::string& axiom) const;
  void merge(const Report& other);
  std::string summary() const;
};

struct CheckConfig {
  std::uint64_t seed = 0x0ddf0e3ull;
  /// Tuples drawn per axiom when not exhaustive.
  std::uint64_t samples = 100000;
  /// Exhaustive mode is allowed when |R| * |Delta| is at most this.
  std::uint64_t exhaustive_limit = 1ull << 20;
  /// Axioms whose tuple count exceeds this are sampled even in exhaustive mode.
  std::uint64_t tuple_cap = 1ull << 25;
  /// Violations recorded per axiom (the first ones in iteration order).
  std::size_t witnesses_per_axiom = 1;
};

using Rng = std::mt19937_64;

/// A set of values a checker quantifies over: either fully listed or only
/// samplable.
template <class T>
struct Carrier {
  std::string name;
  std::shared_ptr<const std::vector<T>> all;
  bool enumerable = false;
  std::function<T(Rng&)> random;
  std::function<std::string(const T&)> str;

  std::uint64_t size() const { return all ? all->size() : 0; }
  T draw(Rng& rng) const {
    if (enumerable)
      return (*all)[std::uniform_int_distribution<std::size_t>(0, all->size() - 1)(rng)];
    return random(rng);
  }
  Carrier renamed(std::string n) const {
    Carrier c = *this;
    c.name = std::move(n);
    return c;
  }
};

namespace detail {

template <class Tuple, std::size_t... I>
std::string witness_string(const Tuple& carriers, const auto& vals,
                           std::index_sequence<I...>) {
  std::string s;
  ((s += (I ? ", " : "") + std::get<I>(carriers)->name + "=" +
         std::get<I>(carriers)->str(std::get<I>(vals))),
   ...);
  return s;
}

}  // namespace detail

/// Carrier over a fully listed set.
template <class T>
Carrier<T> listed_carrier(std::string name, std::vector<T> all,
                          std::function<std::string(const T&)> str) {
  Carrier<T> c;
  c.name = std::move(name);
  c.all = std::make_shared<const std::vector<T>>(std::move(all));
  c.enumerable = true;
  c.str = std::move(str);
  return c;
}

/// Carrier that can only be sampled.
template <class T>
Carrier<T> sampled_carrier(std::string name, std::function<T(Rng&)> random,
                           std::function<std::string(const T&)> str) {
  Carrier<T> c;
  c.name = std::move(name);
  c.random = std::move(random);
  c.str = std::move(str);
  return c;
}

/// Checks `pred` over tuples drawn from the carriers: all tuples when
/// `exhaustive` holds and the count fits under the cap, a seeded sample
/// otherwise. Violations are appended to `rep`.
template <class Pred, class... T>
void check_axiom(Report& rep, const CheckConfig& cfg, bool exhaustive,
                 const std::string& axiom, Pred pred,
                 const Carrier<T>&... carriers) {
  auto cs = std::make_tuple(&carriers...);
  AxiomStat st{axiom, 0, 0, false};
  std::uint64_t count = 1;
  bool all_enum = true;
  ((all_enum = all_enum && carriers.enumerable), ...);
  if (all_enum) {
    ((count = (count > cfg.tuple_cap ? count : count * std::max<std::uint64_t>(carriers.size(), 1))), ...);
  }
  std::size_t recorded = 0;
  auto visit = [&](const T&... vals) {
    ++st.tuples;
    if (pred(vals...)) return;
    ++st.failures;
    if (recorded < cfg.witnesses_per_axiom) {
      ++recorded;
      rep.violations.push_back(
          {axiom, detail::witness_string(cs, std::forward_as_tuple(vals...),
                                         std::index_sequence_for<T...>{})});
    }
  };
  if (all_enum && (count <= cfg.samples || (exhaustive && count <= cfg.tuple_cap))) {
    st.exhaustive = true;
    constexpr std::size_t k = sizeof...(T);
    std::array<std::size_t, k> idx{};
    std::array<std::size_t, k> lim{carriers.size()...};
    for (auto l : lim)
      if (l == 0) {
        rep.stats.push_back(st);
        return;
      }
    while (true) {
      [&]<std::size_t... I>(std::index_sequence<I...>) {
        visit((*std::get<I>(cs)->all)[idx[I]]...);
      }(std::index_sequence_for<T...>{});
      bool done = true;
      for (std::size_t p = k; p-- > 0;) {
        if (++idx[p] < lim[p]) {
          done = false;
          break;
        }
        idx[p] = 0;
      }
      if (done) break;
    }
  } else {
    Rng rng(cfg.seed ^ std::hash<std::string>{}(axiom));
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      std::tuple<T...> vals{carriers.draw(rng)...};
      std::apply(visit, vals);
    }
  }
  rep.stats.push_back(st);
}

}  // namespace oddform
