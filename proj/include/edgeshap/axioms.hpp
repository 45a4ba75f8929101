#pragma once

#include "edgeshap/game.hpp"

#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace edgeshap {

enum class Axiom { efficiency, symmetry, null_player, additivity };

/// Outcome of one named check. Informational checks never fail a report.
struct CheckResult {
  std::string name;
  bool passed = true;
  bool informational = false;
  std::string detail;
  std::vector<std::string> witnesses;
};

struct CheckReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed && !c.informational) return false;
    }
    return true;
  }
};

template <class Scalar>
struct AxiomCheckOptions {
  /// Games w for which Sh(v + w) = allocation + Sh(w) is checked.
  std::vector<NodeCharacteristic<Scalar>> additivity_partners;
  /// Names used in witnesses; indices are used when empty.
  std::vector<std::string> labels;
  /// Allocation comparison tolerance in the approx domain (relative).
  double tolerance = 1e-9;
  /// Characteristic-value comparison tolerance used for detection.
  double detection_tolerance = 1e-12;
  /// Up to this many players, symmetric pairs and null players are detected
  /// over all coalitions; above it, over `spot_checks` random coalitions.
  std::size_t exhaustive_limit = 12;
  std::size_t spot_checks = 256;
  std::uint64_t seed = 1;
  EngineOptions engine;
};

namespace detail {

template <class Scalar>
std::string player_name(const AxiomCheckOptions<Scalar>& options, std::size_t i) {
  return i < options.labels.size() ? options.labels[i] : "#" + std::to_string(i);
}

/// Calls test(S) for every S within `pool` (or a random sample of them),
/// stopping at the first false. Returns whether every call passed.
template <class Test>
bool for_coalitions_within(Coalition pool, bool exhaustive, std::size_t spot_checks, std::mt19937_64& rng,
                           Test&& test) {
  if (exhaustive) {
    std::uint64_t sub = 0;
    do {
      if (!test(Coalition(sub))) return false;
      sub = (sub - pool.bits()) & pool.bits();
    } while (sub != 0);
    return true;
  }
  for (std::size_t k = 0; k < spot_checks; ++k) {
    if (!test(Coalition(rng() & pool.bits()))) return false;
  }
  return test(Coalition{}) && test(pool);
}

}  // namespace detail

/// Pairs (i, j), i < j, with v(S+i) = v(S+j) for every S avoiding both.
template <class Scalar>
std::vector<std::pair<std::size_t, std::size_t>> symmetric_pairs(const NodeCharacteristic<Scalar>& v,
                                                                 const AxiomCheckOptions<Scalar>& options = {}) {
  const std::size_t n = v.player_count();
  const bool exhaustive = n <= options.exhaustive_limit;
  std::mt19937_64 rng(options.seed);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Coalition pool = Coalition::full(n).without(i).without(j);
      const bool symmetric = detail::for_coalitions_within(pool, exhaustive, options.spot_checks, rng, [&](Coalition s) {
        return ScalarTraits<Scalar>::equal(v(s.with(i)), v(s.with(j)), options.detection_tolerance);
      });
      if (symmetric) out.emplace_back(i, j);
    }
  }
  return out;
}

/// Players whose marginal contribution is zero to every coalition.
template <class Scalar>
Coalition null_players(const NodeCharacteristic<Scalar>& v, const AxiomCheckOptions<Scalar>& options = {}) {
  const std::size_t n = v.player_count();
  const bool exhaustive = n <= options.exhaustive_limit;
  std::mt19937_64 rng(options.seed);
  Coalition out;
  for (std::size_t i = 0; i < n; ++i) {
    const Coalition pool = Coalition::full(n).without(i);
    const bool null = detail::for_coalitions_within(pool, exhaustive, options.spot_checks, rng, [&](Coalition s) {
      return ScalarTraits<Scalar>::equal(v(s.with(i)), v(s), options.detection_tolerance);
    });
    if (null) out = out.with(i);
  }
  return out;
}

/// Checks an allocation of v against the selected Shapley axioms.
template <class Scalar>
CheckReport axiom_check(const NodeCharacteristic<Scalar>& v, const Allocation<Scalar>& allocation,
                        std::span<const Axiom> which, const AxiomCheckOptions<Scalar>& options = {}) {
  using Traits = ScalarTraits<Scalar>;
  const std::size_t n = v.player_count();
  if (static_cast<std::size_t>(allocation.size()) != n) {
    throw ArgumentError("allocation has " + std::to_string(allocation.size()) + " entries for " + std::to_string(n) +
                        " players");
  }
  auto at = [&](std::size_t i) -> const Scalar& { return allocation(static_cast<Eigen::Index>(i)); };

  CheckReport report;
  for (Axiom axiom : which) {
    CheckResult r;
    switch (axiom) {
      case Axiom::efficiency: {
        r.name = "efficiency";
        const Scalar sum = allocation.sum();
        const Scalar worth = v(Coalition::full(n));
        r.passed = Traits::equal(sum, worth, options.tolerance);
        r.detail = "sum " + value_string(sum) + " vs worth " + value_string(worth);
        break;
      }
      case Axiom::symmetry: {
        r.name = "symmetry";
        const auto pairs = symmetric_pairs(v, options);
        std::size_t failures = 0;
        for (const auto& [i, j] : pairs) {
          const bool ok = Traits::equal(at(i), at(j), options.tolerance);
          if (!ok) ++failures;
          r.witnesses.push_back(detail::player_name(options, i) + "~" + detail::player_name(options, j) + ": " +
                                value_string(at(i)) + (ok ? " = " : " != ") + value_string(at(j)));
        }
        r.passed = failures == 0;
        r.detail = std::to_string(pairs.size()) + " symmetric pair(s), " + std::to_string(failures) + " unequal";
        break;
      }
      case Axiom::null_player: {
        r.name = "null-player";
        const Coalition nulls = null_players(v, options);
        std::size_t failures = 0;
        nulls.for_each([&](std::size_t i) {
          const bool ok = Traits::is_zero(at(i), options.tolerance);
          if (!ok) ++failures;
          r.witnesses.push_back(detail::player_name(options, i) + ": " + value_string(at(i)));
        });
        r.passed = failures == 0;
        r.detail = std::to_string(nulls.size()) + " null player(s), " + std::to_string(failures) + " non-zero";
        break;
      }
      case Axiom::additivity: {
        r.name = "additivity";
        std::size_t failures = 0;
        for (std::size_t k = 0; k < options.additivity_partners.size(); ++k) {
          const auto& partner = options.additivity_partners[k];
          const Allocation<Scalar> combined = shapley_exact(v + partner, options.engine);
          const Allocation<Scalar> separate = allocation + shapley_exact(partner, options.engine);
          for (std::size_t i = 0; i < n; ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            if (!Traits::equal(combined(idx), separate(idx), options.tolerance)) {
              ++failures;
              r.witnesses.push_back("partner " + std::to_string(k) + ", " + detail::player_name(options, i) + ": " +
                                    value_string(combined(idx)) + " != " + value_string(separate(idx)));
            }
          }
        }
        r.passed = failures == 0;
        r.detail = std::to_string(options.additivity_partners.size()) + " partner game(s), " +
                   std::to_string(failures) + " mismatch(es)";
        break;
      }
    }
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace edgeshap
