#pragma once

#include "edgeshap/coalition.hpp"
#include "edgeshap/detail/parallel.hpp"
#include "edgeshap/errors.hpp"
#include "edgeshap/graph.hpp"
#include "edgeshap/rational.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace edgeshap {

/// Per-node values in canonical node order.
template <class Scalar>
using Allocation = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A TU game on n players: a characteristic function over coalitions.
///
/// The function must be deterministic and free of side effects; engines may
/// call it from several threads at once.
template <class Scalar>
class NodeCharacteristic {
 public:
  using Function = std::function<Scalar(Coalition)>;

  NodeCharacteristic(std::size_t players, Function f) : players_(players), f_(std::move(f)) {
    if (players_ > kMaxPlayers) {
      throw CapacityError("characteristic over " + std::to_string(players_) + " players exceeds " +
                          std::to_string(kMaxPlayers));
    }
  }

  std::size_t player_count() const { return players_; }
  Scalar operator()(Coalition s) const { return f_(s); }

  friend NodeCharacteristic operator+(const NodeCharacteristic& a, const NodeCharacteristic& b) {
    if (a.players_ != b.players_) throw ArgumentError("cannot add games over different player counts");
    return NodeCharacteristic(a.players_, [fa = a.f_, fb = b.f_](Coalition s) { return Scalar(fa(s) + fb(s)); });
  }

 private:
  std::size_t players_;
  Function f_;
};

/// A graph together with a game on its nodes.
template <class Scalar>
struct GraphGame {
  Graph graph;
  NodeCharacteristic<Scalar> v;
};

struct EngineOptions {
  /// Worker threads; 0 means one per hardware thread. Results are
  /// bit-identical for every value.
  unsigned threads = 0;
  /// Exact enumeration refuses games with more players than this.
  std::size_t exact_player_limit = 24;
};

/// Work counters filled in by the engines.
struct EngineStats {
  std::uint64_t evaluations = 0;
  std::uint64_t marginals = 0;
};

/// s!(n-s-1)!/n! for s = 0..n-1.
std::vector<Rational> shapley_weights(std::size_t n);

namespace detail {

inline void check_exact_capacity(std::size_t n, const EngineOptions& options) {
  if (n > options.exact_player_limit || n > kMaxPlayers) {
    throw CapacityError("exact enumeration over " + std::to_string(n) + " players exceeds the limit of " +
                        std::to_string(std::min(options.exact_player_limit, kMaxPlayers)) +
                        " (raise exact_player_limit to override)");
  }
}

template <class Scalar>
void check_empty_is_zero(const NodeCharacteristic<Scalar>& v) {
  if (v(Coalition{}) != Scalar(0)) throw ContractViolation("characteristic function is non-zero on the empty coalition");
}

template <class Scalar>
std::vector<Scalar> converted_weights(std::size_t n) {
  std::vector<Scalar> out;
  for (const Rational& w : shapley_weights(n)) out.push_back(ScalarTraits<Scalar>::from_rational(w));
  return out;
}

/// Combines per-size marginal sums with the weight table, smallest size first.
template <class Scalar>
Scalar weigh_by_size(const std::vector<Scalar>& by_size, const std::vector<Scalar>& weights) {
  Scalar total(0);
  for (std::size_t s = 0; s < by_size.size(); ++s) {
    if (by_size[s] != Scalar(0)) total += weights[s] * by_size[s];
  }
  return total;
}

inline constexpr unsigned kTableChunkBits = 12;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Unbiased draw from [0, bound).
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace detail

/// Evaluates v on every coalition, indexed by mask.
template <class Scalar>
std::vector<Scalar> tabulate(const NodeCharacteristic<Scalar>& v, const EngineOptions& options = {}) {
  const std::size_t n = v.player_count();
  detail::check_exact_capacity(n, options);
  const std::uint64_t masks = std::uint64_t{1} << n;
  std::vector<Scalar> table(masks);
  const unsigned chunk_bits = std::min<unsigned>(static_cast<unsigned>(n), detail::kTableChunkBits);
  const std::size_t chunks = static_cast<std::size_t>(masks >> chunk_bits);
  detail::parallel_for(chunks, options.threads, [&](std::size_t c) {
    const std::uint64_t begin = std::uint64_t{c} << chunk_bits;
    const std::uint64_t end = begin + (std::uint64_t{1} << chunk_bits);
    for (std::uint64_t mask = begin; mask < end; ++mask) table[mask] = v(Coalition(mask));
  });
  return table;
}

/// Exact Shapley value by full coalition enumeration.
///
/// Every coalition is evaluated once; each player's marginals
/// v(S+i) - v(S) are then summed per coalition size in ascending mask order
/// and combined with the rational weight table. Throws CapacityError above
/// options.exact_player_limit and ContractViolation when v(empty) != 0.
template <class Scalar>
Allocation<Scalar> shapley_exact(const NodeCharacteristic<Scalar>& v, const EngineOptions& options = {},
                                 EngineStats* stats = nullptr) {
  const std::size_t n = v.player_count();
  detail::check_exact_capacity(n, options);
  detail::check_empty_is_zero(v);
  Allocation<Scalar> result = Allocation<Scalar>::Zero(static_cast<Eigen::Index>(n));
  if (n == 0) return result;

  const std::vector<Scalar> table = tabulate(v, options);
  const std::vector<Scalar> weights = detail::converted_weights<Scalar>(n);
  const std::uint64_t masks = std::uint64_t{1} << n;

  detail::parallel_for(n, options.threads, [&](std::size_t i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    std::vector<Scalar> by_size(n, Scalar(0));
    for (std::uint64_t s = 0; s < masks; ++s) {
      if (s & bit) continue;
      const Scalar marginal = table[s | bit] - table[s];
      if (marginal != Scalar(0)) by_size[static_cast<std::size_t>(std::popcount(s))] += marginal;
    }
    result(static_cast<Eigen::Index>(i)) = detail::weigh_by_size(by_size, weights);
  });

  if (stats) {
    stats->evaluations += masks;
    stats->marginals += n * (masks / 2);
  }
  return result;
}

/// Monte-Carlo Shapley estimate from `samples` uniformly drawn player
/// orders. Orders are drawn in fixed blocks, each from its own stream
/// derived from `seed`, and block sums are reduced in block order, so equal
/// (game, samples, seed) give bit-identical results for any thread count.
template <class Scalar>
Allocation<double> shapley_sampled(const NodeCharacteristic<Scalar>& v, std::uint64_t samples, std::uint64_t seed,
                                   const EngineOptions& options = {}, EngineStats* stats = nullptr) {
  if (samples == 0) throw ArgumentError("sample count must be positive");
  detail::check_empty_is_zero(v);
  const std::size_t n = v.player_count();
  constexpr std::uint64_t kBlock = 1024;
  const std::size_t blocks = static_cast<std::size_t>((samples + kBlock - 1) / kBlock);
  std::vector<std::vector<double>> block_sums(blocks, std::vector<double>(n, 0.0));

  detail::parallel_for(blocks, options.threads, [&](std::size_t b) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(b)));
    const std::uint64_t count = std::min<std::uint64_t>(kBlock, samples - b * kBlock);
    std::vector<std::size_t> order(n);
    std::vector<double>& sums = block_sums[b];
    for (std::uint64_t k = 0; k < count; ++k) {
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[detail::bounded_draw(rng, i)]);
      Coalition prefix;
      Scalar previous(0);
      for (std::size_t player : order) {
        prefix = prefix.with(player);
        Scalar current = v(prefix);
        sums[player] += ScalarTraits<Scalar>::to_double(Scalar(current - previous));
        previous = std::move(current);
      }
    }
  });

  Allocation<double> result = Allocation<double>::Zero(static_cast<Eigen::Index>(n));
  for (const auto& sums : block_sums) {
    for (std::size_t i = 0; i < n; ++i) result(static_cast<Eigen::Index>(i)) += sums[i];
  }
  result /= static_cast<double>(samples);
  if (stats) {
    stats->evaluations += samples * n;
    stats->marginals += samples * n;
  }
  return result;
}

/// The component-restricted game v^E(S): sum of v over the connected
/// components of the subgraph induced by S.
template <class Scalar>
NodeCharacteristic<Scalar> component_restricted(const GraphGame<Scalar>& gg) {
  if (gg.v.player_count() != gg.graph.node_count()) {
    throw ArgumentError("game has " + std::to_string(gg.v.player_count()) + " players but graph has " +
                        std::to_string(gg.graph.node_count()) + " nodes");
  }
  return NodeCharacteristic<Scalar>(gg.graph.node_count(), [graph = gg.graph, v = gg.v](Coalition s) {
    Scalar total(0);
    for (Coalition component : connected_components(graph, s)) total += v(component);
    return total;
  });
}

/// Myerson value: the Shapley value of the component-restricted game.
template <class Scalar>
Allocation<Scalar> myerson(const GraphGame<Scalar>& gg, const EngineOptions& options = {},
                           EngineStats* stats = nullptr) {
  return shapley_exact(component_restricted(gg), options, stats);
}

}  // namespace edgeshap
