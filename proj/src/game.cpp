#include "edgeshap/game.hpp"

namespace edgeshap {

std::vector<Rational> shapley_weights(std::size_t n) {
  std::vector<BigInt> factorial(n + 1, BigInt(1));
  for (std::size_t k = 1; k <= n; ++k) factorial[k] = factorial[k - 1] * k;
  std::vector<Rational> weights;
  weights.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    weights.emplace_back(factorial[s] * factorial[n - s - 1], factorial[n]);
  }
  return weights;
}

}  // namespace edgeshap
