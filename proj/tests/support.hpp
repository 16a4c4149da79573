#pragma once

#include "yamabe/polycos.hpp"
#include "yamabe/rational.hpp"

#include <random>
#include <vector>

namespace testing_support {

inline yamabe::Rational random_rational(std::mt19937_64& rng, long span = 9) {
  std::uniform_int_distribution<long> num(-span, span);
  std::uniform_int_distribution<long> den(1, span);
  return yamabe::make_rational(num(rng), den(rng));
}

inline yamabe::PolyCos random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<yamabe::Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& q : c) q = random_rational(rng);
  return yamabe::PolyCos(std::move(c));
}

/// Schoolbook product straight from the coefficient definition.
inline yamabe::PolyCos naive_product(const yamabe::PolyCos& a, const yamabe::PolyCos& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<yamabe::Rational> c(static_cast<std::size_t>(a.degree() + b.degree()) + 1);
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) c[static_cast<std::size_t>(i + j)] += a.coefficient(i) * b.coefficient(j);
  return yamabe::PolyCos(std::move(c));
}

}  // namespace testing_support
