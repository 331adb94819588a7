#include "gapidx/common.hpp"

#include <bit>
#include <cmath>

namespace gapidx {

unsigned floor_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("floor_log2(0)");
  return static_cast<unsigned>(std::bit_width(x) - 1);
}

unsigned ceil_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("ceil_log2(0)");
  return x == 1 ? 0U : static_cast<unsigned>(std::bit_width(x - 1));
}

std::uint64_t ceil_sqrt(std::uint64_t x) {
  auto t = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while (t * t < x) ++t;
  while (t > 0 && (t - 1) * (t - 1) >= x) --t;
  return t;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Element Rng::uniform(Element lo, Element hi) {
  if (lo > hi) throw std::invalid_argument("Rng::uniform: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~std::uint64_t{0}) return static_cast<Element>(next());
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return static_cast<Element>(static_cast<std::uint64_t>(lo) + v % range);
}

}  // namespace gapidx
