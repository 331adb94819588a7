#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gapidx {

// Signed so that reductions can negate and offset elements freely.
using Element = std::int64_t;
using SetId = std::uint32_t;

// Input that does not parse or violates a documented format.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic overflow guards and memory budgets.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An ordered pair of positions or elements; (a, b) for set queries,
// (i, j) for string queries.
struct ElementPair {
  Element first = 0;
  Element second = 0;

  friend auto operator<=>(const ElementPair&, const ElementPair&) = default;
};

unsigned floor_log2(std::uint64_t x);
unsigned ceil_log2(std::uint64_t x);

// Smallest t with t * t >= x.
std::uint64_t ceil_sqrt(std::uint64_t x);

// Floor division that rounds toward negative infinity.
constexpr Element floor_div(Element a, Element b) {
  Element q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

std::uint64_t mix64(std::uint64_t x);

// Deterministic generator. mt19937_64 output is fixed by the standard; the
// bounded draws below avoid the implementation-defined std distributions so
// generated instances are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [lo, hi], inclusive.
  Element uniform(Element lo, Element hi);

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() & 1U) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gapidx
