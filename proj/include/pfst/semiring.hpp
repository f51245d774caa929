#pragma once

#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace pfst {

// ---------------------------------------------------------------------------
// Probability semiring (sum, product).

constexpr double prob_mul(double a, double b) { return a * b; }
constexpr double prob_add(double a, double b) { return a + b; }

// ---------------------------------------------------------------------------
// Log semiring. Values are natural logs; -inf is the zero weight.

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();
inline constexpr double kLogOne = 0.0;

constexpr double log_mul(double a, double b) {
  if (a == kLogZero || b == kLogZero) return kLogZero;
  return a + b;
}

// log(exp a + exp b), evaluated as hi + log1p(exp(lo - hi)) with lo <= hi.
// Operands are ordered first, so the result does not depend on argument order.
inline double log_add(double a, double b) {
  const double hi = a < b ? b : a;
  const double lo = a < b ? a : b;
  if (lo == kLogZero) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

// Same contract with single-precision transcendentals.
inline double log_add_fast(double a, double b) {
  const double hi = a < b ? b : a;
  const double lo = a < b ? a : b;
  if (lo == kLogZero) return hi;
  return hi + static_cast<double>(std::log1p(std::exp(static_cast<float>(lo - hi))));
}

// ---------------------------------------------------------------------------
// Max semiring over (weight, back-pointer) pairs, realized as packed words.

enum class WeightDomain { log, prob };

inline constexpr std::uint32_t kNullBackPointer = 0xFFFFFFFFu;
inline constexpr std::uint32_t kMaxBackPointer = 0x7FFFFFFFu;

// Order-preserving map from non-NaN floats to unsigned integers.
// Nonnegative patterns get the sign bit set; negative patterns are inverted.
// Throws std::domain_error on NaN.
std::uint32_t order_map(float x);
float order_unmap(std::uint32_t code);

constexpr std::uint32_t order_map_unchecked(float x) {
  const auto bits = std::bit_cast<std::uint32_t>(x);
  return (bits & 0x80000000u) ? ~bits : (bits | 0x80000000u);
}

constexpr float order_unmap_unchecked(std::uint32_t code) {
  const std::uint32_t bits = (code & 0x80000000u) ? (code & 0x7FFFFFFFu) : ~code;
  return std::bit_cast<float>(bits);
}

// 64-bit chart cell: order-mapped weight in the high word, back-pointer
// (arc index) in the low word. Unsigned comparison of cells is max_combine.
struct PackedCell {
  std::uint64_t word = 0;

  friend constexpr auto operator<=>(const PackedCell&, const PackedCell&) = default;
};

struct ScoredArc {
  float weight = 0.0f;
  std::uint32_t back_pointer = kNullBackPointer;

  friend constexpr bool operator==(const ScoredArc&, const ScoredArc&) = default;
};

// Throws std::domain_error on NaN and std::out_of_range when the
// back-pointer is neither < 2^31 nor the null marker.
PackedCell pack(float weight, std::uint32_t back_pointer);
ScoredArc unpack(PackedCell cell);

constexpr PackedCell pack_unchecked(float weight, std::uint32_t back_pointer) {
  return {(std::uint64_t{order_map_unchecked(weight)} << 32) | back_pointer};
}

constexpr float cell_weight(PackedCell cell) {
  return order_unmap_unchecked(static_cast<std::uint32_t>(cell.word >> 32));
}

constexpr std::uint32_t cell_back_pointer(PackedCell cell) {
  return static_cast<std::uint32_t>(cell.word);
}

// Larger weight wins; on equal weights the larger back-pointer wins, which
// is what integer max over packed words yields.
ScoredArc max_combine(const ScoredArc& a, const ScoredArc& b);

constexpr PackedCell packed_max(PackedCell a, PackedCell b) { return a < b ? b : a; }

// Semiring identities of the Viterbi chart in either domain.
constexpr float viterbi_one(WeightDomain d) { return d == WeightDomain::log ? 0.0f : 1.0f; }
constexpr float viterbi_zero(WeightDomain d) {
  return d == WeightDomain::log ? -std::numeric_limits<float>::infinity() : 0.0f;
}

constexpr PackedCell empty_cell(WeightDomain d) { return pack_unchecked(viterbi_zero(d), kNullBackPointer); }

// Viterbi extension of a predecessor weight by one arc. `log_weight` and
// `prob_weight` are the arc's weight in double precision; the product is
// formed in single precision so every backend produces the same bits.
constexpr float viterbi_extend(WeightDomain d, float prev, double log_weight, double prob_weight) {
  return d == WeightDomain::log ? prev + static_cast<float>(log_weight)
                                : prev * static_cast<float>(prob_weight);
}

// Natural log of a chart value.
inline double viterbi_to_log(WeightDomain d, float value) {
  return d == WeightDomain::log ? static_cast<double>(value) : std::log(static_cast<double>(value));
}

}  // namespace pfst
