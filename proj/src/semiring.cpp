#include "pfst/semiring.hpp"

#include <stdexcept>

namespace pfst {

std::uint32_t order_map(float x) {
  if (std::isnan(x)) throw std::domain_error("order_map: NaN weight");
  return order_map_unchecked(x);
}

float order_unmap(std::uint32_t code) { return order_unmap_unchecked(code); }

PackedCell pack(float weight, std::uint32_t back_pointer) {
  if (back_pointer > kMaxBackPointer && back_pointer != kNullBackPointer) {
    throw std::out_of_range("back-pointer " + std::to_string(back_pointer) + " overflows 31 bits");
  }
  (void)order_map(weight);
  return pack_unchecked(weight, back_pointer);
}

ScoredArc unpack(PackedCell cell) { return {cell_weight(cell), cell_back_pointer(cell)}; }

ScoredArc max_combine(const ScoredArc& a, const ScoredArc& b) {
  // Weights compare through order_map so that -0 < +0, as in the packed word.
  const std::uint32_t wa = order_map(a.weight);
  const std::uint32_t wb = order_map(b.weight);
  if (wa != wb) return wa > wb ? a : b;
  return a.back_pointer >= b.back_pointer ? a : b;
}

}  // namespace pfst
