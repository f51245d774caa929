#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pfst {

// Dense (n+1) x |Q| grid of cells, row-major by time step.
template <class Cell>
class Chart {
 public:
  Chart() = default;
  Chart(std::size_t num_rows, std::size_t num_states, Cell fill)
      : num_rows_(num_rows), num_states_(num_states), cells_(num_rows * num_states, fill) {}

  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_states() const { return num_states_; }

  std::span<Cell> row(std::size_t t) { return {cells_.data() + t * num_states_, num_states_}; }
  std::span<const Cell> row(std::size_t t) const {
    return {cells_.data() + t * num_states_, num_states_};
  }

  Cell& at(std::size_t t, std::size_t q) { return cells_[t * num_states_ + q]; }
  const Cell& at(std::size_t t, std::size_t q) const { return cells_[t * num_states_ + q]; }

  std::span<const Cell> cells() const { return cells_; }

  friend bool operator==(const Chart&, const Chart&) = default;

 private:
  std::size_t num_rows_ = 0;
  std::size_t num_states_ = 0;
  std::vector<Cell> cells_;
};

}  // namespace pfst
