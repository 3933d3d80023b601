#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mvbd {

// Dense row-major matrix. Time-indexed grids in this codebase allocate
// cols = t_max + 1 and use 1-based time columns (column 0 stays unused);
// covariate-indexed grids are 0-based.
template <typename T>
class Grid {
 public:
  Grid() : rows_(0), cols_(0) {}
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return v_[r * cols_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return v_[r * cols_ + c];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<T>& data() { return v_; }
  const std::vector<T>& data() const { return v_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_, cols_;
  std::vector<T> v_;
};

using GridD = Grid<double>;
using GridB = Grid<std::uint8_t>;

}  // namespace mvbd
