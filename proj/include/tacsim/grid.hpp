#pragma once

#include <cstddef>
#include <vector>

#include "tacsim/errors.hpp"

namespace tacsim {

// Dense row-major rows x cols array.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows * cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  T& at(int i, int j) {
    check(i, j);
    return data_[index(i, j)];
  }
  const T& at(int i, int j) const {
    check(i, j);
    return data_[index(i, j)];
  }

  const std::vector<T>& values() const { return data_; }
  std::vector<T>& values() { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i * cols_ + j);
  }
  void check(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw IndexError("grid index out of range");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

}  // namespace tacsim
