#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rvar {

// n x d observations, row-major. Immutable once built.
class SampleMatrix {
 public:
  // Throws DomainError on d < 2, a ragged buffer, or non-finite entries.
  SampleMatrix(std::size_t d, std::vector<double> row_major);

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return d_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * d_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * d_, d_}; }
  std::vector<double> column(std::size_t j) const;
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const SampleMatrix&) const = default;

 private:
  std::size_t d_;
  std::size_t n_;
  std::vector<double> data_;
};

}  // namespace rvar
