#include "rvar/sample_matrix.hpp"

#include <cmath>

#include "rvar/errors.hpp"

namespace rvar {

SampleMatrix::SampleMatrix(std::size_t d, std::vector<double> row_major)
    : d_(d), n_(0), data_(std::move(row_major)) {
  if (d_ < 2) throw DomainError("sample matrix needs at least two columns");
  if (data_.empty() || data_.size() % d_ != 0) throw DomainError("sample matrix buffer is ragged or empty");
  for (double v : data_)
    if (!std::isfinite(v)) throw DomainError("sample matrix entries must be finite");
  n_ = data_.size() / d_;
}

std::vector<double> SampleMatrix::column(std::size_t j) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = data_[i * d_ + j];
  return out;
}

}  // namespace rvar
