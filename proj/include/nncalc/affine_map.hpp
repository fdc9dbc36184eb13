#pragma once

#include "nncalc/rational.hpp"

#include <cstddef>
#include <vector>

namespace nncalc {

struct Entry {
  std::size_t row = 0;
  std::size_t col = 0;
  Rational value;
};

// Sparse affine map x -> A x + b with A stored row-major (CSR), entries sorted
// by (row, col), no duplicates and no stored zeros.
class AffineMap {
 public:
  AffineMap() = default;
  // Zero map R^cols -> R^rows.
  AffineMap(std::size_t rows, std::size_t cols);
  // Throws std::invalid_argument on out-of-range or duplicate keys; zeros are dropped.
  AffineMap(std::size_t rows, std::size_t cols, std::vector<Entry> entries, RVec bias);

  // Like the constructor, but duplicate keys are summed.
  static AffineMap accumulate(std::size_t rows, std::size_t cols, std::vector<Entry> entries, RVec bias);
  static AffineMap identity(std::size_t n);
  static AffineMap zero(std::size_t rows, std::size_t cols) { return AffineMap(rows, cols); }
  // x -> (x_{index[0]}, x_{index[1]}, ...).
  static AffineMap selection(std::size_t cols, const std::vector<std::size_t>& index);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const RVec& bias() const { return bias_; }

  // Entries of row i occupy [row_begin(i), row_begin(i+1)).
  std::size_t row_begin(std::size_t i) const { return row_ptr_[i]; }
  std::size_t row_end(std::size_t i) const { return row_ptr_[i + 1]; }
  std::size_t col_at(std::size_t k) const { return col_[k]; }
  const Rational& value_at(std::size_t k) const { return val_[k]; }
  std::vector<Entry> entries() const;
  Rational at(std::size_t row, std::size_t col) const;

  std::size_t l0() const { return val_.size(); }
  std::size_t l0_col_max() const;  // max entries in a column
  std::size_t l0_row_max() const;  // max entries in a row
  std::size_t bias_nnz() const;
  bool row_is_zero(std::size_t i) const { return row_ptr_[i] == row_ptr_[i + 1]; }

  RVec apply(const RVec& x) const;
  // Linear part only.
  RVec apply_linear(const RVec& x) const;

  AffineMap scaled(const Rational& a) const;
  AffineMap with_bias(RVec bias) const;
  // Keep only the listed rows / columns (in the given order).
  AffineMap select_rows(const std::vector<std::size_t>& rows) const;
  AffineMap select_cols(const std::vector<std::size_t>& cols) const;

  friend bool operator==(const AffineMap& a, const AffineMap& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_;
  RVec val_;
  RVec bias_;
};

// outer ∘ inner: x -> outer(inner(x)).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

// Rows of all maps stacked, shared input: x -> (A_1 x, ..., A_n x).
AffineMap vstack(const std::vector<const AffineMap*>& maps);

// Block-diagonal: (x_1, ..., x_n) -> (A_1 x_1, ..., A_n x_n).
AffineMap block_diag(const std::vector<const AffineMap*>& maps);

// Columns concatenated and outputs added: (x_1, ..., x_n) -> Σ A_i x_i (biases added).
AffineMap hsum(const std::vector<const AffineMap*>& maps);

}  // namespace nncalc
