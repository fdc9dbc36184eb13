#include "nncalc/affine_map.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace nncalc {

AffineMap::AffineMap(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0), bias_(rows) {}

AffineMap::AffineMap(std::size_t rows, std::size_t cols, std::vector<Entry> entries, RVec bias)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0), bias_(std::move(bias)) {
  if (bias_.size() != rows) throw std::invalid_argument("bias length " + std::to_string(bias_.size()) + " != rows " + std::to_string(rows));
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.row >= rows || e.col >= cols)
      throw std::invalid_argument("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") out of range");
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col)
      throw std::invalid_argument("duplicate entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ")");
    if (sgn(e.value) == 0) continue;
    col_.push_back(e.col);
    val_.push_back(e.value);
    ++row_ptr_[e.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) row_ptr_[i + 1] += row_ptr_[i];
}

AffineMap AffineMap::accumulate(std::size_t rows, std::size_t cols, std::vector<Entry> entries, RVec bias) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (auto& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) merged.back().value += e.value;
    else merged.push_back(std::move(e));
  }
  return AffineMap(rows, cols, std::move(merged), std::move(bias));
}

AffineMap AffineMap::identity(std::size_t n) {
  std::vector<Entry> e;
  e.reserve(n);
  for (std::size_t i = 0; i < n; ++i) e.push_back({i, i, Rational(1)});
  return AffineMap(n, n, std::move(e), RVec(n));
}

AffineMap AffineMap::selection(std::size_t cols, const std::vector<std::size_t>& index) {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < index.size(); ++i) e.push_back({i, index[i], Rational(1)});
  return AffineMap(index.size(), cols, std::move(e), RVec(index.size()));
}

std::vector<Entry> AffineMap::entries() const {
  std::vector<Entry> out;
  out.reserve(val_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({i, col_[k], val_[k]});
  return out;
}

Rational AffineMap::at(std::size_t row, std::size_t col) const {
  auto b = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  auto e = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  auto it = std::lower_bound(b, e, col);
  if (it != e && *it == col) return val_[static_cast<std::size_t>(it - col_.begin())];
  return Rational(0);
}

std::size_t AffineMap::l0_col_max() const {
  std::vector<std::size_t> count(cols_, 0);
  for (auto c : col_) ++count[c];
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

std::size_t AffineMap::l0_row_max() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows_; ++i) best = std::max(best, row_ptr_[i + 1] - row_ptr_[i]);
  return best;
}

std::size_t AffineMap::bias_nnz() const {
  return static_cast<std::size_t>(std::count_if(bias_.begin(), bias_.end(), [](const Rational& q) { return sgn(q) != 0; }));
}

RVec AffineMap::apply_linear(const RVec& x) const {
  if (x.size() != cols_) throw std::invalid_argument("input length mismatch");
  RVec y(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[i] += val_[k] * x[col_[k]];
  return y;
}

RVec AffineMap::apply(const RVec& x) const {
  RVec y = apply_linear(x);
  for (std::size_t i = 0; i < rows_; ++i) y[i] += bias_[i];
  return y;
}

AffineMap AffineMap::scaled(const Rational& a) const {
  if (sgn(a) == 0) return AffineMap(rows_, cols_);
  AffineMap out = *this;
  for (auto& v : out.val_) v *= a;
  for (auto& b : out.bias_) b *= a;
  return out;
}

AffineMap AffineMap::with_bias(RVec bias) const {
  if (bias.size() != rows_) throw std::invalid_argument("bias length mismatch");
  AffineMap out = *this;
  out.bias_ = std::move(bias);
  return out;
}

AffineMap AffineMap::select_rows(const std::vector<std::size_t>& rows) const {
  std::vector<Entry> e;
  RVec b;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t r = rows[i];
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) e.push_back({i, col_[k], val_[k]});
    b.push_back(bias_[r]);
  }
  return AffineMap(rows.size(), cols_, std::move(e), std::move(b));
}

AffineMap AffineMap::select_cols(const std::vector<std::size_t>& cols) const {
  std::vector<long> where(cols_, -1);
  for (std::size_t j = 0; j < cols.size(); ++j) where[cols[j]] = static_cast<long>(j);
  std::vector<Entry> e;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (where[col_[k]] >= 0) e.push_back({i, static_cast<std::size_t>(where[col_[k]]), val_[k]});
  return AffineMap(rows_, cols.size(), std::move(e), bias_);
}

bool operator==(const AffineMap& a, const AffineMap& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ && a.col_ == b.col_ &&
         a.val_ == b.val_ && a.bias_ == b.bias_;
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  if (outer.cols() != inner.rows())
    throw std::invalid_argument("compose: outer expects " + std::to_string(outer.cols()) + " inputs, inner gives " +
                                std::to_string(inner.rows()));
  std::vector<Entry> e;
  RVec bias(outer.rows());
  RVec acc(inner.cols());
  std::vector<char> touched(inner.cols(), 0);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < outer.rows(); ++i) {
    bias[i] = outer.bias()[i];
    cols.clear();
    for (std::size_t k = outer.row_begin(i); k < outer.row_end(i); ++k) {
      std::size_t mid = outer.col_at(k);
      const Rational& a = outer.value_at(k);
      bias[i] += a * inner.bias()[mid];
      for (std::size_t t = inner.row_begin(mid); t < inner.row_end(mid); ++t) {
        std::size_t c = inner.col_at(t);
        if (!touched[c]) {
          touched[c] = 1;
          cols.push_back(c);
          acc[c] = 0;
        }
        acc[c] += a * inner.value_at(t);
      }
    }
    std::sort(cols.begin(), cols.end());
    for (auto c : cols) {
      if (sgn(acc[c]) != 0) e.push_back({i, c, acc[c]});
      touched[c] = 0;
    }
  }
  return AffineMap(outer.rows(), inner.cols(), std::move(e), std::move(bias));
}

AffineMap vstack(const std::vector<const AffineMap*>& maps) {
  if (maps.empty()) throw std::invalid_argument("vstack of nothing");
  std::size_t cols = maps.front()->cols(), rows = 0;
  std::vector<Entry> e;
  RVec bias;
  for (const auto* m : maps) {
    if (m->cols() != cols) throw std::invalid_argument("vstack: input dimensions differ");
    for (auto en : m->entries()) {
      en.row += rows;
      e.push_back(std::move(en));
    }
    bias.insert(bias.end(), m->bias().begin(), m->bias().end());
    rows += m->rows();
  }
  return AffineMap(rows, cols, std::move(e), std::move(bias));
}

AffineMap block_diag(const std::vector<const AffineMap*>& maps) {
  std::size_t rows = 0, cols = 0;
  std::vector<Entry> e;
  RVec bias;
  for (const auto* m : maps) {
    for (auto en : m->entries()) {
      en.row += rows;
      en.col += cols;
      e.push_back(std::move(en));
    }
    bias.insert(bias.end(), m->bias().begin(), m->bias().end());
    rows += m->rows();
    cols += m->cols();
  }
  return AffineMap(rows, cols, std::move(e), std::move(bias));
}

AffineMap hsum(const std::vector<const AffineMap*>& maps) {
  if (maps.empty()) throw std::invalid_argument("hsum of nothing");
  std::size_t rows = maps.front()->rows(), cols = 0;
  std::vector<Entry> e;
  RVec bias(rows);
  for (const auto* m : maps) {
    if (m->rows() != rows) throw std::invalid_argument("hsum: output dimensions differ");
    for (auto en : m->entries()) {
      en.col += cols;
      e.push_back(std::move(en));
    }
    for (std::size_t i = 0; i < rows; ++i) bias[i] += m->bias()[i];
    cols += m->cols();
  }
  return AffineMap(rows, cols, std::move(e), std::move(bias));
}

}  // namespace nncalc
