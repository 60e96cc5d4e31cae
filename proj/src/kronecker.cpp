#include "sgbc/kronecker.hpp"

#include <algorithm>

#include "sgbc/parallel.hpp"
#include "sgbc/simd.hpp"

namespace sgbc {

namespace {

bool is_identity(const SparseMatrix& s) {
  if (s.rows() != s.cols()) return false;
  for (Index r = 0; r < s.outerSize(); ++r) {
    int count = 0;
    for (SparseMatrix::InnerIterator it(s, r); it; ++it) {
      if (it.value() == 0.0) continue;
      if (it.col() != r || it.value() != 1.0) return false;
      ++count;
    }
    if (count != 1) return false;
  }
  return true;
}

constexpr std::size_t kRowsPerChunk = 64;

}  // namespace

KroneckerSum::KroneckerSum(std::vector<Term> terms) {
  if (terms.empty()) throw DimensionError("Kronecker sum needs at least one term");
  spatial_rows_ = terms[0].spatial.rows();
  spatial_cols_ = terms[0].spatial.cols();
  modes_out_ = terms[0].stochastic.rows();
  modes_in_ = terms[0].stochastic.cols();
  std::vector<SparseMatrix> spatial_t;
  for (auto& t : terms) {
    if (t.spatial.rows() != spatial_rows_ || t.spatial.cols() != spatial_cols_ ||
        t.stochastic.rows() != modes_out_ || t.stochastic.cols() != modes_in_)
      throw DimensionError("Kronecker sum terms have inconsistent shapes");
    t.stochastic.makeCompressed();
    SparseMatrix st = t.stochastic.transpose();
    st.makeCompressed();
    identity_.push_back(is_identity(t.stochastic) ? 1 : 0);
    stochastic_.push_back(std::move(t.stochastic));
    stochastic_t_.push_back(std::move(st));
    SparseMatrix at = t.spatial.transpose();
    at.makeCompressed();
    spatial_t.push_back(std::move(at));
  }
  std::vector<const SparseMatrix*> fw;
  std::vector<const SparseMatrix*> bw;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    fw.push_back(&terms[k].spatial);
    bw.push_back(&spatial_t[k]);
  }
  forward_ = merge(fw, spatial_rows_);
  backward_ = merge(bw, spatial_cols_);
}

KroneckerSum::Merged KroneckerSum::merge(const std::vector<const SparseMatrix*>& mats, Index rows) {
  const std::size_t nt = mats.size();
  Merged m;
  m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  struct Entry {
    int col;
    std::size_t term;
    double value;
  };
  std::vector<Entry> entries;
  for (Index r = 0; r < rows; ++r) {
    entries.clear();
    for (std::size_t t = 0; t < nt; ++t)
      for (SparseMatrix::InnerIterator it(*mats[t], r); it; ++it)
        entries.push_back({static_cast<int>(it.col()), t, it.value()});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    int last = -1;
    for (const auto& e : entries) {
      if (e.col != last) {
        m.cols.push_back(e.col);
        m.vals.resize(m.vals.size() + nt, 0.0);
        last = e.col;
      }
      m.vals[(m.cols.size() - 1) * nt + e.term] += e.value;
    }
    m.row_ptr[static_cast<std::size_t>(r) + 1] = static_cast<int>(m.cols.size());
  }
  return m;
}

void KroneckerSum::apply_merged(const Merged& a, bool transpose_s, const double* x, std::size_t width, double* y,
                                Index modes_out, bool accumulate) const {
  const std::size_t nt = stochastic_.size();
  const Index rows = static_cast<Index>(a.row_ptr.size()) - 1;
  const auto out_width = static_cast<std::size_t>(modes_out);
  if (!accumulate) std::fill(y, y + static_cast<std::size_t>(rows) * out_width, 0.0);
  const auto& k = simd::kernels();
  const std::size_t chunks = (static_cast<std::size_t>(rows) + kRowsPerChunk - 1) / kRowsPerChunk;
  parallel::parallel_for(chunks, [&](std::size_t chunk) {
    std::vector<double> acc(nt * width);
    const Index begin = static_cast<Index>(chunk * kRowsPerChunk);
    const Index end = std::min<Index>(rows, begin + static_cast<Index>(kRowsPerChunk));
    for (Index r = begin; r < end; ++r) {
      const int e0 = a.row_ptr[static_cast<std::size_t>(r)];
      const int e1 = a.row_ptr[static_cast<std::size_t>(r) + 1];
      if (e0 == e1) continue;
      std::fill(acc.begin(), acc.end(), 0.0);
      k.csr_terms_row(a.cols.data() + e0, a.vals.data() + static_cast<std::size_t>(e0) * nt,
                      static_cast<std::size_t>(e1 - e0), nt, x, width, acc.data());
      double* out = y + static_cast<std::size_t>(r) * out_width;
      for (std::size_t t = 0; t < nt; ++t) {
        const double* at = acc.data() + t * width;
        if (identity_[t]) {
          k.axpy(1.0, at, out, width);
          continue;
        }
        // forward:   out[i] += sum_j S_t[i, j] at[j]
        // transpose: out[i] += sum_j S_t[j, i] at[j], i.e. rows of S_t^T
        const SparseMatrix& st = transpose_s ? stochastic_t_[t] : stochastic_[t];
        for (Index i = 0; i < st.outerSize(); ++i) {
          double sum = 0.0;
          for (SparseMatrix::InnerIterator it(st, i); it; ++it) sum += it.value() * at[it.col()];
          out[i] += sum;
        }
      }
    }
  });
}

void KroneckerSum::apply(const double* x, double* y, bool accumulate) const {
  apply_merged(forward_, false, x, static_cast<std::size_t>(modes_in_), y, modes_out_, accumulate);
}

void KroneckerSum::apply_transpose(const double* x, double* y, bool accumulate) const {
  apply_merged(backward_, true, x, static_cast<std::size_t>(modes_out_), y, modes_in_, accumulate);
}

void KroneckerSum::apply(const RowMatrix& x, RowMatrix& y, bool accumulate) const {
  if (x.rows() != spatial_cols_ || x.cols() != modes_in_) throw DimensionError("Kronecker apply: input shape mismatch");
  if (accumulate && (y.rows() != spatial_rows_ || y.cols() != modes_out_))
    throw DimensionError("Kronecker accumulate target has the wrong shape");
  if (!accumulate) y.resize(spatial_rows_, modes_out_);
  apply(x.data(), y.data(), accumulate);
}

void KroneckerSum::apply_transpose(const RowMatrix& x, RowMatrix& y, bool accumulate) const {
  if (x.rows() != spatial_rows_ || x.cols() != modes_out_)
    throw DimensionError("Kronecker transpose apply: input shape mismatch");
  if (accumulate && (y.rows() != spatial_cols_ || y.cols() != modes_in_))
    throw DimensionError("Kronecker accumulate target has the wrong shape");
  if (!accumulate) y.resize(spatial_cols_, modes_in_);
  apply_transpose(x.data(), y.data(), accumulate);
}

DenseMatrix KroneckerSum::materialize() const {
  DenseMatrix out = DenseMatrix::Zero(rows(), cols());
  const std::size_t nt = stochastic_.size();
  for (Index r = 0; r < spatial_rows_; ++r)
    for (int e = forward_.row_ptr[static_cast<std::size_t>(r)]; e < forward_.row_ptr[static_cast<std::size_t>(r) + 1];
         ++e) {
      const Index c = forward_.cols[static_cast<std::size_t>(e)];
      for (std::size_t t = 0; t < nt; ++t) {
        const double a = forward_.vals[static_cast<std::size_t>(e) * nt + t];
        if (a == 0.0) continue;
        const SparseMatrix& s = stochastic_[t];
        for (Index i = 0; i < s.outerSize(); ++i)
          for (SparseMatrix::InnerIterator it(s, i); it; ++it)
            out(r * modes_out_ + i, c * modes_in_ + it.col()) += a * it.value();
      }
    }
  return out;
}

}  // namespace sgbc
