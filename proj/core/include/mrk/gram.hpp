#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mrk/dataset_io.hpp"
#include "mrk/multires.hpp"

namespace mrk {

/// Dense symmetric matrix; set() writes both triangles with the same value.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  /// Rows/columns `idx` of this matrix, in that order.
  SymMatrix submatrix(std::span<const std::size_t> idx) const;

  static SymMatrix identity(std::size_t n);

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct GramProvenance {
  std::string treeConfig;   // format_tree_config
  std::string kernelSpec;   // format_kernel_spec
  std::uint64_t datasetHash = 0;
  std::string runConfig;

  friend bool operator==(const GramProvenance&, const GramProvenance&) = default;
};

struct GramMatrix {
  SymMatrix values;
  std::vector<std::uint32_t> labels;
  GramProvenance provenance;

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const GramMatrix&, const GramMatrix&) = default;
};

/// values(i, j) = k_multires_factorized(spec, records[i], records[j]) over the
/// upper triangle, mirrored. Rows are handed to `threads` workers (0 means
/// hardware concurrency); every entry has a single writer, so the result does
/// not depend on the thread count. Provenance carries tree and kernel only.
/// Throws EmptyDataset, TreeMismatch.
GramMatrix compute_gram(std::span<const DatasetRecord> records, const MultiresSpec& spec,
                        unsigned threads = 0);
/// As above, plus dataset hash in the provenance.
GramMatrix compute_gram(const Dataset& data, const MultiresSpec& spec, unsigned threads = 0);

/// All eigenvalues, ascending, by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);
inline double min_eigenvalue(const GramMatrix& g) { return min_eigenvalue(g.values); }

// "MRKG1" layout, little-endian: magic[5] | 4 x (u32 len + text): tree
// config, kernel spec, dataset hash (16 hex digits), run config | u64 n |
// n x u32 label | upper triangle row-major (i <= j) as f64.
std::vector<std::uint8_t> encode_gram(const GramMatrix& g);
GramMatrix decode_gram(std::span<const std::uint8_t> bytes);  // CorruptFile
void save_gram(const GramMatrix& g, const std::filesystem::path& path);
GramMatrix load_gram(const std::filesystem::path& path);

/// Provenance as '#' comment lines, then either `i,j,value` triples over the
/// upper triangle or, when dense, a `label,0,1,...` header and one row per
/// record prefixed by its label.
std::string gram_to_csv(const GramMatrix& g, bool dense);

std::string hex64(std::uint64_t v);

}  // namespace mrk
