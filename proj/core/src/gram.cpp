#include "mrk/gram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "byte_io.hpp"
#include "mrk/error.hpp"
#include "mrk/text.hpp"

namespace mrk {
namespace {

constexpr std::string_view kMagic = "MRKG1";

std::string tree_config_text(const IndexTree& tree) {
  // Uniform trees only carry one epsilon; report the root's.
  TreeConfig cfg;
  cfg.branching = tree.is_leaf(0) ? 1 : static_cast<std::uint32_t>(tree.node(0).children.size());
  cfg.depth = tree.depth();
  cfg.epsilon = tree.epsilon(0);
  return format_tree_config(cfg);
}

}  // namespace

SymMatrix SymMatrix::submatrix(std::span<const std::size_t> idx) const {
  SymMatrix out(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a; b < idx.size(); ++b) out.set(a, b, (*this)(idx[a], idx[b]));
  }
  return out;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

GramMatrix compute_gram(std::span<const DatasetRecord> records, const MultiresSpec& spec, unsigned threads) {
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "no records to compare");
  for (const auto& rec : records) require_tree(spec.tree, rec.nested);

  const std::size_t n = records.size();
  GramMatrix g;
  g.values = SymMatrix(n);
  g.labels.reserve(n);
  for (const auto& rec : records) g.labels.push_back(rec.label);
  g.provenance.treeConfig = tree_config_text(spec.tree);
  g.provenance.kernelSpec = format_kernel_spec(spec.base);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  // Rows are claimed dynamically; row i covers columns i..n-1, so early rows
  // are the long ones and get picked up first.
  std::atomic<std::size_t> nextRow{0};
  auto worker = [&] {
    for (std::size_t i = nextRow.fetch_add(1); i < n; i = nextRow.fetch_add(1)) {
      for (std::size_t j = i; j < n; ++j) {
        g.values.set(i, j, k_multires_factorized(spec, records[i].nested, records[j].nested));
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return g;
}

GramMatrix compute_gram(const Dataset& data, const MultiresSpec& spec, unsigned threads) {
  GramMatrix g = compute_gram(std::span<const DatasetRecord>(data.records), spec, threads);
  g.provenance.datasetHash = dataset_hash(data);
  return g;
}

std::vector<double> symmetric_eigenvalues(const SymMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double scale = 0.0;
  for (double v : a) scale += v * v;
  const double tiny = 1e-30 * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    }
    if (off <= tiny) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_eigenvalue(const SymMatrix& m) {
  if (m.size() == 0) throw Error(ErrorCode::InvalidArgument, "eigenvalue of an empty matrix");
  return symmetric_eigenvalues(m).front();
}

std::vector<std::uint8_t> encode_gram(const GramMatrix& g) {
  detail::ByteWriter w;
  w.raw(kMagic);
  w.text(g.provenance.treeConfig);
  w.text(g.provenance.kernelSpec);
  w.text(hex64(g.provenance.datasetHash));
  w.text(g.provenance.runConfig);
  const std::size_t n = g.size();
  w.u64(n);
  for (auto label : g.labels) w.u32(label);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) w.f64(g.values(i, j));
  }
  return w.take();
}

GramMatrix decode_gram(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect_magic(kMagic);
  GramMatrix g;
  g.provenance.treeConfig = r.text();
  g.provenance.kernelSpec = r.text();
  const std::string hash = r.text();
  try {
    if (hash.size() != 16) throw Error(ErrorCode::CorruptFile, "bad dataset hash");
    g.provenance.datasetHash = std::stoull(hash, nullptr, 16);
  } catch (const std::exception&) {
    throw Error(ErrorCode::CorruptFile, "bad dataset hash field");
  }
  g.provenance.runConfig = r.text();
  const std::uint64_t n = r.u64();
  // Labels plus triangle must fit exactly in what is left.
  if (n > (1u << 20) || r.remaining() != n * 4 + n * (n + 1) / 2 * 8) {
    throw Error(ErrorCode::CorruptFile, "payload size does not match n = " + std::to_string(n));
  }
  g.labels.resize(n);
  for (auto& label : g.labels) label = r.u32();
  g.values = SymMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) g.values.set(i, j, r.f64());
  }
  r.expect_end();
  return g;
}

void save_gram(const GramMatrix& g, const std::filesystem::path& path) { detail::write_file(path, encode_gram(g)); }

GramMatrix load_gram(const std::filesystem::path& path) { return decode_gram(detail::read_file(path)); }

std::string gram_to_csv(const GramMatrix& g, bool dense) {
  std::string out;
  out += "# tree: " + g.provenance.treeConfig + "\n";
  out += "# kernel: " + g.provenance.kernelSpec + "\n";
  out += "# dataset: " + hex64(g.provenance.datasetHash) + "\n";
  out += "# run: " + g.provenance.runConfig + "\n";
  const std::size_t n = g.size();
  if (dense) {
    out += "label";
    for (std::size_t j = 0; j < n; ++j) out += "," + std::to_string(j);
    out += "\n";
    for (std::size_t i = 0; i < n; ++i) {
      out += std::to_string(g.labels[i]);
      for (std::size_t j = 0; j < n; ++j) out += "," + format_real(g.values(i, j));
      out += "\n";
    }
  } else {
    out += "i,j,value\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        out += std::to_string(i) + "," + std::to_string(j) + "," + format_real(g.values(i, j)) + "\n";
      }
    }
  }
  return out;
}

}  // namespace mrk
