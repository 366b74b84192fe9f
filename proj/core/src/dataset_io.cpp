#include "mrk/dataset_io.hpp"

#include <fstream>
#include <iterator>
#include <optional>

#include "byte_io.hpp"
#include "mrk/error.hpp"
#include "mrk/text.hpp"

namespace mrk {
namespace detail {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

namespace {

constexpr std::string_view kMagic = "MRKD1";

std::string tree_text(const Dataset& d) {
  return "branching=" + std::to_string(d.branching) + " depth=" + std::to_string(d.depth);
}

void encode_records(detail::ByteWriter& w, const std::vector<DatasetRecord>& records) {
  w.u64(records.size());
  for (const auto& rec : records) {
    w.u32(rec.label);
    const auto leaves = rec.nested.leaf_measures();
    w.u32(static_cast<std::uint32_t>(leaves.size()));
    for (const auto& leaf : leaves) {
      w.u32(static_cast<std::uint32_t>(leaf.support_size()));
      for (const auto& e : leaf.entries()) {
        w.u32(e.index.value);
        w.f64(e.mass);
      }
    }
  }
}

}  // namespace

std::vector<std::uint8_t> encode_dataset(const Dataset& data) {
  detail::ByteWriter w;
  w.raw(kMagic);
  w.u32(data.spaceSize);
  w.text(tree_text(data));
  w.text(data.runConfig);
  encode_records(w, data.records);
  return w.take();
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect_magic(kMagic);
  Dataset d;
  d.spaceSize = r.u32();
  try {
    const TreeConfig cfg = parse_tree_config(r.text());
    d.branching = cfg.branching;
    d.depth = cfg.depth;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptFile) throw;
    throw Error(ErrorCode::CorruptFile, std::string("bad tree config: ") + e.what());
  }
  d.runConfig = r.text();

  std::optional<IndexTree> tree;
  try {
    tree.emplace(d.tree());
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptFile, std::string("bad tree config: ") + e.what());
  }
  const std::uint64_t count = r.u64();
  // Each record needs at least 8 bytes; reject absurd counts before reserving.
  if (count > r.remaining() / 8) throw Error(ErrorCode::CorruptFile, "record count exceeds file size");
  d.records.reserve(count);
  std::vector<MassEntry> entries;
  for (std::uint64_t k = 0; k < count; ++k) {
    DatasetRecord rec;
    rec.label = r.u32();
    const std::uint32_t nLeaves = r.u32();
    if (nLeaves != tree->leaf_count()) {
      throw Error(ErrorCode::CorruptFile, "record " + std::to_string(k) + " has " + std::to_string(nLeaves) +
                                              " leaves, tree has " + std::to_string(tree->leaf_count()));
    }
    std::vector<SubMeasure> leaves;
    leaves.reserve(nLeaves);
    for (std::uint32_t l = 0; l < nLeaves; ++l) {
      const std::uint32_t n = r.u32();
      if (n > r.remaining() / 12) throw Error(ErrorCode::CorruptFile, "file truncated");
      entries.clear();
      for (std::uint32_t e = 0; e < n; ++e) {
        const std::uint32_t index = r.u32();
        const double m = r.f64();
        entries.push_back({ComponentIndex{index}, m});
      }
      try {
        leaves.push_back(SubMeasure::from_entries(d.spaceSize, entries));
      } catch (const Error& e) {
        throw Error(ErrorCode::CorruptFile, "record " + std::to_string(k) + ": " + e.what());
      }
    }
    try {
      rec.nested = NestedMeasure::from_leaves(*tree, std::move(leaves));
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptFile, "record " + std::to_string(k) + ": " + e.what());
    }
    d.records.push_back(std::move(rec));
  }
  r.expect_end();
  return d;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  detail::write_file(path, encode_dataset(data));
}

Dataset load_dataset(const std::filesystem::path& path) { return decode_dataset(detail::read_file(path)); }

std::uint64_t dataset_hash(const Dataset& data) {
  detail::ByteWriter w;
  w.u32(data.spaceSize);
  w.text(tree_text(data));
  encode_records(w, data.records);
  return detail::fnv1a64(w.bytes());
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open manifest " + manifest.string());
  const auto base = manifest.parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  "manifest line " + std::to_string(lineNo) + ": expected <path>,<label>");
    }
    ManifestEntry entry;
    entry.path = line.substr(0, comma);
    if (entry.path.is_relative()) entry.path = base / entry.path;
    try {
      entry.label = static_cast<std::uint32_t>(parse_unsigned(line.substr(comma + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), "manifest line " + std::to_string(lineNo) + ": " + e.what());
    }
    entry.line = lineNo;
    out.push_back(std::move(entry));
  }
  return out;
}

Dataset ingest_manifest(const std::filesystem::path& manifest, std::uint32_t s, std::uint32_t depth) {
  Dataset d;
  d.branching = s * s;
  d.depth = depth;
  const IndexTree tree = d.tree();
  for (const auto& entry : read_manifest(manifest)) {
    try {
      d.records.push_back({entry.label, image_to_nested(load_ppm_file(entry.path), tree, s)});
    } catch (const Error& e) {
      throw Error(e.code(), "manifest line " + std::to_string(entry.line) + " (" + entry.path.string() +
                                "): " + e.what());
    }
  }
  if (d.records.empty()) throw Error(ErrorCode::EmptyDataset, "manifest lists no images");
  return d;
}

}  // namespace mrk
