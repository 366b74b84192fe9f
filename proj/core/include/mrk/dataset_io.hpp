#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mrk/hierarchy.hpp"
#include "mrk/imaging.hpp"

namespace mrk {

/// Records sharing one uniform tree shape and component space.
struct Dataset {
  std::uint32_t spaceSize = kColorSpaceSize;
  std::uint32_t branching = 2;
  std::uint32_t depth = 0;
  std::string runConfig;  // echo of the command that produced the file
  std::vector<DatasetRecord> records;

  IndexTree tree(double epsilon = 0.0) const { return build_uniform_tree(branching, depth, epsilon); }
};

// "MRKD1" file layout, all integers little-endian:
//   magic[5] u32 spaceSize | u32 len + tree config text | u32 len + run config
//   u64 recordCount | per record: u32 label, u32 leafCount,
//   per leaf: u32 entryCount, entryCount x (u32 index, f64 mass)
// Node aggregates are rebuilt on load.
std::vector<std::uint8_t> encode_dataset(const Dataset& data);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);  // throws CorruptFile
void save_dataset(const Dataset& data, const std::filesystem::path& path);  // IoFailure
Dataset load_dataset(const std::filesystem::path& path);  // IoFailure, CorruptFile

/// FNV-1a over the encoded records only (labels and leaf histograms), so the
/// hash ignores the run-config echo.
std::uint64_t dataset_hash(const Dataset& data);

struct ManifestEntry {
  std::filesystem::path path;
  std::uint32_t label = 0;
  std::size_t line = 0;
};

/// Lines `<path>,<label>`; blank lines and lines starting with '#' skipped.
/// Relative paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

/// Loads and histograms every manifest image. Failures rethrow with the
/// original code and "manifest line N" in the message.
Dataset ingest_manifest(const std::filesystem::path& manifest, std::uint32_t splitsPerLevel,
                        std::uint32_t depth);

}  // namespace mrk
