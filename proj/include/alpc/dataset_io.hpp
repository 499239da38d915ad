#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "alpc/types.hpp"

namespace alpc {

struct ViewEntry {
  std::string name;
  std::size_t dim = 0;
  std::string file;  // relative to the dataset directory
};

// Contents of manifest.json. View files hold raw 64-bit little-endian floats
// with sample i contiguous (column-major d x n); the labels file holds one
// 32-bit little-endian unsigned integer per sample.
struct DatasetManifest {
  int format_version = 1;
  std::size_t n = 0;
  std::size_t c = 0;
  std::vector<ViewEntry> views;
  std::optional<std::string> labels_file;
};

// Writes manifest.json plus one binary file per view (and labels, when
// present) into `dir`, creating it if needed. Non-finite entries are a
// DataError.
void save(const MultiViewDataset& dataset, const std::filesystem::path& dir);

// Loads and validates a dataset saved by `save`. File-size mismatches,
// unsupported versions and out-of-range labels are DataErrors naming the
// offending piece.
MultiViewDataset load(const std::filesystem::path& dir);

// Builds a dataset from one CSV per view (rows are samples, columns are
// features) and an optional labels CSV with one integer per row. Parse
// errors report file, row and column. With skip_header set, the first line
// of every file is dropped.
MultiViewDataset import_csv(const std::vector<std::filesystem::path>& view_csvs,
                            const std::optional<std::filesystem::path>& labels_csv,
                            std::size_t c, bool skip_header = false);

// FNV-1a content hash over shapes, entries and labels, as 16 hex digits.
std::string dataset_fingerprint(const MultiViewDataset& dataset);

}  // namespace alpc
