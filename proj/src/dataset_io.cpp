#include "alpc/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "alpc/errors.hpp"

namespace alpc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

void write_file(const fs::path& path, const char* data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(data, static_cast<std::streamsize>(bytes));
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<char> read_file_exact(const fs::path& path, std::size_t expected_bytes,
                                  const std::string& what) {
  std::error_code ec;
  const auto actual = fs::file_size(path, ec);
  if (ec) throw DataError(what + ": missing file " + path.string());
  if (actual != expected_bytes)
    throw DataError(what + ": " + path.string() + " holds " + std::to_string(actual) +
                    " bytes, expected " + std::to_string(expected_bytes));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(what + ": cannot open " + path.string());
  std::vector<char> buffer(expected_bytes);
  in.read(buffer.data(), static_cast<std::streamsize>(expected_bytes));
  if (!in) throw DataError(what + ": short read on " + path.string());
  return buffer;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double_field(const std::string& raw, const fs::path& file, std::size_t row,
                          std::size_t col) {
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  while (begin != end && (*begin == ' ' || *begin == '\t' || *begin == '\r')) ++begin;
  while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
  double value = 0.0;
  const auto [ptr, errc] = std::from_chars(begin, end, value);
  if (errc != std::errc() || ptr != end)
    throw DataError("parse error in " + file.string() + " at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1) + ": '" + raw + "'");
  return value;
}

std::vector<std::string> read_lines(const fs::path& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  if (skip_header && !lines.empty()) lines.erase(lines.begin());
  return lines;
}

}  // namespace

void save(const MultiViewDataset& dataset, const fs::path& dir) {
  validate_dataset(dataset);
  fs::create_directories(dir);

  json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["n"] = dataset.n;
  manifest["c"] = dataset.c;
  manifest["views"] = json::array();

  for (std::size_t v = 0; v < dataset.views.size(); ++v) {
    const DenseMatrix& x = dataset.views[v];
    for (double value : x.entries())
      if (!std::isfinite(value))
        throw DataError("view " + std::to_string(v) + " holds a non-finite entry");
    const std::string file = "view" + std::to_string(v) + ".bin";
    write_file(dir / file, reinterpret_cast<const char*>(x.entries().data()),
               x.entries().size() * sizeof(double));
    manifest["views"].push_back(
        {{"name", "view" + std::to_string(v)}, {"dim", x.rows()}, {"file", file}});
  }

  if (dataset.labels) {
    std::vector<std::uint32_t> packed(dataset.labels->size());
    for (std::size_t i = 0; i < packed.size(); ++i)
      packed[i] = static_cast<std::uint32_t>((*dataset.labels)[i]);
    write_file(dir / "labels.bin", reinterpret_cast<const char*>(packed.data()),
               packed.size() * sizeof(std::uint32_t));
    manifest["labels_file"] = "labels.bin";
  }

  const std::string text = manifest.dump(2) + "\n";
  write_file(dir / "manifest.json", text.data(), text.size());
}

MultiViewDataset load(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw DataError("missing manifest: " + manifest_path.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw DataError("malformed manifest " + manifest_path.string() + ": " + e.what());
  }

  try {
    const int version = manifest.at("format_version").get<int>();
    if (version != kFormatVersion)
      throw DataError("unsupported format version " + std::to_string(version) +
                      " in " + manifest_path.string());

    MultiViewDataset dataset;
    dataset.n = manifest.at("n").get<std::size_t>();
    dataset.c = manifest.at("c").get<std::size_t>();

    for (const json& entry : manifest.at("views")) {
      const std::string name = entry.at("name").get<std::string>();
      const std::size_t dim = entry.at("dim").get<std::size_t>();
      const std::string file = entry.at("file").get<std::string>();
      const std::vector<char> raw =
          read_file_exact(dir / file, dim * dataset.n * sizeof(double), "view " + name);
      std::vector<double> entries(dim * dataset.n);
      std::memcpy(entries.data(), raw.data(), raw.size());
      dataset.views.emplace_back(dim, dataset.n, std::move(entries));
    }

    if (manifest.contains("labels_file") && !manifest["labels_file"].is_null()) {
      const std::string file = manifest["labels_file"].get<std::string>();
      const std::vector<char> raw =
          read_file_exact(dir / file, dataset.n * sizeof(std::uint32_t), "labels");
      std::vector<std::uint32_t> packed(dataset.n);
      std::memcpy(packed.data(), raw.data(), raw.size());
      std::vector<int> labels(dataset.n);
      for (std::size_t i = 0; i < dataset.n; ++i) {
        if (packed[i] >= dataset.c)
          throw DataError("label " + std::to_string(packed[i]) + " at sample " +
                          std::to_string(i) + " is outside [0, " + std::to_string(dataset.c) +
                          ")");
        labels[i] = static_cast<int>(packed[i]);
      }
      dataset.labels = std::move(labels);
    }

    validate_dataset(dataset);
    return dataset;
  } catch (const json::exception& e) {
    throw DataError("malformed manifest " + manifest_path.string() + ": " + e.what());
  }
}

MultiViewDataset import_csv(const std::vector<fs::path>& view_csvs,
                            const std::optional<fs::path>& labels_csv, std::size_t c,
                            bool skip_header) {
  if (view_csvs.empty()) throw ArgumentError("import_csv: no view files given");

  MultiViewDataset dataset;
  dataset.c = c;
  std::size_t n = 0;

  for (std::size_t v = 0; v < view_csvs.size(); ++v) {
    const fs::path& path = view_csvs[v];
    const std::vector<std::string> lines = read_lines(path, skip_header);
    if (lines.empty()) throw DataError("no data rows in " + path.string());
    if (v == 0) {
      n = lines.size();
    } else if (lines.size() != n) {
      throw DataError("inconsistent sample counts: " + path.string() + " has " +
                      std::to_string(lines.size()) + " rows, expected " + std::to_string(n));
    }

    const std::size_t dim = split_fields(lines[0]).size();
    DenseMatrix x(dim, n);
    for (std::size_t row = 0; row < n; ++row) {
      const std::vector<std::string> fields = split_fields(lines[row]);
      if (fields.size() != dim)
        throw DataError("ragged row in " + path.string() + " at row " +
                        std::to_string(row + 1) + ": " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(dim));
      for (std::size_t col = 0; col < dim; ++col)
        x(col, row) = parse_double_field(fields[col], path, row, col);
    }
    dataset.views.push_back(std::move(x));
  }
  dataset.n = n;

  if (labels_csv) {
    const std::vector<std::string> lines = read_lines(*labels_csv, skip_header);
    if (lines.size() != n)
      throw DataError("labels file " + labels_csv->string() + " has " +
                      std::to_string(lines.size()) + " rows, expected " + std::to_string(n));
    std::vector<int> labels(n);
    for (std::size_t row = 0; row < n; ++row) {
      const double value = parse_double_field(lines[row], *labels_csv, row, 0);
      const int label = static_cast<int>(value);
      if (static_cast<double>(label) != value)
        throw DataError("non-integer label in " + labels_csv->string() + " at row " +
                        std::to_string(row + 1));
      labels[row] = label;
    }
    dataset.labels = std::move(labels);
  }

  validate_dataset(dataset);
  return dataset;
}

std::string dataset_fingerprint(const MultiViewDataset& dataset) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&hash](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      hash ^= p[i];
      hash *= 0x100000001b3ULL;
    }
  };
  auto mix_u64 = [&](std::uint64_t x) { mix_bytes(&x, sizeof(x)); };

  mix_u64(dataset.n);
  mix_u64(dataset.c);
  mix_u64(dataset.views.size());
  for (const DenseMatrix& x : dataset.views) {
    mix_u64(x.rows());
    mix_bytes(x.entries().data(), x.entries().size() * sizeof(double));
  }
  mix_u64(dataset.labels ? 1 : 0);
  if (dataset.labels)
    mix_bytes(dataset.labels->data(), dataset.labels->size() * sizeof(int));

  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

}  // namespace alpc
