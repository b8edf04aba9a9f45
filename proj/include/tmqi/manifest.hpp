#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace tmqi::io {

struct LdrEntry {
  std::filesystem::path path;
  double subjective_score = 0.0;
};

struct ImageSet {
  int set_id = 0;
  std::filesystem::path hdr_path;
  std::vector<LdrEntry> ldr_entries;
};

struct DatasetManifest {
  std::vector<ImageSet> sets;
};

inline constexpr double kMinSubjectiveScore = 1.0;
inline constexpr double kMaxSubjectiveScore = 8.0;

/// Parses and validates a JSON manifest:
///
///   { "sets": [ { "set_id": 1, "hdr_path": "a.hdr",
///                 "ldr_entries": [ { "path": "a1.png", "subjective_score": 2.5 }, ... ] } ] }
///
/// Unknown keys are rejected. Relative paths are resolved against base_dir.
/// Violations throw Errc::kManifestInvalid with the offending JSON path.
DatasetManifest load_manifest(std::string_view text, const std::filesystem::path& base_dir = {});

DatasetManifest load_manifest_file(const std::filesystem::path& path);

}  // namespace tmqi::io
