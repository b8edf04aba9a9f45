#include "tmqi/manifest.hpp"

#include <set>
#include <string>

#include <json.hpp>

#include "tmqi/error.hpp"
#include "tmqi/io.hpp"

namespace tmqi::io {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& where, const std::string& reason) {
  throw Error(Errc::kManifestInvalid, where + ": " + reason);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) invalid(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const auto k : keys) known = known || key == k;
    if (!known) invalid(where, "unknown key '" + key + "'");
  }
  for (const auto k : keys) {
    if (!obj.contains(std::string(k))) invalid(where, "missing key '" + std::string(k) + "'");
  }
}

std::filesystem::path resolve(const json& v, const std::string& where, const std::filesystem::path& base) {
  if (!v.is_string() || v.get<std::string>().empty()) invalid(where, "expected a non-empty path string");
  std::filesystem::path p = v.get<std::string>();
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

DatasetManifest load_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid("$", std::string("not valid JSON (") + e.what() + ")");
  }
  only_keys(doc, "$", {"sets"});
  const json& sets = doc["sets"];
  if (!sets.is_array()) invalid("$.sets", "expected an array");
  if (sets.empty()) invalid("$.sets", "manifest has no image sets");

  DatasetManifest manifest;
  std::set<int> seen;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string where = "$.sets[" + std::to_string(i) + "]";
    const json& s = sets[i];
    only_keys(s, where, {"set_id", "hdr_path", "ldr_entries"});
    if (!s["set_id"].is_number_integer()) invalid(where + ".set_id", "expected an integer");
    ImageSet set;
    set.set_id = s["set_id"].get<int>();
    if (!seen.insert(set.set_id).second) {
      invalid(where + ".set_id", "duplicate set_id " + std::to_string(set.set_id));
    }
    set.hdr_path = resolve(s["hdr_path"], where + ".hdr_path", base_dir);
    const json& entries = s["ldr_entries"];
    if (!entries.is_array()) invalid(where + ".ldr_entries", "expected an array");
    if (entries.size() < 2) {
      invalid(where + ".ldr_entries",
              "TooFewItems: set " + std::to_string(set.set_id) + " has " +
                  std::to_string(entries.size()) + " LDR entries, need at least 2");
    }
    for (std::size_t j = 0; j < entries.size(); ++j) {
      const std::string ew = where + ".ldr_entries[" + std::to_string(j) + "]";
      only_keys(entries[j], ew, {"path", "subjective_score"});
      const json& score = entries[j]["subjective_score"];
      if (!score.is_number()) invalid(ew + ".subjective_score", "expected a number");
      LdrEntry entry{resolve(entries[j]["path"], ew + ".path", base_dir), score.get<double>()};
      if (!(entry.subjective_score >= kMinSubjectiveScore && entry.subjective_score <= kMaxSubjectiveScore)) {
        invalid(ew + ".subjective_score", "score " + std::to_string(entry.subjective_score) +
                                              " outside [1, 8]");
      }
      set.ldr_entries.push_back(std::move(entry));
    }
    manifest.sets.push_back(std::move(set));
  }
  return manifest;
}

DatasetManifest load_manifest_file(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  try {
    return load_manifest(text, path.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace tmqi::io
