#include <gtest/gtest.h>

#include <string>

#include "tmqi/error.hpp"
#include "tmqi/manifest.hpp"

namespace tmqi::io {
namespace {

std::string entries(int n, bool drop_last_score = false) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ",";
    out += "{\"path\": \"ldr" + std::to_string(i) + ".png\"";
    if (!(drop_last_score && i == n - 1)) out += ", \"subjective_score\": " + std::to_string(1 + i % 8);
    out += "}";
  }
  return out;
}

std::string one_set(int id, const std::string& ldr) {
  return "{\"set_id\": " + std::to_string(id) + ", \"hdr_path\": \"scene.hdr\", \"ldr_entries\": [" + ldr + "]}";
}

std::string manifest(const std::string& sets) { return "{\"sets\": [" + sets + "]}"; }

std::string failure(const std::string& text) {
  try {
    load_manifest(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kManifestInvalid);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

TEST(Manifest, ParsesAndResolvesRelativePaths) {
  const auto m = load_manifest(manifest(one_set(4, entries(8)) + "," + one_set(9, entries(2))), "/data/set");
  ASSERT_EQ(m.sets.size(), 2u);
  EXPECT_EQ(m.sets[0].set_id, 4);
  EXPECT_EQ(m.sets[0].hdr_path, std::filesystem::path("/data/set/scene.hdr"));
  ASSERT_EQ(m.sets[0].ldr_entries.size(), 8u);
  EXPECT_EQ(m.sets[0].ldr_entries[3].path, std::filesystem::path("/data/set/ldr3.png"));
  EXPECT_EQ(m.sets[0].ldr_entries[3].subjective_score, 4.0);
  EXPECT_EQ(m.sets[1].ldr_entries.size(), 2u);
}

TEST(Manifest, AbsolutePathsAreKept) {
  const auto m = load_manifest(
      manifest("{\"set_id\": 1, \"hdr_path\": \"/abs/a.hdr\", \"ldr_entries\": [" + entries(2) + "]}"), "/base");
  EXPECT_EQ(m.sets[0].hdr_path, std::filesystem::path("/abs/a.hdr"));
}

TEST(Manifest, MissingScoreIsInvalid) {
  const std::string msg = failure(manifest(one_set(1, entries(8, true))));
  EXPECT_NE(msg.find("subjective_score"), std::string::npos);
}

TEST(Manifest, SingleEntrySetReportsTooFewItems) {
  const std::string msg = failure(manifest(one_set(1, entries(1))));
  EXPECT_NE(msg.find("TooFewItems"), std::string::npos);
}

TEST(Manifest, StructuralViolations) {
  failure("not json");
  failure("{\"sets\": []}");
  failure("{\"sets\": {}}");
  failure("{}");
  failure("{\"sets\": [], \"extra\": 1}");
  failure(manifest(one_set(1, entries(3)) + "," + one_set(1, entries(3))));
  failure(manifest("{\"set_id\": \"one\", \"hdr_path\": \"a.hdr\", \"ldr_entries\": [" + entries(2) + "]}"));
  failure(manifest("{\"set_id\": 1, \"hdr_path\": \"\", \"ldr_entries\": [" + entries(2) + "]}"));
  failure(manifest("{\"set_id\": 1, \"hdr_path\": \"a.hdr\", \"ldr_entries\": [" + entries(2) + "], \"x\": 0}"));
}

TEST(Manifest, ScoresOutsideRangeAreInvalid) {
  for (const char* bad : {"0.5", "8.5", "-1", "\"3\""}) {
    const std::string ldr = "{\"path\": \"a.png\", \"subjective_score\": 2}, {\"path\": \"b.png\", "
                            "\"subjective_score\": " + std::string(bad) + "}";
    failure(manifest(one_set(1, ldr)));
  }
  const std::string edge = "{\"path\": \"a.png\", \"subjective_score\": 1}, {\"path\": \"b.png\", "
                           "\"subjective_score\": 8.0}";
  EXPECT_NO_THROW(load_manifest(manifest(one_set(1, edge))));
}

TEST(Manifest, FileErrorsNameThePath) {
  try {
    load_manifest_file("/nonexistent/manifest.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/manifest.json"), std::string::npos);
  }
}

}  // namespace
}  // namespace tmqi::io
