#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmqi/index.hpp"
#include "tmqi/manifest.hpp"

namespace tmqi::eval {

/// Kendall tau-a: (N_c - N_d) / (N (N - 1) / 2). Pairs tied in either list
/// count as neither concordant nor discordant; the denominator stays fixed.
/// Errors: kLengthMismatch, kTooFewItems (N < 2), kDomainError (NaN).
double krcc(std::span<const double> a, std::span<const double> b);

/// Signed pair balance N_c - N_d behind krcc().
long long concordance_balance(std::span<const double> a, std::span<const double> b);

enum class Metric { kQ, kF, kN, kL, kTmqi1 };
inline constexpr std::array<Metric, 5> kAllMetrics = {Metric::kQ, Metric::kF, Metric::kN, Metric::kL,
                                                      Metric::kTmqi1};
std::string metric_name(Metric m);
double metric_value(const QualityBreakdown& b, Metric m);

struct ImageEvaluation {
  std::filesystem::path ldr_path;
  double subjective_score = 0.0;
  QualityBreakdown breakdown;
};

struct SetEvaluation {
  int set_id = 0;
  std::filesystem::path hdr_path;
  std::vector<ImageEvaluation> per_image;
  double krcc_q = 0.0;
  double krcc_f = 0.0;
  double krcc_n = 0.0;
  double krcc_l = 0.0;
  double krcc_tmqi1 = 0.0;

  double krcc_of(Metric m) const;
};

/// Population statistics of one column.
struct SummaryStats {
  double average = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;
};

SummaryStats summarize(std::span<const double> values);

struct SkippedSet {
  int set_id = 0;
  std::string reason;
};

struct EvalReport {
  std::vector<SetEvaluation> sets;
  SummaryStats summary_q;
  std::array<SummaryStats, kAllMetrics.size()> summary_by_metric;
  std::vector<SkippedSet> skipped;

  const SummaryStats& summary(Metric m) const { return summary_by_metric[static_cast<std::size_t>(m)]; }
};

/// Correlates each objective column with the negated subjective scores
/// (lower subjective score = better rendering).
void correlate(SetEvaluation& set);

/// Scores every LDR of one set. I/O and metric errors come back with the
/// set id and file path prefixed.
SetEvaluation evaluate_set(const io::ImageSet& set, const MetricParams& params);

struct EvalOptions {
  bool skip_broken = false;
};

/// One SetEvaluation per manifest set, in manifest order, plus summary rows.
/// Fails on the first broken set unless skip_broken is set.
EvalReport evaluate_dataset(const io::DatasetManifest& manifest, const MetricParams& params,
                            const EvalOptions& options = {});

/// Summary rows recomputed from the listed sets.
void summarize_report(EvalReport& report);

std::string report_csv(const EvalReport& report);
std::string report_markdown(const EvalReport& report);
nlohmann::json breakdown_json(const QualityBreakdown& b);
nlohmann::json report_json(const EvalReport& report);

}  // namespace tmqi::eval
