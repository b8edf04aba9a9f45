#include "tmqi/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>

#include "parallel.hpp"
#include "tmqi/error.hpp"
#include "tmqi/io.hpp"

namespace tmqi::eval {

namespace {

long long tied_pairs(std::span<const double> sorted) {
  long long total = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<long long>(j - i);
    total += t * (t - 1) / 2;
    i = j;
  }
  return total;
}

// Merge sort that counts strict inversions.
long long sort_counting_inversions(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo,
                                   std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = sort_counting_inversions(v, scratch, lo, mid) + sort_counting_inversions(v, scratch, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<long long>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

long long concordance_balance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::kLengthMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " items");
  }
  if (a.size() < 2) throw Error(Errc::kTooFewItems, "rank correlation needs at least 2 items");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) throw Error(Errc::kDomainError, "NaN in rank correlation input");
  }
  // Knight's method: with pairs ordered by (a, b), discordant pairs are
  // exactly the strict inversions left in b.
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i] < a[j] || (a[i] == a[j] && b[i] < b[j]);
  });
  std::vector<double> sa(n);
  std::vector<double> sb(n);
  for (std::size_t k = 0; k < n; ++k) {
    sa[k] = a[order[k]];
    sb[k] = b[order[k]];
  }
  const auto nn = static_cast<long long>(n);
  const long long all_pairs = nn * (nn - 1) / 2;
  const long long ties_a = tied_pairs(sa);
  long long ties_joint = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && sa[j] == sa[i] && sb[j] == sb[i]) ++j;
    const auto t = static_cast<long long>(j - i);
    ties_joint += t * (t - 1) / 2;
    i = j;
  }
  std::vector<double> scratch(n);
  const long long discordant = sort_counting_inversions(sb, scratch, 0, n);
  const long long ties_b = tied_pairs(sb);  // sb is sorted now
  return all_pairs - ties_a - ties_b + ties_joint - 2 * discordant;
}

double krcc(std::span<const double> a, std::span<const double> b) {
  const long long balance = concordance_balance(a, b);
  const auto n = static_cast<long long>(a.size());
  return static_cast<double>(balance) / static_cast<double>(n * (n - 1) / 2);
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kQ: return "TMQI-3";
    case Metric::kF: return "F";
    case Metric::kN: return "N";
    case Metric::kL: return "L";
    case Metric::kTmqi1: return "TMQI-1";
  }
  return "?";
}

double metric_value(const QualityBreakdown& b, Metric m) {
  switch (m) {
    case Metric::kQ: return b.q;
    case Metric::kF: return b.f;
    case Metric::kN: return b.n;
    case Metric::kL: return b.l;
    case Metric::kTmqi1: return b.tmqi1;
  }
  return 0.0;
}

double SetEvaluation::krcc_of(Metric m) const {
  switch (m) {
    case Metric::kQ: return krcc_q;
    case Metric::kF: return krcc_f;
    case Metric::kN: return krcc_n;
    case Metric::kL: return krcc_l;
    case Metric::kTmqi1: return krcc_tmqi1;
  }
  return 0.0;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::kTooFewItems, "no values to summarise");
  SummaryStats s;
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.average = sum / n;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  double ss = 0.0;
  for (const double v : values) ss += (v - s.average) * (v - s.average);
  s.std = std::sqrt(ss / n);
  return s;
}

void correlate(SetEvaluation& set) {
  std::vector<double> subjective;
  for (const auto& img : set.per_image) subjective.push_back(-img.subjective_score);
  auto column = [&](Metric m) {
    std::vector<double> v;
    for (const auto& img : set.per_image) v.push_back(metric_value(img.breakdown, m));
    return krcc(subjective, v);
  };
  set.krcc_q = column(Metric::kQ);
  set.krcc_f = column(Metric::kF);
  set.krcc_n = column(Metric::kN);
  set.krcc_l = column(Metric::kL);
  set.krcc_tmqi1 = column(Metric::kTmqi1);
}

SetEvaluation evaluate_set(const io::ImageSet& set, const MetricParams& params) {
  const std::string where = "set " + std::to_string(set.set_id);
  try {
    if (set.ldr_entries.size() < 2) {
      throw Error(Errc::kTooFewItems, "needs at least 2 LDR entries, has " + std::to_string(set.ldr_entries.size()));
    }
    SetEvaluation out;
    out.set_id = set.set_id;
    out.hdr_path = set.hdr_path;
    const HdrImage hdr = io::load_hdr(set.hdr_path);
    for (const auto& entry : set.ldr_entries) {
      const LdrImage ldr = io::load_ldr(entry.path);
      ImageEvaluation img{entry.path, entry.subjective_score, {}};
      try {
        img.breakdown = tmqi3(hdr, ldr, params);
      } catch (const Error& e) {
        throw Error(e.code(), entry.path.string() + ": " + e.detail());
      }
      out.per_image.push_back(std::move(img));
    }
    correlate(out);
    return out;
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.detail());
  }
}

void summarize_report(EvalReport& report) {
  if (report.sets.empty()) {
    report.summary_q = {};
    report.summary_by_metric = {};
    return;
  }
  for (const Metric m : kAllMetrics) {
    std::vector<double> col;
    for (const auto& s : report.sets) col.push_back(s.krcc_of(m));
    report.summary_by_metric[static_cast<std::size_t>(m)] = summarize(col);
  }
  report.summary_q = report.summary(Metric::kQ);
}

EvalReport evaluate_dataset(const io::DatasetManifest& manifest, const MetricParams& params,
                            const EvalOptions& options) {
  if (manifest.sets.empty()) throw Error(Errc::kManifestInvalid, "manifest has no image sets");
  std::vector<std::optional<SetEvaluation>> results(manifest.sets.size());
  std::vector<std::string> failures(manifest.sets.size());
  detail::parallel_for(manifest.sets.size(), [&](std::size_t i) {
    try {
      results[i] = evaluate_set(manifest.sets[i], params);
    } catch (const Error& e) {
      if (!options.skip_broken) throw;
      failures[i] = e.what();
    }
  });
  EvalReport report;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i]) {
      report.sets.push_back(std::move(*results[i]));
    } else {
      report.skipped.push_back({manifest.sets[i].set_id, failures[i]});
    }
  }
  if (report.sets.empty()) throw Error(Errc::kTooFewItems, "every image set failed to evaluate");
  summarize_report(report);
  return report;
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "set_id,metric,krcc\n";
  for (const auto& s : report.sets) {
    for (const Metric m : kAllMetrics) out << s.set_id << ',' << metric_name(m) << ',' << fixed(s.krcc_of(m), 6) << '\n';
  }
  if (report.sets.empty()) return out.str();
  const char* rows[] = {"average", "min", "max", "std"};
  for (int r = 0; r < 4; ++r) {
    for (const Metric m : kAllMetrics) {
      const SummaryStats& st = report.summary(m);
      const double v = r == 0 ? st.average : r == 1 ? st.min : r == 2 ? st.max : st.std;
      out << rows[r] << ',' << metric_name(m) << ',' << fixed(v, 6) << '\n';
    }
  }
  return out.str();
}

std::string report_markdown(const EvalReport& report) {
  std::ostringstream out;
  out << "| Image Set |";
  for (const Metric m : kAllMetrics) out << ' ' << metric_name(m) << " |";
  out << " TMQI-2 |\n|---|";
  for (std::size_t i = 0; i <= kAllMetrics.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& s : report.sets) {
    out << "| " << s.set_id << " |";
    for (const Metric m : kAllMetrics) out << ' ' << fixed(s.krcc_of(m), 4) << " |";
    out << " external |\n";
  }
  if (!report.sets.empty()) {
    const char* rows[] = {"Average", "Min", "Max", "Std"};
    for (int r = 0; r < 4; ++r) {
      out << "| " << rows[r] << " |";
      for (const Metric m : kAllMetrics) {
        const SummaryStats& st = report.summary(m);
        const double v = r == 0 ? st.average : r == 1 ? st.min : r == 2 ? st.max : st.std;
        out << ' ' << fixed(v, 4) << " |";
      }
      out << " external |\n";
    }
  }
  for (const auto& sk : report.skipped) out << "\nSkipped set " << sk.set_id << ": " << sk.reason << '\n';
  return out.str();
}

nlohmann::json breakdown_json(const QualityBreakdown& b) {
  return {{"F", b.f},   {"N", b.n},         {"L", b.l},         {"Q", b.q},
          {"tmqi1", b.tmqi1}, {"S", b.s_raw}, {"mu", b.mu},       {"sigma", b.sigma},
          {"q_r", b.q_r}, {"q_g", b.q_g},   {"q_b", b.q_b}};
}

nlohmann::json report_json(const EvalReport& report) {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : report.sets) {
    nlohmann::json images = nlohmann::json::array();
    for (const auto& img : s.per_image) {
      images.push_back({{"ldr_path", img.ldr_path.string()},
                        {"subjective_score", img.subjective_score},
                        {"breakdown", breakdown_json(img.breakdown)}});
    }
    nlohmann::json k;
    for (const Metric m : kAllMetrics) k[metric_name(m)] = s.krcc_of(m);
    sets.push_back({{"set_id", s.set_id}, {"hdr_path", s.hdr_path.string()}, {"krcc", k}, {"images", images}});
  }
  nlohmann::json summary;
  if (!report.sets.empty()) {
    for (const Metric m : kAllMetrics) {
      const SummaryStats& st = report.summary(m);
      summary[metric_name(m)] = {{"average", st.average}, {"min", st.min}, {"max", st.max}, {"std", st.std}};
    }
  }
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& sk : report.skipped) skipped.push_back({{"set_id", sk.set_id}, {"reason", sk.reason}});
  return {{"sets", sets}, {"summary", summary}, {"skipped", skipped}};
}

}  // namespace tmqi::eval
