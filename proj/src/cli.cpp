#include "tmqi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>

#include "tmqi/error.hpp"
#include "tmqi/eval.hpp"
#include "tmqi/fidelity.hpp"
#include "tmqi/index.hpp"
#include "tmqi/io.hpp"
#include "tmqi/manifest.hpp"
#include "tmqi/phase.hpp"

namespace tmqi::cli {

namespace {

namespace fs = std::filesystem;

// Raised for bad flag combinations that CLI11 cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct MetricFlags {
  MetricParams params;
  int scales = 4;
  int orients = 4;

  void attach(CLI::App& cmd, bool with_fidelity) {
    if (with_fidelity) {
      cmd.add_option("--window", params.fidelity.window_size, "Fidelity window size (odd)")->capture_default_str();
      cmd.add_option("--c1", params.fidelity.c1, "Fidelity constant C1")->capture_default_str();
      cmd.add_option("--c2", params.fidelity.c2, "Fidelity constant C2")->capture_default_str();
      cmd.add_option("--tau", params.fidelity.sigma_map_tau, "Local-std mapping threshold")->capture_default_str();
      cmd.add_option("--mu-r", params.naturalness.mu_r, "Naturalness reference mean")->capture_default_str();
      cmd.add_option("--sigma-r", params.naturalness.sigma_r, "Naturalness reference std")->capture_default_str();
    }
    cmd.add_option("--scales", params.phase.bank.n_scales, "Log-Gabor scales")->capture_default_str();
    cmd.add_option("--orients", params.phase.bank.n_orientations, "Log-Gabor orientations")->capture_default_str();
    cmd.add_option("--min-wavelength", params.phase.bank.min_wavelength, "Finest log-Gabor wavelength (px)")
        ->capture_default_str();
  }

  // Parameter validation counts as a usage problem, not a data problem.
  void validate() const {
    try {
      params.fidelity.validate();
      params.phase.bank.validate();
      naturalness::NaturalnessModel check(params.naturalness);
      (void)check;
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
};

int error_exit(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return e.code() == Errc::kDimensionMismatch ? kExitMismatch : kExitIo;
}

bool looks_hdr(const io::Bytes& bytes) {
  auto starts = [&](std::string_view m) {
    return bytes.size() >= m.size() && std::equal(m.begin(), m.end(), bytes.begin());
  };
  return starts("#?") || starts("PF") || starts("Pf");
}

int cmd_score(const std::string& hdr_path, const std::string& ldr_path, const MetricFlags& flags,
              const std::string& format, std::ostream& out) {
  const HdrImage hdr = io::load_hdr(hdr_path);
  const LdrImage ldr = io::load_ldr(ldr_path);
  const QualityBreakdown b = tmqi3(hdr, ldr, flags.params);
  if (format == "json") {
    nlohmann::json j = {{"F", b.f}, {"N", b.n}, {"L", b.l}, {"Q", b.q}, {"tmqi1", b.tmqi1}};
    out << j.dump() << '\n';
  } else if (format == "csv") {
    out << "F,N,L,Q,tmqi1\n" << num(b.f) << ',' << num(b.n) << ',' << num(b.l) << ',' << num(b.q) << ','
        << num(b.tmqi1) << '\n';
  } else if (format == "markdown") {
    out << "| F | N | L | Q | TMQI-1 |\n|---|---|---|---|---|\n| " << num(b.f) << " | " << num(b.n) << " | "
        << num(b.l) << " | " << num(b.q) << " | " << num(b.tmqi1) << " |\n";
  } else {
    out << "F      " << num(b.f) << '\n'
        << "N      " << num(b.n) << '\n'
        << "L      " << num(b.l) << '\n'
        << "Q      " << num(b.q) << '\n'
        << "tmqi1  " << num(b.tmqi1) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const std::string& manifest_path, const MetricFlags& flags, const std::string& format,
             const std::string& out_dir, bool skip_broken, std::ostream& out, std::ostream& err) {
  const io::DatasetManifest manifest = io::load_manifest_file(manifest_path);
  const eval::EvalReport report = eval::evaluate_dataset(manifest, flags.params, {skip_broken});
  for (const auto& sk : report.skipped) err << "warning: skipped " << sk.reason << '\n';

  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  auto save = [&](const char* name, const std::string& text) {
    io::write_file(dir / name, io::ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  };
  save("tmqi_report.csv", eval::report_csv(report));
  save("tmqi_report.md", eval::report_markdown(report));
  save("tmqi_report.json", eval::report_json(report).dump(2) + "\n");

  if (format == "json") {
    out << eval::report_json(report).dump(2) << '\n';
  } else if (format == "csv") {
    out << eval::report_csv(report);
  } else if (format == "markdown") {
    out << eval::report_markdown(report);
  } else {
    for (const auto& s : report.sets) {
      out << "set " << s.set_id << "  KRCC(TMQI-3) " << num(s.krcc_q) << '\n';
    }
    const auto& st = report.summary_q;
    out << "summary  average " << num(st.average) << "  min " << num(st.min) << "  max " << num(st.max)
        << "  std " << num(st.std) << '\n';
  }
  return kExitOk;
}

LdrImage recombine(const LdrImage& ldr, const Plane& y_old, const Plane& y_new) {
  std::vector<std::uint8_t> rgb(ldr.samples().begin(), ldr.samples().end());
  auto to_byte = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); };
  for (std::size_t i = 0; i < y_old.size(); ++i) {
    if (y_new[i] == y_old[i]) continue;
    if (y_old[i] > 0.0) {
      const double ratio = y_new[i] / y_old[i];
      for (std::size_t c = 0; c < 3; ++c) rgb[3 * i + c] = to_byte(rgb[3 * i + c] * ratio);
    } else {
      rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = to_byte(y_new[i]);
    }
  }
  return LdrImage(ldr.width(), ldr.height(), std::move(rgb));
}

int cmd_enhance(const std::string& hdr_path, const std::string& ldr_path, const MetricFlags& flags, int steps,
                double lambda, const std::string& gradient, const std::string& out_path, std::ostream& out) {
  const HdrImage hdr = io::load_hdr(hdr_path);
  const LdrImage ldr = io::load_ldr(ldr_path);
  if (hdr.width() != ldr.width() || hdr.height() != ldr.height()) {
    throw Error(Errc::kDimensionMismatch, "HDR and LDR sizes differ");
  }
  const auto method =
      gradient == "analytic" ? fidelity::GradientMethod::kAnalytic : fidelity::GradientMethod::kFiniteDifference;
  const Plane x = normalize_or_zero(luminance(hdr));
  const Plane y0 = to_grayscale_f64(ldr);
  Plane y = y0;
  out << "step 0  S " << num(fidelity::structural_fidelity(x, y, flags.params.fidelity).s) << '\n';
  for (int k = 1; k <= steps; ++k) {
    y = fidelity::fidelity_ascent_step(x, y, lambda, flags.params.fidelity, method);
    out << "step " << k << "  S " << num(fidelity::structural_fidelity(x, y, flags.params.fidelity).s) << '\n';
  }
  const LdrImage result = recombine(ldr, y0, y);
  const fs::path path = out_path.empty() ? fs::path("enhanced.png") : fs::path(out_path);
  io::write_file(path, io::write_png(result));
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int cmd_dump_phase(const std::string& image_path, const MetricFlags& flags, const std::string& channel,
                   const std::string& out_path, std::ostream& out) {
  const io::Bytes bytes = io::read_file(image_path);
  Plane plane;
  try {
    const int c = channel == "r" ? 0 : channel == "g" ? 1 : channel == "b" ? 2 : -1;
    if (looks_hdr(bytes)) {
      const HdrImage hdr = io::read_hdr(bytes);
      plane = phase::hdr_reference_plane(c < 0 ? luminance(hdr) : hdr.channel(c), flags.params.phase.hdr_linear_weight);
    } else {
      const LdrImage ldr = io::read_ldr(bytes);
      plane = c < 0 ? luminance(ldr) : ldr.channel(c);
    }
  } catch (const Error& e) {
    throw Error(e.code(), image_path + ": " + e.detail());
  }
  const phase::PhaseMap map = phase::lwmpa(plane, flags.params.phase.bank);
  const fs::path path = out_path.empty() ? fs::path("phase.png") : fs::path(out_path);
  io::write_file(path, io::write_png_gray(map.width(), map.height(), phase::phase_to_gray8(map)));
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Full-reference quality assessment for tone-mapped images"};
  app.require_subcommand(1);

  const std::vector<std::string> formats = {"plain", "json", "csv", "markdown"};
  std::string format = "plain";
  std::string out_path;
  MetricFlags flags;

  std::string hdr_path;
  std::string ldr_path;
  auto* score = app.add_subcommand("score", "Score one LDR rendering against its HDR reference");
  score->add_option("hdr", hdr_path, "HDR reference (.hdr, .pfm)")->required();
  score->add_option("ldr", ldr_path, "LDR candidate (.png, .ppm)")->required();
  score->add_option("--format", format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
  flags.attach(*score, true);

  std::string manifest_path;
  bool skip_broken = false;
  auto* evalc = app.add_subcommand("eval", "Rank-correlate scores with subjective rankings over a dataset");
  evalc->add_option("manifest", manifest_path, "Dataset manifest (JSON)")->required();
  evalc->add_option("--format", format, "Console output format")->check(CLI::IsMember(formats))->capture_default_str();
  evalc->add_option("--out", out_path, "Report directory (default: current directory)");
  evalc->add_flag("--skip-broken", skip_broken, "Report unreadable sets as warnings instead of failing");
  flags.attach(*evalc, true);

  int steps = 1;
  double lambda = 1e-3;
  std::string gradient = "fd";
  auto* enhance = app.add_subcommand("enhance", "Gradient-ascent steps on structural fidelity");
  enhance->add_option("hdr", hdr_path, "HDR reference")->required();
  enhance->add_option("ldr", ldr_path, "LDR rendering to enhance")->required();
  enhance->add_option("--steps", steps, "Number of ascent steps")->check(CLI::NonNegativeNumber)->capture_default_str();
  enhance->add_option("--lambda", lambda, "Step size")->check(CLI::NonNegativeNumber)->capture_default_str();
  enhance->add_option("--gradient", gradient, "Gradient evaluation")
      ->check(CLI::IsMember({"fd", "analytic"}))
      ->capture_default_str();
  enhance->add_option("--out", out_path, "Output PNG (default: enhanced.png)");
  flags.attach(*enhance, true);

  std::string image_path;
  std::string channel = "luma";
  auto* dump = app.add_subcommand("dump-phase", "Write the phase-angle map of an image as 8-bit PNG");
  dump->add_option("image", image_path, "HDR or LDR image")->required();
  dump->add_option("--channel", channel, "Plane to analyse")
      ->check(CLI::IsMember({"luma", "r", "g", "b"}))
      ->capture_default_str();
  dump->add_option("--out", out_path, "Output PNG (default: phase.png)");
  flags.attach(*dump, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    flags.validate();
    if (score->parsed()) return cmd_score(hdr_path, ldr_path, flags, format, out);
    if (evalc->parsed()) return cmd_eval(manifest_path, flags, format, out_path, skip_broken, out, err);
    if (enhance->parsed()) {
      return cmd_enhance(hdr_path, ldr_path, flags, steps, lambda, gradient, out_path, out);
    }
    if (dump->parsed()) return cmd_dump_phase(image_path, flags, channel, out_path, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    return error_exit(e, err);
  }
  return kExitUsage;
}

}  // namespace tmqi::cli
