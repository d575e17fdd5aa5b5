#include "ptde/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptde/checkpoint.hpp"
#include "ptde/dataset_io.hpp"
#include "ptde/error.hpp"
#include "ptde/metrics.hpp"
#include "ptde/synth.hpp"
#include "ptde/trainer.hpp"

namespace ptde {

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --seed wins, then PTDE_SEED, then 0.
std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t flag_value) {
  if (flag->count() > 0) return flag_value;
  const char* env = std::getenv("PTDE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t seed = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("PTDE_SEED must be an unsigned integer, got \"" + std::string(text) + "\"");
  }
  return seed;
}

std::vector<ScoredVideo> score_test_split(const Manifest& manifest, const Checkpoint& ck) {
  std::vector<ScoredVideo> scored;
  for (const auto& bag : load_split(manifest, Split::Test, ck.config.fusion_mode)) {
    ScoredVideo v;
    v.video_id = bag.video_id;
    v.category = bag.category;
    v.scores = score_segments(ck.head, bag.segments);
    v.segment_labels = bag.segment_labels;
    scored.push_back(std::move(v));
  }
  return scored;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly-supervised package-theft segment scoring", "ptde"};
  app.require_subcommand(1);

  // synth
  SynthSpec synth;
  std::string synth_out;
  std::vector<std::size_t> train_counts;
  std::vector<std::size_t> test_counts;
  bool no_pose = false;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset with known structure");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  auto* synth_seed = synth_cmd->add_option("--seed", synth.seed, "Generator seed (falls back to PTDE_SEED)");
  synth_cmd->add_option("--dim", synth.feature_dim, "Appearance feature dimension")->capture_default_str();
  synth_cmd->add_option("--separation", synth.separation, "Distance between cluster means")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Expected norm of per-clip noise")->capture_default_str();
  synth_cmd->add_option("--theft-fraction", synth.theft_fraction, "Share of theft segments in positive videos")
      ->capture_default_str();
  synth_cmd->add_option("--segment-length", synth.segment_length, "Segment length in frames")->capture_default_str();
  synth_cmd->add_option("--min-segments", synth.min_segments)->capture_default_str();
  synth_cmd->add_option("--max-segments", synth.max_segments)->capture_default_str();
  synth_cmd->add_option("--train-counts", train_counts, "Theft Pickup Delivery Irrelevant counts")->expected(4);
  synth_cmd->add_option("--test-counts", test_counts, "Theft Pickup Delivery Irrelevant counts")->expected(4);
  synth_cmd->add_flag("--no-pose", no_pose, "Skip pose files");

  // train
  TrainConfig config;
  std::string manifest_path;
  std::string checkpoint_out;
  std::string fusion_text = "global-local";
  std::string log_path;
  auto* train_cmd = app.add_subcommand("train", "Train a scoring head on the train split");
  train_cmd->add_option("--manifest", manifest_path)->required();
  train_cmd->add_option("--out-checkpoint", checkpoint_out)->required();
  train_cmd->add_option("--fusion", fusion_text)
      ->check(CLI::IsMember({"global", "global-local"}))
      ->capture_default_str();
  train_cmd->add_option("--lr", config.learning_rate)->capture_default_str();
  train_cmd->add_option("--epochs", config.epochs)->capture_default_str();
  train_cmd->add_option("--lambda1", config.lambda1, "Temporal smoothness weight")->capture_default_str();
  train_cmd->add_option("--lambda2", config.lambda2, "Sparsity weight")->capture_default_str();
  auto* train_seed = train_cmd->add_option("--seed", config.seed, "Seed (falls back to PTDE_SEED)");
  train_cmd->add_option("--pairs-per-epoch", config.pairs_per_epoch)->capture_default_str();
  train_cmd->add_option("--log", log_path, "Per-epoch loss log (TSV)");

  // score / eval / roc share checkpoint + manifest
  std::string checkpoint_path;
  std::string video_id;
  double threshold = defaults::kDetectionThreshold;
  std::string csv_path;
  std::string svg_path;

  auto* score_cmd = app.add_subcommand("score", "Print per-segment scores of one video");
  score_cmd->add_option("--checkpoint", checkpoint_path)->required();
  score_cmd->add_option("--manifest", manifest_path)->required();
  score_cmd->add_option("--video-id", video_id)->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the test split and print a JSON report");
  eval_cmd->add_option("--checkpoint", checkpoint_path)->required();
  eval_cmd->add_option("--manifest", manifest_path)->required();
  eval_cmd->add_option("--threshold", threshold)->capture_default_str();

  auto* roc_cmd = app.add_subcommand("roc", "Export the test-split ROC curve");
  roc_cmd->add_option("--checkpoint", checkpoint_path)->required();
  roc_cmd->add_option("--manifest", manifest_path)->required();
  roc_cmd->add_option("--out-csv", csv_path)->required();
  roc_cmd->add_option("--out-svg", svg_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth_cmd) {
      synth.seed = resolve_seed(synth_seed, synth.seed);
      if (!train_counts.empty()) std::copy(train_counts.begin(), train_counts.end(), synth.train_counts.begin());
      if (!test_counts.empty()) std::copy(test_counts.begin(), test_counts.end(), synth.test_counts.begin());
      synth.with_pose = !no_pose;
      validate(synth);
      out << generate_synthetic(synth, synth_out).string() << '\n';
    } else if (*train_cmd) {
      config.seed = resolve_seed(train_seed, config.seed);
      config.fusion_mode = *parse_fusion_mode(fusion_text);
      validate(config);
      const Manifest manifest = load_manifest(manifest_path);
      const auto bags = load_split(manifest, Split::Train, config.fusion_mode);
      const TrainRun run = train(bags, config);
      save_checkpoint(run.head, run.config, checkpoint_out);
      if (!log_path.empty()) {
        auto log = open_output(log_path);
        write_run_log(log, run.history);
      }
      out << "trained " << run.history.size() << " epochs on " << bags.size()
          << " videos, final objective " << run.history.back().total << '\n';
    } else if (*score_cmd) {
      const Checkpoint ck = load_checkpoint(checkpoint_path);
      const Manifest manifest = load_manifest(manifest_path);
      const VideoBag bag = load_video_bag(manifest, video_id, ck.config.fusion_mode);
      out.precision(std::numeric_limits<double>::max_digits10);
      for (double s : score_segments(ck.head, bag.segments)) out << s << '\n';
    } else if (*eval_cmd) {
      const Checkpoint ck = load_checkpoint(checkpoint_path);
      const Manifest manifest = load_manifest(manifest_path);
      const auto scored = score_test_split(manifest, ck);
      out << report_to_json(per_category_eval(scored, threshold)) << '\n';
    } else if (*roc_cmd) {
      const Checkpoint ck = load_checkpoint(checkpoint_path);
      const Manifest manifest = load_manifest(manifest_path);
      std::vector<double> scores;
      std::vector<int> labels;
      for (const auto& v : score_test_split(manifest, ck)) {
        const auto l = v.labels();
        scores.insert(scores.end(), v.scores.begin(), v.scores.end());
        labels.insert(labels.end(), l.begin(), l.end());
      }
      const RocCurve curve = roc_curve(scores, labels);
      auto csv = open_output(csv_path);
      write_roc_csv(csv, curve);
      if (!svg_path.empty()) {
        auto svg = open_output(svg_path);
        write_roc_svg(svg, curve);
      }
      out << "auc " << auc(scores, labels) << " over " << scores.size() << " segments\n";
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::NegativeLambda) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}

}  // namespace ptde
