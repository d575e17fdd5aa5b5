#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "ptde/checkpoint.hpp"
#include "ptde/cli.hpp"
#include "ptde/dataset_io.hpp"
#include "test_util.hpp"

using namespace ptde;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ptde");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Theft segments sit at [1, 0], everything else at [0, 1].
fs::path crafted_dataset(const testutil::TempDir& dir) {
  const ClipFeature theft{{1.0, 0.0}};
  const ClipFeature normal{{0.0, 1.0}};
  write_feature_file(dir / "t.ptdf", std::vector<ClipFeature>{normal, normal, theft, theft, normal, normal});
  write_feature_file(dir / "d.ptdf", std::vector<ClipFeature>{normal, normal, normal, normal});
  write_feature_file(dir / "p.ptdf", std::vector<ClipFeature>{normal, normal});
  write_feature_file(dir / "i.ptdf", std::vector<ClipFeature>{normal, normal, normal, normal, normal, normal});
  testutil::write_text(dir / "m.json", R"({"dataset": "crafted", "feature_dim": 2, "segment_length": 32,
    "videos": [
      {"id": "t", "split": "test", "category": "PackageTheft", "features": "t.ptdf", "segment_labels": [0, 1, 0]},
      {"id": "d", "split": "test", "category": "Delivery", "features": "d.ptdf"},
      {"id": "p", "split": "test", "category": "Pickup", "features": "p.ptdf"},
      {"id": "i", "split": "test", "category": "Irrelevant", "features": "i.ptdf"}]})");
  return dir / "m.json";
}

// score = sigmoid(10 relu(x0) - 10 relu(x1)).
fs::path crafted_checkpoint(const testutil::TempDir& dir) {
  ScoringHead head(2);
  head.layers[0].weights[0 * 512 + 0] = 1.0;
  head.layers[0].weights[1 * 512 + 1] = 1.0;
  head.layers[1].weights[0 * 32 + 0] = 1.0;
  head.layers[1].weights[1 * 32 + 1] = 1.0;
  head.layers[2].weights[0] = 10.0;
  head.layers[2].weights[1] = -10.0;
  TrainConfig config;
  config.fusion_mode = FusionMode::GlobalOnly;
  save_checkpoint(head, config, dir / "c.ptde");
  return dir / "c.ptde";
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("eval on a perfectly scored dataset reports AUC 1") {
  testutil::TempDir dir;
  const auto manifest = crafted_dataset(dir);
  const auto ck = crafted_checkpoint(dir);
  const auto r = run({"eval", "--checkpoint", ck.string(), "--manifest", manifest.string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("overall_auc").get<double>() == 1.0);
  CHECK(doc.at("threshold").get<double>() == 0.2);
  CHECK(doc.at("per_category_auc").size() == 3);
  for (const auto& [name, value] : doc.at("per_category_auc").items()) CHECK(value.get<double>() == 1.0);
  CHECK(doc.at("detections").at("detections").get<int>() == 1);
  CHECK(doc.at("detections").at("segments").get<int>() == 3 + 2 + 1 + 3);
}

TEST_CASE("score prints one line per planned segment") {
  testutil::TempDir dir;
  const auto manifest = crafted_dataset(dir);
  const auto ck = crafted_checkpoint(dir);
  const auto m = load_manifest(manifest);
  for (const auto& rec : m.videos) {
    const auto r = run({"score", "--checkpoint", ck.string(), "--manifest", manifest.string(),
                        "--video-id", rec.id});
    REQUIRE(r.code == 0);
    const auto plan = plan_segments(rec.clip_count * m.clip_length, m.segment_length);
    CHECK(line_count(r.out) == plan.segments.size());
  }
  const auto r = run({"score", "--checkpoint", ck.string(), "--manifest", manifest.string(), "--video-id", "t"});
  std::istringstream lines(r.out);
  double s0 = 0, s1 = 0, s2 = 0;
  lines >> s0 >> s1 >> s2;
  CHECK(s1 > 0.99);
  CHECK(s0 < 0.01);
  CHECK(s2 == s0);

  const auto missing = run({"score", "--checkpoint", ck.string(), "--manifest", manifest.string(), "--video-id", "zz"});
  CHECK(missing.code == 2);
}

TEST_CASE("roc writes CSV and SVG") {
  testutil::TempDir dir;
  const auto manifest = crafted_dataset(dir);
  const auto ck = crafted_checkpoint(dir);
  const auto r = run({"roc", "--checkpoint", ck.string(), "--manifest", manifest.string(), "--out-csv",
                      (dir / "roc.csv").string(), "--out-svg", (dir / "roc.svg").string()});
  REQUIRE(r.code == 0);
  const auto csv = testutil::read_text(dir / "roc.csv");
  CHECK(csv.rfind("threshold,fpr,tpr\ninf,0,0\n", 0) == 0);
  CHECK(csv.find(",0,1\n") != std::string::npos);
  CHECK(testutil::read_text(dir / "roc.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("train with a missing manifest exits 2 naming the path") {
  testutil::TempDir dir;
  const auto missing = (dir / "nowhere" / "manifest.json").string();
  const auto r = run({"train", "--manifest", missing, "--out-checkpoint", (dir / "c.ptde").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(missing) != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"train", "--manifest", "m.json"}).code == 1);
  CHECK(run({"train", "--manifest", "m.json", "--out-checkpoint", "c", "--fusion", "local"}).code == 1);
  CHECK(run({"train", "--manifest", "m.json", "--out-checkpoint", "c", "--lambda1", "-1"}).code == 1);
  CHECK(run({"eval", "--checkpoint", "c", "--manifest", "m", "--threshold", "abc"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("synth, train, score and eval end to end with seed fallback") {
  testutil::TempDir dir;
  const auto data = dir / "data";
  const auto s = run({"synth", "--out", data.string(), "--dim", "8", "--seed", "2", "--train-counts", "6",
                      "2", "2", "2", "--test-counts", "4", "1", "2", "1"});
  REQUIRE(s.code == 0);
  const auto manifest = (data / "manifest.json").string();
  CHECK(s.out == manifest + "\n");

  const std::vector<std::string> base{"train", "--manifest", manifest, "--epochs", "5", "--fusion", "global-local"};
  auto with_flag = base;
  with_flag.insert(with_flag.end(), {"--seed", "17", "--out-checkpoint", (dir / "a.ptde").string(), "--log",
                                     (dir / "a.tsv").string()});
  REQUIRE(run(with_flag).code == 0);
  {
    ScopedEnv env("PTDE_SEED", "17");
    auto from_env = base;
    from_env.insert(from_env.end(), {"--out-checkpoint", (dir / "b.ptde").string()});
    REQUIRE(run(from_env).code == 0);
  }
  auto unseeded = base;
  unseeded.insert(unseeded.end(), {"--out-checkpoint", (dir / "z.ptde").string()});
  REQUIRE(run(unseeded).code == 0);

  CHECK(testutil::read_text(dir / "a.ptde") == testutil::read_text(dir / "b.ptde"));
  CHECK(testutil::read_text(dir / "a.ptde") != testutil::read_text(dir / "z.ptde"));
  CHECK(load_checkpoint(dir / "a.ptde").config.seed == 17);
  CHECK(load_checkpoint(dir / "z.ptde").config.seed == 0);
  CHECK(line_count(testutil::read_text(dir / "a.tsv")) == 5);

  {
    ScopedEnv env("PTDE_SEED", "seventeen");
    auto bad = base;
    bad.insert(bad.end(), {"--out-checkpoint", (dir / "x.ptde").string()});
    CHECK(run(bad).code == 1);
  }

  const auto e1 = run({"eval", "--checkpoint", (dir / "a.ptde").string(), "--manifest", manifest});
  const auto e2 = run({"eval", "--checkpoint", (dir / "b.ptde").string(), "--manifest", manifest});
  REQUIRE(e1.code == 0);
  CHECK(e1.out == e2.out);
  const auto doc = nlohmann::json::parse(e1.out);
  CHECK(doc.at("per_category_auc").size() == 3);
}
