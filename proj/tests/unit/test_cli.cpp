#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include "procast/cli.hpp"
#include "procast/xes.hpp"

using namespace procast;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("procast-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kPingPongRule =
    "< exists i . (i > curr and e[i].org:group != e[i+1].org:group and i+1 <= last and "
    "e[i].concept:name != \"Queued\") => \"Ping-Pong\" , \"Not Ping-Pong\" >\n";

}  // namespace

TEST_CASE("run config: json parsing, defaults and validation") {
  RunConfig c = RunConfig::from_json_text(R"({
    "log": "some.xes",
    "rule": "some.rule",
    "algorithm": "decisionTree",
    "params": {"seed": 7, "n_trees": 3},
    "split": {"train_fraction": 0.5, "order": "logOrder"},
    "k_min": 2, "k_max": 5,
    "display_unit": "days"
  })");
  CHECK(c.log_path == "some.xes");
  CHECK(c.algorithm == Algorithm::DecisionTree);
  CHECK(c.params.rng_seed == 7);
  CHECK(c.params.n_trees == 3);
  CHECK(c.params.max_depth == 12);  // untouched defaults stay
  CHECK(c.split.train_fraction == 0.5);
  CHECK(c.split.order == SplitOrder::LogOrder);
  CHECK(c.krange.k_max == 5);
  CHECK(c.display_divisor == 86'400'000.0);
  REQUIRE(c.encoders.size() == 2);  // defaulted
  CHECK(c.encoders[0].kind == EncoderKind::OneHotCounts);

  CHECK_THROWS_AS(RunConfig::from_json_text("not json"), ParseError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"algorithm": "svm"})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"display_unit": "weeks"})"), ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"encoders": [{"id": "a", "kind": "oneHotLast"}]})"),
      ConfigError);
}

TEST_CASE("cli: validate exits 0 on well-defined, 1 on conflicts, throws on bad syntax") {
  TempDir dir;
  write_xes_file(generate_synthetic_log({.traces = 8}), dir.file("log.xes"));

  RunConfig config;
  config.log_path = dir.file("log.xes");
  config.rule_path = dir.file("rule.txt");
  config.out_dir = dir.file("out");

  write_file(config.rule_path, kPingPongRule);
  std::ostringstream out, err;
  CHECK(cmd_validate(config, out, err) == kExitOk);
  CHECK(out.str().find("well-defined: yes") != std::string::npos);
  CHECK(read_file(dir.file("out/well_definedness.json")).find("\"well_defined\": true") !=
        std::string::npos);

  write_file(config.rule_path, "< true => \"a\" , true => \"b\" , \"c\" >\n");
  std::ostringstream out2;
  CHECK(cmd_validate(config, out2, err) == kExitDomainFailure);
  CHECK(out2.str().find("well-defined: NO") != std::string::npos);

  write_file(config.rule_path, "< true => \"a\" ,\n");
  CHECK_THROWS_AS(cmd_validate(config, out, err), ParseError);
}

TEST_CASE("cli: build-dataset writes train/test csv and metadata; reruns are identical") {
  TempDir dir;
  write_xes_file(generate_synthetic_log({.traces = 12}), dir.file("log.xes"));

  RunConfig config;
  config.log_path = dir.file("log.xes");
  config.rule_path = dir.file("rule.txt");
  config.out_dir = dir.file("out");
  config.encoders = {{"counts", EncoderKind::OneHotCounts, "concept:name"}};
  write_file(config.rule_path, kPingPongRule);

  std::ostringstream out, err;
  CHECK(cmd_build_dataset(config, out, err) == kExitOk);
  std::string train1 = read_file(dir.file("out/train.csv"));
  std::string test1 = read_file(dir.file("out/test.csv"));
  std::string meta1 = read_file(dir.file("out/dataset_meta.json"));
  CHECK(train1.find("target") != std::string::npos);

  // counting oracle: sum over traces of (|t|-2), split 8/4
  // 12 traces of length 8 -> 6 prefixes each
  CHECK(meta1.find("\"train\": 48") != std::string::npos);
  CHECK(meta1.find("\"test\": 24") != std::string::npos);

  std::ostringstream out2;
  CHECK(cmd_build_dataset(config, out2, err) == kExitOk);
  CHECK(read_file(dir.file("out/train.csv")) == train1);
  CHECK(read_file(dir.file("out/test.csv")) == test1);
  CHECK(read_file(dir.file("out/dataset_meta.json")) == meta1);
}

TEST_CASE("cli: train, evaluate and predict round through model files") {
  TempDir dir;
  write_xes_file(generate_synthetic_log({.traces = 24}), dir.file("log.xes"));

  RunConfig config;
  config.log_path = dir.file("log.xes");
  config.rule_path = dir.file("rule.txt");
  config.out_dir = dir.file("out");
  config.algorithm = Algorithm::DecisionTree;
  write_file(config.rule_path, kPingPongRule);

  std::ostringstream out, err;
  CHECK(cmd_train(config, "", out, err) == kExitOk);
  CHECK(fs::exists(dir.file("out/model.json")));

  std::ostringstream eval_out;
  CHECK(cmd_evaluate(config, "", eval_out, err) == kExitOk);
  CHECK(eval_out.str().find("decisionTree") != std::string::npos);
  CHECK(fs::exists(dir.file("out/report.json")));

  std::ostringstream pred_out;
  CHECK(cmd_predict(config, dir.file("out/model.json"), "T0002", 4, pred_out, err) == kExitOk);
  CHECK(pred_out.str().find("prediction: ") != std::string::npos);

  CHECK_THROWS_AS(cmd_predict(config, dir.file("out/model.json"), "T0002", 99, pred_out, err),
                  DomainError);
  CHECK_THROWS_AS(cmd_predict(config, dir.file("out/model.json"), "missing", 2, pred_out, err),
                  DomainError);
}

TEST_CASE("cli: gen-synthetic output reparses with the planted structure") {
  TempDir dir;
  std::ostringstream out, err;
  SyntheticParams params;
  params.traces = 10;
  CHECK(cmd_gen_synthetic(params, dir.file("syn.xes"), out, err) == kExitOk);

  EventLog log = parse_xes_file(dir.file("syn.xes")).log;
  REQUIRE(log.traces.size() == 10);
  std::size_t pingpong = 0;
  for (const auto& t : log.traces) {
    REQUIRE(t.size() == 8);
    if (t.at(2).attr("concept:name") == AttrValue::str("Escalate")) ++pingpong;
  }
  CHECK(pingpong == 5);

  // full pipeline on the generated file stays deterministic end to end
  RunConfig config;
  config.log_path = dir.file("syn.xes");
  config.rule_path = dir.file("rule.txt");
  config.out_dir = dir.file("out");
  config.algorithm = Algorithm::RandomForest;
  config.params.n_trees = 5;
  write_file(config.rule_path, kPingPongRule);
  CHECK(cmd_train(config, "", out, err) == kExitOk);
  std::string model1 = read_file(dir.file("out/model.json"));
  CHECK(cmd_train(config, "", out, err) == kExitOk);
  CHECK(read_file(dir.file("out/model.json")) == model1);
}
