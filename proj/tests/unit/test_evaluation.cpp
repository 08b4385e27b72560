#include <doctest.h>

#include <cmath>

#include "procast/evaluation.hpp"
#include "procast/foe_parser.hpp"
#include "procast/synthetic.hpp"

using namespace procast;

TEST_CASE("slice points: length 8 under half-up rounding") {
  CHECK(slice_point(8, 0.25, SliceRounding::HalfUp) == 2);
  CHECK(slice_point(8, 0.5, SliceRounding::HalfUp) == 4);
  CHECK(slice_point(8, 0.75, SliceRounding::HalfUp) == 6);
}

TEST_CASE("slice points clamp into 2..n-1 and honor the rounding mode") {
  CHECK(slice_point(3, 0.25, SliceRounding::HalfUp) == 2);   // round(0.75) -> clamp up
  CHECK(slice_point(3, 0.75, SliceRounding::HalfUp) == 2);   // round(2.25) -> clamp down
  CHECK(slice_point(6, 0.25, SliceRounding::HalfUp) == 2);   // round-half-up of 1.5
  CHECK(slice_point(6, 0.25, SliceRounding::Floor) == 2);    // floor(1.5) -> clamp
  CHECK(slice_point(10, 0.25, SliceRounding::Floor) == 2);
  CHECK(slice_point(10, 0.25, SliceRounding::Ceil) == 3);
  CHECK(slice_point(99, 0.75, SliceRounding::HalfUp) == 74);
}

namespace {

struct Fixture {
  EventLog log = generate_synthetic_log({.traces = 40});
  foe::AnalyticRule pingpong = foe::parse_rule(
      "< exists i . (i > curr and e[i].org:group != e[i+1].org:group and i+1 <= last and "
      "e[i].concept:name != \"Queued\") => \"Ping-Pong\" , \"Not Ping-Pong\" >");
  foe::AnalyticRule remaining = foe::parse_rule(
      "< curr < last => e[last].time:timestamp - e[curr].time:timestamp , 0 >");
  std::vector<EncoderSpec> specs{{"counts", EncoderKind::OneHotCounts, "concept:name"},
                                 {"time", EncoderKind::TimeFeatures, ""}};
};

}  // namespace

TEST_CASE("evaluate: a perfect model scores 1.0 everywhere") {
  Fixture fx;
  auto [train_log, test_log] = split_log(fx.log, SplitSpec{});
  FeatureEncoder enc = FeatureEncoder::fit(train_log, fx.specs);
  Dataset train = build_dataset(fx.pingpong, train_log, enc);
  Model model = Model::train(train, Algorithm::DecisionTree);

  MetricsReport report = evaluate_model(model, fx.pingpong, test_log, enc);
  for (Slice s : {Slice::Early, Slice::Mid, Slice::Late, Slice::All}) {
    const SliceMetrics& m = report.at(s);
    REQUIRE(m.count > 0);
    CHECK(*m.accuracy == 1.0);
    CHECK(*m.auc == 1.0);
  }
  CHECK(report.all.count > report.late.count);
}

TEST_CASE("evaluate: mean baseline numbers match hand arithmetic") {
  // train targets {1,2,3} -> mean 2; test truths {2,4}:
  // MAE = (0+2)/2 = 1, RMSE = sqrt((0+4)/2) = sqrt(2)
  std::vector<double> truths{2, 4};
  std::vector<double> baseline(truths.size(), 2.0);
  auto [mae, rmse] = mae_rmse(baseline, truths);
  CHECK(mae == 1.0);
  CHECK(rmse == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("evaluate: regression report carries the baseline row") {
  Fixture fx;
  auto [train_log, test_log] = split_log(fx.log, SplitSpec{});
  FeatureEncoder enc = FeatureEncoder::fit(train_log, fx.specs);
  Dataset train = build_dataset(fx.remaining, train_log, enc);
  Model model = Model::train(train, Algorithm::LinearRegression);

  MetricsReport report = evaluate_model(model, fx.remaining, test_log, enc);
  REQUIRE(report.baseline_all.has_value());
  CHECK(*report.all.mae <= *report.baseline_all->mae);
  CHECK(*report.all.mae <= *report.all.rmse + 1e-9);

  // baseline must equal the closed form: constant prediction at train mean
  std::vector<double> truths;
  for (const auto& trace : test_log.traces) {
    for (std::size_t k = 2; k < trace.size(); ++k) {
      auto tv = foe::apply_rule(fx.remaining, TracePrefix(trace, k));
      truths.push_back(tv.num);
    }
  }
  std::vector<double> constant(truths.size(), model.training_target_mean());
  auto [mae, rmse] = mae_rmse(constant, truths);
  CHECK(*report.baseline_all->mae == doctest::Approx(mae));
  CHECK(*report.baseline_all->rmse == doctest::Approx(rmse));
}

TEST_CASE("evaluate: slice metrics equal the filtered-All computation") {
  Fixture fx;
  auto [train_log, test_log] = split_log(fx.log, SplitSpec{});
  FeatureEncoder enc = FeatureEncoder::fit(train_log, fx.specs);
  Dataset train = build_dataset(fx.pingpong, train_log, enc);
  Model model = Model::train(train, Algorithm::MeanBaseline);
  MetricsReport report = evaluate_model(model, fx.pingpong, test_log, enc);

  // recompute Late directly, trace by trace
  std::size_t correct = 0, total = 0;
  for (const auto& trace : test_log.traces) {
    if (trace.size() < 3) continue;
    std::size_t k = slice_point(trace.size(), 0.75, SliceRounding::HalfUp);
    TracePrefix p(trace, k);
    auto truth = foe::apply_rule(fx.pingpong, p);
    if (truth.is_undefined()) continue;
    Prediction pred = model.predict(enc.encode(p));
    if (pred.label == truth.to_string()) ++correct;
    ++total;
  }
  REQUIRE(total == report.late.count);
  CHECK(*report.late.accuracy ==
        doctest::Approx(static_cast<double>(correct) / static_cast<double>(total)));
}

TEST_CASE("evaluate: majority baseline accuracy equals the majority frequency") {
  Fixture fx;
  auto [train_log, test_log] = split_log(fx.log, SplitSpec{});
  FeatureEncoder enc = FeatureEncoder::fit(train_log, fx.specs);
  Dataset train = build_dataset(fx.pingpong, train_log, enc);
  Model model = Model::train(train, Algorithm::MeanBaseline);
  MetricsReport report = evaluate_model(model, fx.pingpong, test_log, enc);

  const std::string majority = model.predict(enc.encode(TracePrefix(test_log.traces[0], 2))).label;
  std::size_t hits = 0, total = 0;
  for (const auto& trace : test_log.traces) {
    for (std::size_t k = 2; k < trace.size(); ++k) {
      auto truth = foe::apply_rule(fx.pingpong, TracePrefix(trace, k));
      if (truth.is_undefined()) continue;
      if (truth.to_string() == majority) ++hits;
      ++total;
    }
  }
  CHECK(*report.all.accuracy ==
        doctest::Approx(static_cast<double>(hits) / static_cast<double>(total)));
}

TEST_CASE("evaluate: rule/model kind mismatch is an error; short traces are skipped") {
  Fixture fx;
  auto [train_log, test_log] = split_log(fx.log, SplitSpec{});
  FeatureEncoder enc = FeatureEncoder::fit(train_log, fx.specs);
  Dataset train = build_dataset(fx.pingpong, train_log, enc);
  Model classifier = Model::train(train, Algorithm::DecisionTree);
  CHECK_THROWS_AS(evaluate_model(classifier, fx.remaining, test_log, enc), DomainError);

  EventLog tiny;
  Trace t1("short");
  for (int i = 0; i < 2; ++i) {
    Event e;
    e.set("concept:name", AttrValue::str("x"));
    t1.append(std::move(e));
  }
  tiny.traces.push_back(std::move(t1));
  MetricsReport r = evaluate_model(classifier, fx.pingpong, tiny, enc);
  CHECK(r.skipped_traces == 1);
  CHECK(r.all.count == 0);
}

TEST_CASE("report table renders both metric blocks") {
  Fixture fx;
  auto [train_log, test_log] = split_log(fx.log, SplitSpec{});
  FeatureEncoder enc = FeatureEncoder::fit(train_log, fx.specs);
  Dataset train = build_dataset(fx.remaining, train_log, enc);
  Model model = Model::train(train, Algorithm::LinearRegression);
  MetricsReport report = evaluate_model(model, fx.remaining, test_log, enc);

  std::string table = report.table(1000.0, " (in s)");
  CHECK(table.find("MAE (in s)") != std::string::npos);
  CHECK(table.find("RMSE (in s)") != std::string::npos);
  CHECK(table.find("linearRegression") != std::string::npos);
  CHECK(table.find("meanBaseline") != std::string::npos);
  CHECK(table.find("Early") != std::string::npos);
}
