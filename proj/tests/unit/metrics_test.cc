#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "sfmval/alignment/similarity.h"
#include "sfmval/metrics/report.h"
#include "sfmval/synth/circuit.h"
#include "sfmval/util/text.h"
#include "support/expect_error.h"
#include "support/oracles.h"

namespace sfmval {
namespace {

Trajectory SmallCircuit(int n = 400) {
  CircuitParams params;
  params.n_frames = n;
  return GenerateCircuit(params);
}

TEST(Rms, Examples) {
  const std::vector<double> zeros = {0, 0, 0}, pm = {1, -1};
  EXPECT_EQ(Rms(zeros), 0);
  EXPECT_EQ(Rms(pm), 1);
  EXPECT_SFM_ERROR(Rms({}), ErrorCode::kEmptyInput);
}

TEST(Rms, MatchesTwoPassOracle) {
  std::mt19937_64 rng(2017);
  std::normal_distribution<double> normal;
  std::vector<double> v(1000);
  for (double& x : v) x = normal(rng);
  EXPECT_NEAR(Rms(v), oracle::TwoPassRms(v), 1e-12);
}

TEST(Evaluate, IdenticalTrajectoriesGiveZeros) {
  const Trajectory gt = SmallCircuit();
  const AlignmentReport r = Evaluate(gt, gt);
  EXPECT_EQ(r.n_pairs, gt.size());
  EXPECT_LE(r.rms_avg, 1e-12);
  EXPECT_LE(r.max_abs_residual, 1e-12);
  EXPECT_NEAR(r.transform.scale, 1, 1e-12);
  EXPECT_LE(r.transform.translation.norm(), 1e-9);
}

TEST(Evaluate, PureGaugeIsAbsorbed) {
  const Trajectory gt = SmallCircuit();
  SimilarityTransformd T;
  T.scale = 0.2;
  T.rotation = EulerXYZToQuaternion<double>({1, -0.5, 2});
  T.translation = Vector3d(-40, 7, 3);
  const AlignmentReport r = Evaluate(gt, ApplySimilarity(T, gt));
  EXPECT_LE(r.rms_x, 1e-9);
  EXPECT_LE(r.rms_y, 1e-9);
  EXPECT_LE(r.rms_z, 1e-9);
  EXPECT_LE(r.rms_3d, 1e-9);
  EXPECT_NEAR(r.transform.scale, 5, 1e-9);
}

TEST(Evaluate, PerAxisNoiseRecovered) {
  CircuitParams params;
  const Trajectory gt = GenerateCircuit(params);
  NoiseModel noise;
  noise.sigma = Vector3d(0.9, 1.0, 0.3);
  noise.seed = 42;
  const AlignmentReport r = Evaluate(gt, Perturb(gt, noise));
  EXPECT_NEAR(r.rms_x, 0.9, 0.05 * 0.9);
  EXPECT_NEAR(r.rms_y, 1.0, 0.05 * 1.0);
  EXPECT_NEAR(r.rms_z, 0.3, 0.05 * 0.3);
}

TEST(Evaluate, DerivedFieldsAreConsistent) {
  const Trajectory gt = SmallCircuit();
  NoiseModel noise;
  noise.sigma = Vector3d(0.5, 0.2, 0.1);
  noise.seed = 3;
  const AlignmentReport r = Evaluate(gt, Perturb(gt, noise));
  EXPECT_DOUBLE_EQ(r.rms_avg, (r.rms_x + r.rms_y + r.rms_z) / 3);
  EXPECT_DOUBLE_EQ(r.rms_3d, std::sqrt(r.rms_x * r.rms_x + r.rms_y * r.rms_y + r.rms_z * r.rms_z));
  ASSERT_EQ(r.residuals.size(), r.n_pairs);
  ASSERT_EQ(r.frame_keys.size(), r.n_pairs);
  double largest = 0;
  std::vector<double> xs;
  for (const Vector3d& res : r.residuals) {
    largest = std::max(largest, res.cwiseAbs().maxCoeff());
    xs.push_back(res.x());
  }
  EXPECT_EQ(r.max_abs_residual, largest);
  EXPECT_NEAR(r.rms_x, oracle::TwoPassRms(xs), 1e-12);
}

TEST(Evaluate, CountsExcludedSamples) {
  const Trajectory gt = SmallCircuit();
  NoiseModel noise;
  noise.dropout = 0.1;
  noise.seed = 4;
  const Trajectory est = Perturb(gt, noise);
  const AlignmentReport r = Evaluate(gt, est);
  EXPECT_EQ(r.n_pairs, est.size());
  EXPECT_EQ(r.n_excluded_gt, gt.size() - est.size());
  EXPECT_EQ(r.n_excluded_est, 0u);
}

TEST(Evaluate, NoScaleLeavesScaleError) {
  const Trajectory gt = SmallCircuit();
  SimilarityTransformd T;
  T.scale = 2;
  EvaluateOptions rigid;
  rigid.horn.with_scale = false;
  EXPECT_GT(Evaluate(gt, ApplySimilarity(T, gt), rigid).rms_avg, 10);
}

TEST(Evaluate, PropagatesErrors) {
  Trajectory gt = SmallCircuit();
  Trajectory shifted = gt;
  for (auto& s : shifted.samples) s.frame_key += 100000;
  EXPECT_SFM_ERROR(Evaluate(gt, shifted), ErrorCode::kNoOverlap);
  Trajectory two = gt;
  two.samples.resize(2);
  EXPECT_SFM_ERROR(Evaluate(two, two), ErrorCode::kTooFewPoints);
  Trajectory straight = gt;
  for (size_t i = 0; i < straight.size(); ++i) straight.samples[i].position = Vector3d(double(i), 0, 0);
  EXPECT_SFM_ERROR(Evaluate(straight, straight), ErrorCode::kDegenerateGeometry);
}

TEST(Compare, SingleAndStable) {
  AlignmentReport a, b, c;
  a.rms_avg = 0.5;
  b.rms_avg = 0.2;
  c.rms_avg = 0.5;
  EXPECT_EQ(Compare({{"only", a}}).rows.size(), 1u);
  const ComparisonTable t = Compare({{"a", a}, {"b", b}, {"c", c}});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].label, "b");
  EXPECT_EQ(t.rows[1].label, "a");
  EXPECT_EQ(t.rows[2].label, "c");
  EXPECT_TRUE(t.sorted);
  const ComparisonTable unsorted = Compare({{"a", a}, {"b", b}}, false);
  EXPECT_EQ(unsorted.rows[0].label, "a");
  EXPECT_SFM_ERROR(Compare({}), ErrorCode::kEmptyInput);
}

TEST(Compare, SixDriftLevelsMatchManualSort) {
  const Trajectory gt = SmallCircuit();
  std::vector<ComparisonRow> rows;
  const double drifts[6] = {0.02, 0.001, 0.05, 0.01, 0.005, 0.03};
  for (int i = 0; i < 6; ++i) {
    NoiseModel noise;
    noise.sigma = Vector3d(0.1, 0.1, 0.1);
    noise.drift_step = Vector3d::Constant(drifts[i]);
    noise.seed = 100 + i;
    rows.push_back({"drift" + std::to_string(i), Evaluate(gt, Perturb(gt, noise))});
  }
  std::vector<ComparisonRow> manual = rows;
  for (size_t i = 1; i < manual.size(); ++i) {
    for (size_t j = i; j > 0 && manual[j].report.rms_avg < manual[j - 1].report.rms_avg; --j) {
      std::swap(manual[j], manual[j - 1]);
    }
  }
  const ComparisonTable table = Compare(rows);
  for (size_t i = 0; i < manual.size(); ++i) EXPECT_EQ(table.rows[i].label, manual[i].label);
}

TEST(ReportWriters, CsvParsesBack) {
  const Trajectory gt = SmallCircuit(50);
  NoiseModel noise;
  noise.sigma = Vector3d(0.1, 0.2, 0.3);
  noise.seed = 9;
  const AlignmentReport r = Evaluate(gt, Perturb(gt, noise));
  std::ostringstream out;
  WriteReportCsv(out, std::vector<ComparisonRow>{{"with,comma", r}});
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, kReportCsvHeader);
  EXPECT_EQ(row.rfind("\"with,comma\",50,", 0), 0u) << row;
  const std::string numbers = row.substr(row.find("\",") + 2);
  const auto fields = Split(numbers, ',');
  ASSERT_EQ(fields.size(), 7u);
  EXPECT_EQ(ParseDouble(fields[1]), r.rms_x);
  EXPECT_EQ(ParseDouble(fields[4]), r.rms_avg);

  std::ostringstream residuals;
  WriteResidualTable(residuals, r);
  std::istringstream res_in(residuals.str());
  std::string line;
  size_t lines = 0;
  while (std::getline(res_in, line)) ++lines;
  EXPECT_EQ(lines, r.n_pairs + 1);
}

TEST(ReportWriters, CsvField) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace sfmval
