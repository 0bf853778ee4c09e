#include "mogp/dataset.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace mogp;

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

// Spreads `positives` positive rows evenly over `total` rows; telescoping
// integer division makes the count exact.
bool spread_positive(std::size_t i, std::size_t positives, std::size_t total) {
  return (i + 1) * positives / total > i * positives / total;
}

// Synthetic raw files below mimic the source formats exactly, with feature 0
// (or the first real feature) equal to the row index so order preservation
// and split bookkeeping are checkable.

std::string write_ion_raw(std::size_t positives = 126, std::size_t total = 351) {
  const std::string path = temp_path("ion.data");
  std::ofstream out(path);
  for (std::size_t i = 0; i < total; ++i) {
    out << i;
    for (int j = 1; j < 34; ++j)
      out << ',' << (static_cast<double>((i * 31 + j * 17) % 200) - 100.0) / 50.0;
    out << ',' << (spread_positive(i, positives, total) ? 'b' : 'g') << '\n';
  }
  return path;
}

std::string write_spect_raw() {
  const std::string path = temp_path("spect.data");
  std::ofstream out(path);
  for (std::size_t i = 0; i < 267; ++i) {
    out << (spread_positive(i, 55, 267) ? '0' : '1');
    for (int j = 1; j <= 22; ++j) out << ',' << (i + j) % 2;
    out << '\n';
  }
  return path;
}

// Localization class comes from a fixed pool (244 MIT, 163 ME3, rest CYT)
// walked with a stride coprime to the total, so the classes interleave.
std::string yeast_class_of(std::size_t i, std::size_t total) {
  const std::size_t k = i * 997 % total;
  if (k < 244) return "MIT";
  if (k < 407) return "ME3";
  return "CYT";
}

std::string write_yeast_raw(std::size_t total) {
  const std::string path = temp_path("yeast" + std::to_string(total) + ".data");
  std::ofstream out(path);
  char name[16];
  for (std::size_t i = 0; i < total; ++i) {
    std::snprintf(name, sizeof name, "P%04zu_YEAST", i);
    out << name;
    out << "  " << i;
    for (int j = 1; j < 8; ++j) out << "  " << static_cast<double>((i * 13 + j * 7) % 100) / 100.0;
    out << "  " << yeast_class_of(i, total) << '\n';
  }
  return path;
}

// Ring pool: 42 eighteens, 689 nines, 32 nineteens, remainder tens.
long abalone_rings_of(std::size_t i) {
  const std::size_t k = i * 2011 % 4177;
  if (k < 42) return 18;
  if (k < 731) return 9;
  if (k < 763) return 19;
  return 10;
}

std::string write_abalone_raw() {
  const std::string path = temp_path("abalone.data");
  std::ofstream out(path);
  const char* sexes = "MFI";
  for (std::size_t i = 0; i < 4177; ++i) {
    out << sexes[i % 3];
    out << ',' << i;
    for (int j = 2; j < 8; ++j) out << ',' << static_cast<double>((i * 13 + j * 7) % 1000) / 1000.0;
    out << ',' << abalone_rings_of(i) << '\n';
  }
  return path;
}

TEST(Ingest, IonCountsAndOrderPreserved) {
  const Dataset ds = ingest_dataset(write_ion_raw(), DatasetId::ion);
  EXPECT_EQ(ds.name, "ion");
  EXPECT_EQ(ds.rows(), 351u);
  EXPECT_EQ(ds.positive_count, 126u);
  EXPECT_EQ(ds.negative_count, 225u);
  EXPECT_EQ(ds.feature_count(), 34u);
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    ASSERT_DOUBLE_EQ(ds.features.get(r, 0), static_cast<double>(r));
    ASSERT_EQ(ds.labels[r], spread_positive(r, 126, 351) ? 1 : 0);
  }
}

TEST(Ingest, SpectClassColumnComesFirst) {
  const Dataset ds = ingest_dataset(write_spect_raw(), DatasetId::spect);
  EXPECT_EQ(ds.rows(), 267u);
  EXPECT_EQ(ds.positive_count, 55u);
  EXPECT_EQ(ds.feature_count(), 22u);
  // Feature c of row i is (i + c + 1) % 2: the label bit is not a feature.
  for (std::size_t c = 0; c < 22; ++c) EXPECT_DOUBLE_EQ(ds.features.get(0, c), (c + 1) % 2);
  EXPECT_EQ(ds.labels[0], spread_positive(0, 55, 267) ? 1 : 0);
}

TEST(Ingest, YeastVariantsShareTheFileAndDifferInPolarity) {
  const std::string path = write_yeast_raw(1484);
  const Dataset mit = ingest_dataset(path, DatasetId::yeast1);
  const Dataset me3 = ingest_dataset(path, DatasetId::yeast2);
  EXPECT_EQ(mit.rows(), 1484u);
  EXPECT_EQ(mit.positive_count, 244u);
  EXPECT_EQ(me3.rows(), 1484u);
  EXPECT_EQ(me3.positive_count, 163u);
  EXPECT_EQ(mit.feature_count(), 8u);
  for (std::size_t r = 0; r < mit.rows(); ++r) {
    ASSERT_EQ(mit.labels[r], yeast_class_of(r, 1484) == "MIT" ? 1 : 0);
    ASSERT_EQ(me3.labels[r], yeast_class_of(r, 1484) == "ME3" ? 1 : 0);
    ASSERT_FALSE(mit.labels[r] == 1 && me3.labels[r] == 1);
  }
}

TEST(Ingest, YeastAcceptsTheDeduplicatedTotalToo) {
  const Dataset ds = ingest_dataset(write_yeast_raw(1482), DatasetId::yeast1);
  EXPECT_EQ(ds.rows(), 1482u);
  EXPECT_EQ(ds.positive_count, 244u);
}

TEST(Ingest, AbaloneVariantsFilterAndMapSex) {
  const std::string path = write_abalone_raw();
  const Dataset rare_ring = ingest_dataset(path, DatasetId::abal2);
  EXPECT_EQ(rare_ring.rows(), 4177u);
  EXPECT_EQ(rare_ring.positive_count, 32u);
  EXPECT_EQ(rare_ring.feature_count(), 8u);
  EXPECT_DOUBLE_EQ(rare_ring.features.get(0, 0), 0.0);  // M
  EXPECT_DOUBLE_EQ(rare_ring.features.get(1, 0), 1.0);  // F
  EXPECT_DOUBLE_EQ(rare_ring.features.get(2, 0), 2.0);  // I
  for (std::size_t r = 0; r < rare_ring.rows(); ++r)
    ASSERT_EQ(rare_ring.labels[r], abalone_rings_of(r) == 19 ? 1 : 0);

  const Dataset two_ring = ingest_dataset(path, DatasetId::abal1);
  EXPECT_EQ(two_ring.rows(), 731u);
  EXPECT_EQ(two_ring.positive_count, 42u);
  EXPECT_EQ(two_ring.negative_count, 689u);
  // Kept rows preserve file order; feature 1 carries the original row index.
  std::size_t kept = 0;
  for (std::size_t i = 0; i < 4177; ++i) {
    const long rings = abalone_rings_of(i);
    if (rings != 9 && rings != 18) continue;
    ASSERT_DOUBLE_EQ(two_ring.features.get(kept, 1), static_cast<double>(i));
    ASSERT_EQ(two_ring.labels[kept], rings == 18 ? 1 : 0);
    ++kept;
  }
  EXPECT_EQ(kept, 731u);
}

TEST(Ingest, CountMismatchNamesExpectedAndFound) {
  try {
    ingest_dataset(write_ion_raw(126, 350), DatasetId::ion);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("351"), std::string::npos) << what;
    EXPECT_NE(what.find("350"), std::string::npos) << what;
  }
  try {
    ingest_dataset(write_ion_raw(127, 351), DatasetId::ion);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("126"), std::string::npos) << what;
    EXPECT_NE(what.find("127"), std::string::npos) << what;
  }
}

TEST(Ingest, UnknownLabelReportsTheLineNumber) {
  const std::string path = temp_path("bad_label.data");
  {
    std::ofstream out(path);
    for (int i = 0; i < 4; ++i) {
      out << i;
      for (int j = 1; j < 34; ++j) out << ',' << j;
      out << ",g\n";
    }
    out << 4;
    for (int j = 1; j < 34; ++j) out << ',' << j;
    out << ",x\n";
  }
  try {
    ingest_dataset(path, DatasetId::ion);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 5"), std::string::npos) << what;
    EXPECT_NE(what.find("'x'"), std::string::npos) << what;
  }
}

TEST(Ingest, MalformedRowsReportTheLineNumber) {
  const std::string ragged = temp_path("ragged.data");
  {
    std::ofstream out(ragged);
    out << "1,2,3,g\n";
  }
  EXPECT_THROW(ingest_dataset(ragged, DatasetId::ion), DataError);

  const std::string bad_sex = temp_path("bad_sex.data");
  {
    std::ofstream out(bad_sex);
    out << "M,1,2,3,4,5,6,7,9\n";
    out << "Q,1,2,3,4,5,6,7,9\n";
  }
  try {
    ingest_dataset(bad_sex, DatasetId::abal2);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }

  const std::string bad_number = temp_path("bad_number.data");
  {
    std::ofstream out(bad_number);
    out << "name 0.1 0.2 zzz 0.4 0.5 0.6 0.7 0.8 MIT\n";
  }
  EXPECT_THROW(ingest_dataset(bad_number, DatasetId::yeast1), DataError);
}

TEST(Ingest, EmptyFileIsAnError) {
  const std::string path = temp_path("empty.data");
  { std::ofstream out(path); }
  EXPECT_THROW(ingest_dataset(path, DatasetId::ion), DataError);
  {
    std::ofstream out(path);
    out << "\n   \n\t\n";
  }
  EXPECT_THROW(ingest_dataset(path, DatasetId::ion), DataError);
  EXPECT_THROW(ingest_dataset(temp_path("no_such_file.data"), DatasetId::ion), DataError);
}

TEST(CanonicalCsv, RoundTripIsExact) {
  const Dataset ds = ingest_dataset(write_ion_raw(), DatasetId::ion);
  const std::string path = temp_path("ion_canonical.csv");
  write_canonical_csv(ds, path);
  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.substr(0, 9), "f0,f1,f2,");
    EXPECT_EQ(header.substr(header.size() - 9), "f33,label");
  }
  const Dataset back = read_canonical_csv(path, "ion");
  EXPECT_EQ(back.name, "ion");
  EXPECT_TRUE(back.features == ds.features);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.positive_count, ds.positive_count);
}

TEST(CanonicalCsv, RoundTripPreservesAwkwardReals) {
  FeatureTable features;
  features.push_row(std::vector<double>{0.1, 1.0 / 3.0});
  features.push_row(std::vector<double>{std::nextafter(2.0, 3.0), -0.0});
  features.push_row(std::vector<double>{1e-300, 12345.678901234567});
  features.push_row(std::vector<double>{-7.25, 3.0});
  Dataset ds = detail::make_dataset("tiny", std::move(features), {1, 0, 0, 0});
  const std::string path = temp_path("tiny_canonical.csv");
  write_canonical_csv(ds, path);
  const Dataset back = read_canonical_csv(path, "tiny");
  EXPECT_TRUE(back.features == ds.features);
  EXPECT_EQ(back.labels, ds.labels);
}

TEST(CanonicalCsv, ReaderRejectsMalformedFiles) {
  const std::string path = temp_path("bad_canonical.csv");
  {
    std::ofstream out(path);
    out << "x0,label\n0.5,1\n";
  }
  EXPECT_THROW(read_canonical_csv(path, "bad"), DataError);
  {
    std::ofstream out(path);
    out << "f0,label\n0.5,2\n";
  }
  EXPECT_THROW(read_canonical_csv(path, "bad"), DataError);
  {
    std::ofstream out(path);
    out << "f0,label\n0.5,1\n0.6,1\n";  // single class
  }
  EXPECT_THROW(read_canonical_csv(path, "bad"), DataError);
  {
    std::ofstream out(path);
    out << "f0,label\n0.5,1\n0.6,1\n0.7,0\n";  // positive majority
  }
  EXPECT_THROW(read_canonical_csv(path, "bad"), DataError);
}

TEST(StratifiedSplit, HalvesPreserveBalanceAndPartitionTheRows) {
  const Dataset ds = ingest_dataset(write_ion_raw(), DatasetId::ion);
  const SplitDataset split = stratified_split(ds, 42);
  EXPECT_EQ(split.split_seed, 42u);
  EXPECT_EQ(split.train.rows(), 176u);
  EXPECT_EQ(split.train.positive_count, 63u);
  EXPECT_EQ(split.train.negative_count, 113u);
  EXPECT_EQ(split.test.rows(), 175u);
  EXPECT_EQ(split.test.positive_count, 63u);
  EXPECT_EQ(split.test.negative_count, 112u);

  // Feature 0 is the source row index: the halves must partition 0..350.
  std::set<double> seen;
  for (std::size_t r = 0; r < split.train.rows(); ++r)
    EXPECT_TRUE(seen.insert(split.train.features.get(r, 0)).second);
  for (std::size_t r = 0; r < split.test.rows(); ++r)
    EXPECT_TRUE(seen.insert(split.test.features.get(r, 0)).second);
  EXPECT_EQ(seen.size(), 351u);
  EXPECT_EQ(*seen.begin(), 0.0);
  EXPECT_EQ(*seen.rbegin(), 350.0);
}

TEST(StratifiedSplit, DeterministicInSeedAndSensitiveToIt) {
  const Dataset ds = ingest_dataset(write_ion_raw(), DatasetId::ion);
  const SplitDataset a = stratified_split(ds, 7);
  const SplitDataset b = stratified_split(ds, 7);
  EXPECT_TRUE(a.train.features == b.train.features);
  EXPECT_EQ(a.train.labels, b.train.labels);
  const SplitDataset c = stratified_split(ds, 8);
  EXPECT_EQ(c.train.positive_count, a.train.positive_count);
  EXPECT_FALSE(a.train.features == c.train.features);
}

TEST(StratifiedSplit, RejectsAClassWithFewerThanTwoExamples) {
  FeatureTable features;
  for (int i = 0; i < 5; ++i) features.push_row(std::vector<double>{static_cast<double>(i)});
  const Dataset ds = detail::make_dataset("tiny", std::move(features), {1, 0, 0, 0, 0});
  EXPECT_THROW(stratified_split(ds, 1), DataError);
}

TEST(Objectives, HandTalliedConfusion) {
  FeatureTable features;
  for (double v : {1.0, -1.0, 0.0, -2.0}) features.push_row(std::vector<double>{v});
  const Dataset ds = detail::make_dataset("toy", std::move(features), {1, 1, 0, 0});
  EvalScratch scratch;
  const ObjectiveResult r = objectives_on(ProgramTree::variable(0), ds, scratch);
  EXPECT_EQ(r.confusion.tp, 1);
  EXPECT_EQ(r.confusion.fn, 1);
  EXPECT_EQ(r.confusion.fp, 1);
  EXPECT_EQ(r.confusion.tn, 1);
  EXPECT_DOUBLE_EQ(r.tpr, 0.5);
  EXPECT_DOUBLE_EQ(r.tnr, 0.5);
}

TEST(Objectives, ConstantClassifiersHitTheCorners) {
  FeatureTable features;
  for (int i = 0; i < 6; ++i) features.push_row(std::vector<double>{1.0, -1.0});
  const Dataset ds = detail::make_dataset("toy", std::move(features), {1, 1, 0, 0, 0, 0});
  EvalScratch scratch;
  const ObjectiveResult all_positive = objectives_on(ProgramTree::variable(0), ds, scratch);
  EXPECT_DOUBLE_EQ(all_positive.tpr, 1.0);
  EXPECT_DOUBLE_EQ(all_positive.tnr, 0.0);
  const ObjectiveResult all_negative = objectives_on(ProgramTree::variable(1), ds, scratch);
  EXPECT_DOUBLE_EQ(all_negative.tpr, 0.0);
  EXPECT_DOUBLE_EQ(all_negative.tnr, 1.0);
}

TEST(Objectives, SignRuleBoundaries) {
  const std::vector<double> outputs = {0.0, -0.0, 1e-300, -1e-300,
                                       std::numeric_limits<double>::quiet_NaN()};
  const Confusion c = classify_confusion(outputs, {1, 1, 1, 1, 1});
  // -0.0 compares equal to zero, so it predicts positive; NaN never does.
  EXPECT_EQ(c.tp, 3);
  EXPECT_EQ(c.fn, 2);
}

}  // namespace
