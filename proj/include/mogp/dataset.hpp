#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mogp/errors.hpp"
#include "mogp/features.hpp"
#include "mogp/individual.hpp"
#include "mogp/rng.hpp"
#include "mogp/tree.hpp"

namespace mogp {

// The six classification problems.  Each maps one raw source file to a
// binary problem whose positive class is the minority class.
enum class DatasetId { ion, spect, yeast1, yeast2, abal1, abal2 };

inline const char* dataset_name(DatasetId id) {
  switch (id) {
    case DatasetId::ion: return "ion";
    case DatasetId::spect: return "spect";
    case DatasetId::yeast1: return "yeast1";
    case DatasetId::yeast2: return "yeast2";
    case DatasetId::abal1: return "abal1";
    case DatasetId::abal2: return "abal2";
  }
  throw ContractError("dataset_name: unknown id");
}

inline std::optional<DatasetId> dataset_id(std::string_view name) {
  for (DatasetId id : {DatasetId::ion, DatasetId::spect, DatasetId::yeast1, DatasetId::yeast2,
                       DatasetId::abal1, DatasetId::abal2})
    if (name == dataset_name(id)) return id;
  return std::nullopt;
}

// Binary classification data: labels are 1 for the positive (minority)
// class and 0 for the negative class.
struct Dataset {
  std::string name;
  FeatureTable features;
  std::vector<int> labels;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;

  std::size_t rows() const { return labels.size(); }
  std::size_t feature_count() const { return features.cols(); }
};

namespace detail {

inline Dataset make_dataset(std::string name, FeatureTable features, std::vector<int> labels) {
  if (features.rows() != labels.size()) throw ContractError("make_dataset: row/label mismatch");
  Dataset ds;
  ds.name = std::move(name);
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  for (int label : ds.labels) {
    if (label != 0 && label != 1) throw ContractError("make_dataset: label outside {0,1}");
    (label == 1 ? ds.positive_count : ds.negative_count) += 1;
  }
  return ds;
}

inline std::vector<std::string> read_data_lines(const std::string& path,
                                                std::vector<std::size_t>* line_numbers) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<std::string> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
    if (line_numbers) line_numbers->push_back(number);
  }
  return lines;
}

inline std::vector<std::string> split_on_comma(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::vector<std::string> split_on_whitespace(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string token;
  while (in >> token) fields.push_back(std::move(token));
  return fields;
}

inline double parse_real(const std::string& token, const std::string& path, std::size_t line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError(path + ": line " + std::to_string(line) + ": not a number: '" + token + "'");
  return value;
}

inline long parse_integer(const std::string& token, const std::string& path, std::size_t line) {
  long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError(path + ": line " + std::to_string(line) + ": not an integer: '" + token +
                    "'");
  return value;
}

inline void require_field_count(std::size_t found, std::size_t expected, const std::string& path,
                                std::size_t line) {
  if (found != expected)
    throw DataError(path + ": line " + std::to_string(line) + ": expected " +
                    std::to_string(expected) + " fields, found " + std::to_string(found));
}

struct ExpectedCounts {
  std::vector<std::size_t> totals;  // any listed total is acceptable
  std::size_t positives;
  std::size_t features;
};

inline ExpectedCounts expected_counts(DatasetId id) {
  switch (id) {
    case DatasetId::ion: return {{351}, 126, 34};
    case DatasetId::spect: return {{267}, 55, 22};
    // The distributed yeast file carries two duplicate rows that published
    // counts sometimes exclude, so both totals are accepted.
    case DatasetId::yeast1: return {{1482, 1484}, 244, 8};
    case DatasetId::yeast2: return {{1482, 1484}, 163, 8};
    case DatasetId::abal1: return {{731}, 42, 8};
    case DatasetId::abal2: return {{4177}, 32, 8};
  }
  throw ContractError("expected_counts: unknown id");
}

inline void assert_expected_counts(const Dataset& ds, DatasetId id) {
  const ExpectedCounts expected = expected_counts(id);
  if (std::find(expected.totals.begin(), expected.totals.end(), ds.rows()) ==
      expected.totals.end()) {
    std::string totals;
    for (std::size_t t : expected.totals) totals += (totals.empty() ? "" : " or ") + std::to_string(t);
    throw DataError(ds.name + ": expected " + totals + " rows, found " +
                    std::to_string(ds.rows()));
  }
  if (ds.positive_count != expected.positives)
    throw DataError(ds.name + ": expected " + std::to_string(expected.positives) +
                    " positive examples, found " + std::to_string(ds.positive_count));
  if (ds.feature_count() != expected.features)
    throw DataError(ds.name + ": expected " + std::to_string(expected.features) +
                    " features, found " + std::to_string(ds.feature_count()));
}

}  // namespace detail

// Parses one of the six raw source files into a count-checked dataset.
// Formats, per dataset:
//   ion     34 comma-separated reals, then a g/b label; b is positive.
//   spect   class bit first (0 is positive), then 22 binary features;
//           train and test portions concatenated into one file.
//   yeast   whitespace: sequence name, 8 reals, localization class;
//           MIT is positive for yeast1, ME3 for yeast2.
//   abal1   abalone rows restricted to 9 or 18 rings; 18 rings positive;
//           sex maps M, F, I to 0, 1, 2.
//   abal2   all abalone rows; 19 rings positive.
inline Dataset ingest_dataset(const std::string& path, DatasetId id) {
  std::vector<std::size_t> line_numbers;
  const std::vector<std::string> lines = detail::read_data_lines(path, &line_numbers);
  if (lines.empty()) throw DataError(path + ": empty file, zero rows");

  FeatureTable features;
  std::vector<int> labels;
  std::vector<double> row;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::string& line = lines[k];
    const std::size_t line_no = line_numbers[k];
    row.clear();
    switch (id) {
      case DatasetId::ion: {
        const std::vector<std::string> fields = detail::split_on_comma(line);
        detail::require_field_count(fields.size(), 35, path, line_no);
        for (std::size_t c = 0; c < 34; ++c)
          row.push_back(detail::parse_real(fields[c], path, line_no));
        if (fields[34] != "g" && fields[34] != "b")
          throw DataError(path + ": line " + std::to_string(line_no) + ": unknown label: '" +
                          fields[34] + "'");
        labels.push_back(fields[34] == "b" ? 1 : 0);
        break;
      }
      case DatasetId::spect: {
        const std::vector<std::string> fields = detail::split_on_comma(line);
        detail::require_field_count(fields.size(), 23, path, line_no);
        if (fields[0] != "0" && fields[0] != "1")
          throw DataError(path + ": line " + std::to_string(line_no) + ": unknown label: '" +
                          fields[0] + "'");
        labels.push_back(fields[0] == "0" ? 1 : 0);
        for (std::size_t c = 1; c < 23; ++c)
          row.push_back(detail::parse_real(fields[c], path, line_no));
        break;
      }
      case DatasetId::yeast1:
      case DatasetId::yeast2: {
        const std::vector<std::string> fields = detail::split_on_whitespace(line);
        detail::require_field_count(fields.size(), 10, path, line_no);
        for (std::size_t c = 1; c < 9; ++c)
          row.push_back(detail::parse_real(fields[c], path, line_no));
        const std::string& positive = id == DatasetId::yeast1 ? "MIT" : "ME3";
        labels.push_back(fields[9] == positive ? 1 : 0);
        break;
      }
      case DatasetId::abal1:
      case DatasetId::abal2: {
        const std::vector<std::string> fields = detail::split_on_comma(line);
        detail::require_field_count(fields.size(), 9, path, line_no);
        double sex = 0.0;
        if (fields[0] == "M")
          sex = 0.0;
        else if (fields[0] == "F")
          sex = 1.0;
        else if (fields[0] == "I")
          sex = 2.0;
        else
          throw DataError(path + ": line " + std::to_string(line_no) + ": unknown sex: '" +
                          fields[0] + "'");
        const long rings = detail::parse_integer(fields[8], path, line_no);
        if (id == DatasetId::abal1 && rings != 9 && rings != 18) continue;
        row.push_back(sex);
        for (std::size_t c = 1; c < 8; ++c)
          row.push_back(detail::parse_real(fields[c], path, line_no));
        labels.push_back((id == DatasetId::abal1 ? rings == 18 : rings == 19) ? 1 : 0);
        break;
      }
    }
    if (!row.empty()) features.push_row(row);
  }

  Dataset ds = detail::make_dataset(dataset_name(id), std::move(features), std::move(labels));
  detail::assert_expected_counts(ds, id);
  return ds;
}

// Canonical on-disk form: header f0..f{n-1},label; features printed with 17
// significant digits so the round trip is exact; label column is 1/0.
inline void write_canonical_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open file for writing");
  for (std::size_t c = 0; c < ds.feature_count(); ++c) out << 'f' << c << ',';
  out << "label\n";
  char buffer[64];
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t c = 0; c < ds.feature_count(); ++c) {
      std::snprintf(buffer, sizeof buffer, "%.17g", ds.features.get(r, c));
      out << buffer << ',';
    }
    out << ds.labels[r] << '\n';
  }
  if (!out) throw DataError(path + ": write failed");
}

inline Dataset read_canonical_csv(const std::string& path, std::string name) {
  std::vector<std::size_t> line_numbers;
  const std::vector<std::string> lines = detail::read_data_lines(path, &line_numbers);
  if (lines.empty()) throw DataError(path + ": empty file, zero rows");
  const std::vector<std::string> header = detail::split_on_comma(lines[0]);
  if (header.size() < 2 || header.back() != "label")
    throw DataError(path + ": malformed header: '" + lines[0] + "'");
  const std::size_t width = header.size() - 1;
  for (std::size_t c = 0; c < width; ++c)
    if (header[c] != "f" + std::to_string(c))
      throw DataError(path + ": malformed header: '" + lines[0] + "'");

  FeatureTable features;
  std::vector<int> labels;
  std::vector<double> row;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::size_t line_no = line_numbers[k];
    const std::vector<std::string> fields = detail::split_on_comma(lines[k]);
    detail::require_field_count(fields.size(), width + 1, path, line_no);
    row.clear();
    for (std::size_t c = 0; c < width; ++c)
      row.push_back(detail::parse_real(fields[c], path, line_no));
    if (fields[width] != "0" && fields[width] != "1")
      throw DataError(path + ": line " + std::to_string(line_no) + ": unknown label: '" +
                      fields[width] + "'");
    labels.push_back(fields[width] == "1" ? 1 : 0);
    features.push_row(row);
  }
  if (labels.empty()) throw DataError(path + ": empty file, zero rows");
  Dataset ds = detail::make_dataset(std::move(name), std::move(features), std::move(labels));
  if (ds.positive_count == 0 || ds.negative_count == 0)
    throw DataError(path + ": both classes must be present");
  if (ds.positive_count > ds.negative_count)
    throw DataError(path + ": positive class must be the minority");
  return ds;
}

// Half/half split preserving the class balance: each class is shuffled, the
// training side takes the first ceil(half) of the positives and tops up with
// negatives to ceil(total/2).  Row order inside each side follows the source.
struct SplitDataset {
  Dataset train;
  Dataset test;
  std::uint64_t split_seed = 0;
};

inline SplitDataset stratified_split(const Dataset& ds, std::uint64_t seed) {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t r = 0; r < ds.rows(); ++r)
    (ds.labels[r] == 1 ? positives : negatives).push_back(r);
  if (positives.size() < 2 || negatives.size() < 2)
    throw DataError("stratified_split: " + ds.name + ": a class has fewer than 2 examples");

  Rng rng(seed);
  rng.shuffle(positives);
  rng.shuffle(negatives);
  const std::size_t train_pos = (positives.size() + 1) / 2;
  const std::size_t train_total = (ds.rows() + 1) / 2;
  const std::size_t train_neg = train_total - train_pos;

  std::vector<std::size_t> train_rows(positives.begin(), positives.begin() + train_pos);
  train_rows.insert(train_rows.end(), negatives.begin(), negatives.begin() + train_neg);
  std::vector<std::size_t> test_rows(positives.begin() + train_pos, positives.end());
  test_rows.insert(test_rows.end(), negatives.begin() + train_neg, negatives.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  const auto take = [&](const std::vector<std::size_t>& rows) {
    FeatureTable features;
    std::vector<int> labels;
    std::vector<double> row(ds.feature_count());
    for (std::size_t r : rows) {
      for (std::size_t c = 0; c < ds.feature_count(); ++c) row[c] = ds.features.get(r, c);
      features.push_row(row);
      labels.push_back(ds.labels[r]);
    }
    return detail::make_dataset(ds.name, std::move(features), std::move(labels));
  };
  return SplitDataset{take(train_rows), take(test_rows), seed};
}

// Sign-classifier objectives of a tree on a dataset.
struct ObjectiveResult {
  double tpr = 0.0;
  double tnr = 0.0;
  Confusion confusion;
};

inline ObjectiveResult objectives_on(const ProgramTree& tree, const Dataset& ds,
                                     EvalScratch& scratch) {
  const std::vector<double> outputs = evaluate(tree, ds.features, scratch);
  const Confusion c = classify_confusion(outputs, ds.labels);
  return ObjectiveResult{true_positive_rate(c), true_negative_rate(c), c};
}

}  // namespace mogp
