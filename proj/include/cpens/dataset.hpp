#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cpens {

enum class FeatureKind { Numeric, Categorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> categories;  // Categorical only

  bool operator==(const FeatureSpec&) const = default;
};

// One cell: a numeric value, or the category index for categorical features.
// nullopt marks a missing value.
using Cell = std::optional<double>;

struct Example {
  std::string id;
  std::vector<Cell> values;  // aligned with the dataset schema
  std::optional<int> label;  // index into Dataset::classes

  bool operator==(const Example&) const = default;
};

struct Dataset {
  std::vector<FeatureSpec> schema;
  std::vector<std::string> classes;
  std::vector<Example> examples;

  std::size_t n_features() const { return schema.size(); }
  std::size_t size() const { return examples.size(); }
  std::vector<int> class_counts() const;

  bool operator==(const Dataset&) const = default;
};

// Schema/example consistency: unique feature names, aligned value vectors,
// category and label indices in range. Throws DataError on violation.
void validate(const Dataset& ds);

struct CsvOptions {
  std::optional<std::string> label_column;          // nullopt: unlabeled data
  std::map<std::string, FeatureKind> schema_hints;  // per-column kind overrides
  std::optional<std::vector<std::string>> classes;  // pre-declared class set
};

// RFC-4180-style CSV with a header row. Empty cells are missing values. A
// column named "id" supplies example ids; otherwise the row index is used.
// Columns are Numeric iff every non-empty cell parses as a finite decimal
// number, unless overridden through schema_hints.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

// Writes id + features + label columns; category cells as category names,
// numeric cells in shortest round-trip form.
std::string to_csv(const Dataset& ds);
void write_csv(const Dataset& ds, const std::string& path);

struct SyntheticConfig {
  int n_examples = 402;
  int n_features = 41;
  double class_balance = 0.56;  // fraction assigned to class_names[0]
  double separation = 1.0;      // distance between class means, every feature
  double noise_rate = 0.0;      // fraction of labels flipped
  std::uint64_t seed = 0;
  std::vector<std::string> class_names = {"sMCI", "cMCI"};
};

// Gaussian class-conditional data: class means at -separation/2 and
// +separation/2 on every feature, unit variance. round(n * balance) examples
// are assigned class 0, and round(n * noise_rate) labels are then flipped.
Dataset generate_synthetic(const SyntheticConfig& cfg);

struct FoldSplit {
  std::vector<int> train;
  std::vector<int> test;
};

// Stratified k-fold partition: each class's indices are shuffled with the
// seeded generator and dealt round-robin, so per-class counts across folds
// differ by at most one. Requires every example labeled and every class to
// have at least k members.
std::vector<FoldSplit> stratified_folds(const Dataset& ds, int k, std::uint64_t seed);

Dataset subset_rows(const Dataset& ds, const std::vector<int>& rows);
Dataset project_features(const Dataset& ds, const std::vector<int>& feature_indices);
Example project_example(const Example& ex, const std::vector<int>& feature_indices);

}  // namespace cpens
