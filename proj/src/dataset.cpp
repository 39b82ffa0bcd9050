#include "cpens/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cpens/error.hpp"
#include "cpens/rng.hpp"
#include "cpens/textutil.hpp"

namespace cpens {
namespace {

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool line_has_content = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_line = [&] {
    if (line_has_content || !row.empty() || !field.empty()) {
      end_field();
      rows.push_back(std::move(row));
      row.clear();
    }
    line_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty()) {
          in_quotes = true;
          line_has_content = true;
        } else {
          field += c;  // stray quote inside an unquoted field, keep it
        }
        break;
      case ',':
        end_field();
        line_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_line();
        break;
      case '\n':
        end_line();
        break;
      default:
        field += c;
        line_has_content = true;
    }
  }
  end_line();
  return rows;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty() || std::isspace(static_cast<unsigned char>(s.front()))) return std::nullopt;
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;  // "nan"/"inf" cells stay categorical
  return v;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<int> Dataset::class_counts() const {
  std::vector<int> counts(classes.size(), 0);
  for (const auto& ex : examples) {
    if (ex.label) counts[static_cast<std::size_t>(*ex.label)]++;
  }
  return counts;
}

void validate(const Dataset& ds) {
  std::set<std::string> names;
  for (const auto& spec : ds.schema) {
    if (!names.insert(spec.name).second) {
      throw DataError("duplicate feature name: " + spec.name);
    }
    if (spec.kind == FeatureKind::Numeric && !spec.categories.empty()) {
      throw DataError("numeric feature '" + spec.name + "' declares categories");
    }
    if (spec.kind == FeatureKind::Categorical && spec.categories.empty()) {
      throw DataError("categorical feature '" + spec.name + "' has no categories");
    }
  }
  for (const auto& ex : ds.examples) {
    if (ex.values.size() != ds.schema.size()) {
      throw DataError("example '" + ex.id + "' has " + std::to_string(ex.values.size()) +
                      " values, schema has " + std::to_string(ds.schema.size()));
    }
    for (std::size_t f = 0; f < ds.schema.size(); ++f) {
      if (!ex.values[f] || ds.schema[f].kind != FeatureKind::Categorical) continue;
      const double v = *ex.values[f];
      if (v != std::floor(v) || v < 0 ||
          v >= static_cast<double>(ds.schema[f].categories.size())) {
        throw DataError("example '" + ex.id + "': category index out of range for feature '" +
                        ds.schema[f].name + "'");
      }
    }
    if (ex.label && (*ex.label < 0 || *ex.label >= static_cast<int>(ds.classes.size()))) {
      throw DataError("example '" + ex.id + "' has label index out of range");
    }
  }
}

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  const auto rows = parse_rows(text);
  if (rows.empty()) throw DataError("CSV has no header row");
  const auto& header = rows[0];

  {
    std::set<std::string> seen;
    for (const auto& name : header) {
      if (!seen.insert(name).second) throw DataError("duplicate header name: " + name);
    }
  }

  int label_col = -1;
  if (options.label_column) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == *options.label_column) label_col = static_cast<int>(i);
    }
    if (label_col < 0) throw DataError("label column '" + *options.label_column + "' not found");
  }
  int id_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "id" && static_cast<int>(i) != label_col) id_col = static_cast<int>(i);
  }

  std::vector<int> feature_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (static_cast<int>(i) != label_col && static_cast<int>(i) != id_col) {
      feature_cols.push_back(static_cast<int>(i));
    }
  }

  if (rows.size() < 2) throw DataError("CSV has no data rows");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw DataError("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
  }

  Dataset ds;
  ds.schema.reserve(feature_cols.size());
  for (const int col : feature_cols) {
    FeatureSpec spec;
    spec.name = header[static_cast<std::size_t>(col)];
    const auto hint = options.schema_hints.find(spec.name);
    if (hint != options.schema_hints.end()) {
      spec.kind = hint->second;
    } else {
      spec.kind = FeatureKind::Numeric;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cell = rows[r][static_cast<std::size_t>(col)];
        if (!cell.empty() && !parse_number(cell)) {
          spec.kind = FeatureKind::Categorical;
          break;
        }
      }
    }
    ds.schema.push_back(std::move(spec));
  }

  // Category dictionaries in first-appearance order.
  std::vector<std::unordered_map<std::string, int>> cat_index(ds.schema.size());
  for (std::size_t fi = 0; fi < feature_cols.size(); ++fi) {
    if (ds.schema[fi].kind != FeatureKind::Categorical) continue;
    const auto col = static_cast<std::size_t>(feature_cols[fi]);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& cell = rows[r][col];
      if (cell.empty()) continue;
      if (cat_index[fi].emplace(cell, static_cast<int>(ds.schema[fi].categories.size())).second) {
        ds.schema[fi].categories.push_back(cell);
      }
    }
  }

  std::unordered_map<std::string, int> class_index;
  if (options.classes) {
    ds.classes = *options.classes;
    for (std::size_t i = 0; i < ds.classes.size(); ++i) {
      class_index[ds.classes[i]] = static_cast<int>(i);
    }
  }

  ds.examples.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    Example ex;
    ex.id = id_col >= 0 ? rows[r][static_cast<std::size_t>(id_col)] : std::to_string(r - 1);
    ex.values.resize(ds.schema.size());
    for (std::size_t fi = 0; fi < feature_cols.size(); ++fi) {
      const auto& cell = rows[r][static_cast<std::size_t>(feature_cols[fi])];
      if (cell.empty()) continue;
      if (ds.schema[fi].kind == FeatureKind::Numeric) {
        const auto v = parse_number(cell);
        if (!v) {
          throw DataError("row " + std::to_string(r) + ": cell '" + cell +
                          "' is not numeric in column '" + ds.schema[fi].name + "'");
        }
        ex.values[fi] = *v;
      } else {
        ex.values[fi] = static_cast<double>(cat_index[fi].at(cell));
      }
    }
    if (label_col >= 0) {
      const auto& cell = rows[r][static_cast<std::size_t>(label_col)];
      if (!cell.empty()) {
        auto it = class_index.find(cell);
        if (it == class_index.end()) {
          if (options.classes) {
            throw DataError("row " + std::to_string(r) + ": label '" + cell +
                            "' not in the declared class set");
          }
          it = class_index.emplace(cell, static_cast<int>(ds.classes.size())).first;
          ds.classes.push_back(cell);
        }
        ex.label = it->second;
      }
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

std::string to_csv(const Dataset& ds) {
  std::string out = "id";
  for (const auto& spec : ds.schema) {
    out += ',';
    out += quote_csv(spec.name);
  }
  out += ",label\n";
  for (const auto& ex : ds.examples) {
    out += quote_csv(ex.id);
    for (std::size_t f = 0; f < ds.schema.size(); ++f) {
      out += ',';
      if (!ex.values[f]) continue;
      if (ds.schema[f].kind == FeatureKind::Numeric) {
        out += format_double(*ex.values[f]);
      } else {
        out += quote_csv(ds.schema[f].categories[static_cast<std::size_t>(*ex.values[f])]);
      }
    }
    out += ',';
    if (ex.label) out += quote_csv(ds.classes[static_cast<std::size_t>(*ex.label)]);
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << to_csv(ds);
  if (!out) throw DataError("write failed: " + path);
}

Dataset generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.n_examples < 2) throw std::invalid_argument("n_examples must be >= 2");
  if (cfg.n_features < 1) throw std::invalid_argument("n_features must be >= 1");
  if (!(cfg.class_balance > 0.0 && cfg.class_balance < 1.0)) {
    throw std::invalid_argument("class_balance must be in (0, 1)");
  }
  if (!(cfg.noise_rate >= 0.0 && cfg.noise_rate <= 1.0)) {
    throw std::invalid_argument("noise_rate must be in [0, 1]");
  }
  if (cfg.separation < 0.0) throw std::invalid_argument("separation must be >= 0");
  if (cfg.class_names.size() != 2) throw std::invalid_argument("exactly two class names required");

  const int n = cfg.n_examples;
  const int n0 = static_cast<int>(std::lround(n * cfg.class_balance));
  if (n0 < 1 || n - n0 < 1) {
    throw std::invalid_argument("class_balance leaves a class empty");
  }

  Dataset ds;
  ds.classes = cfg.class_names;
  int width = 1;
  for (int v = cfg.n_features; v >= 10; v /= 10) ++width;
  for (int f = 0; f < cfg.n_features; ++f) {
    std::string num = std::to_string(f + 1);
    ds.schema.push_back({"f" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num,
                         FeatureKind::Numeric,
                         {}});
  }

  Rng rng(cfg.seed);
  std::vector<int> labels(static_cast<std::size_t>(n), 1);
  std::fill(labels.begin(), labels.begin() + n0, 0);
  rng.shuffle(labels);

  ds.examples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Example ex;
    ex.id = std::to_string(i);
    ex.label = labels[static_cast<std::size_t>(i)];
    const double mean = *ex.label == 0 ? -cfg.separation / 2.0 : cfg.separation / 2.0;
    ex.values.reserve(static_cast<std::size_t>(cfg.n_features));
    for (int f = 0; f < cfg.n_features; ++f) {
      ex.values.emplace_back(mean + rng.normal());
    }
    ds.examples.push_back(std::move(ex));
  }

  const int flips = static_cast<int>(std::lround(cfg.noise_rate * n));
  if (flips > 0) {
    for (const int idx : rng.sample_without_replacement(n, flips)) {
      auto& label = ds.examples[static_cast<std::size_t>(idx)].label;
      label = 1 - *label;
    }
  }
  return ds;
}

std::vector<FoldSplit> stratified_folds(const Dataset& ds, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  std::vector<std::vector<int>> by_class(ds.classes.size());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& label = ds.examples[i].label;
    if (!label) throw DataError("stratified folds require every example labeled");
    by_class[static_cast<std::size_t>(*label)].push_back(static_cast<int>(i));
  }
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (static_cast<int>(by_class[c].size()) < k) {
      throw DataError("class '" + ds.classes[c] + "' has fewer than k=" + std::to_string(k) +
                      " members");
    }
  }

  Rng rng(seed);
  std::vector<int> fold_of(ds.examples.size(), 0);
  for (auto& indices : by_class) {
    rng.shuffle(indices);
    for (std::size_t j = 0; j < indices.size(); ++j) {
      fold_of[static_cast<std::size_t>(indices[j])] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
  }

  std::vector<FoldSplit> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    for (int f = 0; f < k; ++f) {
      auto& split = folds[static_cast<std::size_t>(f)];
      (fold_of[i] == f ? split.test : split.train).push_back(static_cast<int>(i));
    }
  }
  return folds;
}

Dataset subset_rows(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.schema = ds.schema;
  out.classes = ds.classes;
  out.examples.reserve(rows.size());
  for (const int r : rows) out.examples.push_back(ds.examples[static_cast<std::size_t>(r)]);
  return out;
}

Example project_example(const Example& ex, const std::vector<int>& feature_indices) {
  Example out;
  out.id = ex.id;
  out.label = ex.label;
  out.values.reserve(feature_indices.size());
  for (const int f : feature_indices) out.values.push_back(ex.values[static_cast<std::size_t>(f)]);
  return out;
}

Dataset project_features(const Dataset& ds, const std::vector<int>& feature_indices) {
  Dataset out;
  out.classes = ds.classes;
  out.schema.reserve(feature_indices.size());
  for (const int f : feature_indices) out.schema.push_back(ds.schema[static_cast<std::size_t>(f)]);
  out.examples.reserve(ds.examples.size());
  for (const auto& ex : ds.examples) out.examples.push_back(project_example(ex, feature_indices));
  return out;
}

}  // namespace cpens
