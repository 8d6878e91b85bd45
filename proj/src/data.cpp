#include "hrvfl/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hrvfl/error.hpp"
#include "hrvfl/rng.hpp"

namespace hrvfl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    const auto end = pos == std::string::npos ? line.size() : pos;
    cells.emplace_back(trim(std::string_view(line).substr(start, end - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

bool blank(const std::string& line) { return trim(line).empty(); }

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.name = name;
  out.labels = labels;
  out.X.resize(static_cast<Index>(indices.size()), X.cols());
  out.y.resize(static_cast<Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = static_cast<Index>(indices[i]);
    if (src >= X.rows()) throw ShapeError("subset index out of range");
    out.X.row(static_cast<Index>(i)) = X.row(src);
    out.y(static_cast<Index>(i)) = y(src);
  }
  return out;
}

void Dataset::validate() const {
  if (X.rows() != y.size()) throw ShapeError("dataset '" + name + "': feature rows and label count differ");
  if (!X.allFinite()) throw DomainError("dataset '" + name + "': non-finite feature values");
  bool neg = false;
  bool pos = false;
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) == -1.0) neg = true;
    else if (y(i) == 1.0) pos = true;
    else throw TrainingError("dataset '" + name + "': labels must be -1 or +1");
  }
  if (!(neg && pos)) throw TrainingError("dataset '" + name + "': both classes must be present");
}

bool Dataset::operator==(const Dataset& o) const {
  return name == o.name && labels == o.labels && X.rows() == o.X.rows() && X.cols() == o.X.cols() && X == o.X &&
         y == o.y;
}

Dataset parse_csv(std::istream& in, const CsvSchema& schema, std::string name) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  if (schema.header) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!blank(line)) break;
    }
    if (blank(line)) throw ParseError("csv '" + name + "': empty file");
    header = split(line, schema.delimiter);
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    rows.push_back(split(line, schema.delimiter));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw ParseError("csv '" + name + "': no data rows");

  const std::size_t width = header.empty() ? rows.front().size() : header.size();
  if (width < 2) throw ParseError("csv '" + name + "': need at least one feature and one label column");

  std::size_t label_col = 0;
  if (schema.label_name) {
    if (header.empty()) throw ConfigError("csv: label column given by name but the file has no header");
    const auto it = std::find(header.begin(), header.end(), *schema.label_name);
    if (it == header.end()) throw ParseError("csv '" + name + "': no column named '" + *schema.label_name + "'");
    label_col = static_cast<std::size_t>(it - header.begin());
  } else {
    const long idx = schema.label_index < 0 ? static_cast<long>(width) + schema.label_index : schema.label_index;
    if (idx < 0 || idx >= static_cast<long>(width)) throw ConfigError("csv: label column index out of range");
    label_col = static_cast<std::size_t>(idx);
  }

  std::set<std::string> classes;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw ParseError("csv '" + name + "' line " + std::to_string(row_lines[r]) + ": expected " +
                           std::to_string(width) + " fields, found " + std::to_string(rows[r].size()),
                       r);
    }
    const std::string& label = rows[r][label_col];
    if (schema.labels && label != schema.labels->negative && label != schema.labels->positive) {
      throw ParseError("csv '" + name + "' line " + std::to_string(row_lines[r]) + ": unknown label '" + label + "'", r,
                       label_col);
    }
    classes.insert(label);
  }

  std::string lo;
  std::string hi;
  if (schema.labels) {
    lo = schema.labels->negative;
    hi = schema.labels->positive;
  } else {
    if (classes.size() != 2) {
      throw ParseError("csv '" + name + "': expected exactly two label values, found " +
                       std::to_string(classes.size()));
    }
    lo = *classes.begin();
    hi = *classes.rbegin();
    const auto nlo = parse_number(lo);
    const auto nhi = parse_number(hi);
    if (nlo && nhi && *nhi < *nlo) std::swap(lo, hi);
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.labels = LabelMapping{lo, hi};
  ds.X.resize(static_cast<Index>(rows.size()), static_cast<Index>(width - 1));
  ds.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Index c_out = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_col) continue;
      const auto v = parse_number(rows[r][c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("csv '" + ds.name + "' line " + std::to_string(row_lines[r]) + " column " +
                             std::to_string(c + 1) + ": '" + rows[r][c] + "' is not a finite number",
                         r, c);
      }
      ds.X(static_cast<Index>(r), c_out++) = *v;
    }
    ds.y(static_cast<Index>(r)) = rows[r][label_col] == lo ? -1.0 : 1.0;
  }
  return ds;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema, std::string name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_csv(in, schema, name.empty() ? path : std::move(name));
}

void write_csv(const Dataset& ds, std::ostream& out, char delimiter) {
  char buf[32];
  for (Index i = 0; i < ds.rows(); ++i) {
    for (Index j = 0; j < ds.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.X(i, j));
      out << buf << delimiter;
    }
    out << ds.labels.original(ds.y(i)) << '\n';
  }
}

Matrix NormStats::apply(const Matrix& X) const {
  if (X.cols() != min.size()) throw ShapeError("normalization: column count mismatch");
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    if (range(j) > 0) out.col(j) = (X.col(j).array() - min(j)) / range(j);
    else out.col(j).setZero();
  }
  return out;
}

NormStats fit_minmax(const Matrix& X) {
  if (X.rows() == 0) throw ConfigError("normalization: empty training data");
  NormStats s;
  s.min = X.colwise().minCoeff().transpose();
  s.range = X.colwise().maxCoeff().transpose() - s.min;
  return s;
}

Normalized normalize(const Dataset& train, std::span<const Dataset> others) {
  Normalized out;
  out.stats = fit_minmax(train.X);
  out.train = train;
  out.train.X = out.stats.apply(train.X);
  for (const auto& d : others) {
    Dataset scaled = d;
    scaled.X = out.stats.apply(d.X);
    out.others.push_back(std::move(scaled));
  }
  return out;
}

KFold kfold_split(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(ds.rows());
  if (k < 2) throw ConfigError("kfold: k must be at least 2");
  if (n < k) throw ConfigError("kfold: fewer samples than folds");

  std::vector<std::size_t> neg;
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) (ds.y(static_cast<Index>(i)) < 0 ? neg : pos).push_back(i);

  Rng rng(seed);
  KFold out;
  out.stratified = neg.size() >= k && pos.size() >= k;
  std::vector<std::size_t> order;
  if (out.stratified) {
    shuffle(neg, rng);
    shuffle(pos, rng);
    order = neg;
    order.insert(order.end(), pos.begin(), pos.end());
  } else {
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle(order, rng);
  }

  std::vector<std::size_t> fold_of(n);
  for (std::size_t p = 0; p < n; ++p) fold_of[order[p]] = p % k;
  out.folds.resize(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? out.folds[f].test : out.folds[f].train).push_back(i);
  }
  return out;
}

NoisyDataset inject_label_noise(const Dataset& ds, const NoiseSpec& spec) {
  if (!(spec.rate >= 0 && spec.rate < 1)) throw ConfigError("noise rate must be in [0, 1)");
  const auto n = static_cast<std::size_t>(ds.rows());
  // The small offset keeps rates such as 0.29 * 100 from flooring to 28.
  const auto flips = static_cast<std::size_t>(std::floor(spec.rate * static_cast<double>(n) + 1e-9));
  Rng rng(spec.seed);
  NoisyDataset out{ds, sample_without_replacement(n, flips, rng)};
  for (std::size_t i : out.flipped) out.data.y(static_cast<Index>(i)) = -out.data.y(static_cast<Index>(i));
  return out;
}

Dataset make_two_gaussians(std::size_t n, std::size_t m, double separation, std::uint64_t seed, std::string name) {
  if (n < 2 || m < 1) throw ConfigError("two_gaussians: need n >= 2 and m >= 1");
  Rng rng(seed);
  Dataset ds;
  ds.name = std::move(name);
  ds.X.resize(static_cast<Index>(n), static_cast<Index>(m));
  ds.y.resize(static_cast<Index>(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  shuffle(order, rng);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Index>(order[i]);
    const double label = i % 2 == 0 ? -1.0 : 1.0;
    ds.y(row) = label;
    for (Index j = 0; j < static_cast<Index>(m); ++j) ds.X(row, j) = rng.normal();
    ds.X(row, 0) += 0.5 * separation * label;
  }
  return ds;
}

ManifestEntry describe(const Dataset& ds, const std::string& path) {
  ManifestEntry e{ds.name, path, static_cast<std::size_t>(ds.rows()), static_cast<std::size_t>(ds.cols()), {}};
  for (Index i = 0; i < ds.y.size(); ++i) ++e.class_counts[ds.labels.original(ds.y(i))];
  return e;
}

void write_manifest(std::span<const ManifestEntry> entries, std::ostream& out) {
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    j["path"] = e.path;
    j["n"] = e.n;
    j["m"] = e.m;
    j["class_counts"] = e.class_counts;
    out << j.dump() << '\n';
  }
}

std::vector<ManifestEntry> read_manifest(std::istream& in) {
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      entries.push_back({j.at("name").get<std::string>(), j.at("path").get<std::string>(), j.at("n").get<std::size_t>(),
                         j.at("m").get<std::size_t>(), j.at("class_counts").get<std::map<std::string, std::size_t>>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("manifest: ") + e.what(), row);
    }
    ++row;
  }
  return entries;
}

}  // namespace hrvfl
