// dataset.hpp
//
// svmlight and CSV ingestion, svmlight output, seeded train/test split.
#pragma once

#include <obboost/core.hpp>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace obboost {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LabelError : public ParseError {
 public:
  using ParseError::ParseError;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

enum class DataFormat { svmlight, csv };

struct LoadOptions {
  DataFormat format = DataFormat::svmlight;
  /// svmlight: index of the first feature in the file (0 or 1); indices are
  /// shifted so the first feature becomes 0.
  int index_base = 0;
  /// csv: column holding the label; the other columns become features
  /// 0, 1, ... in order.
  std::size_t label_column = 0;
  char delimiter = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// {-1, +1} pass through; {0, 1} maps 0 to -1.
inline Label parse_label(std::string_view field, std::size_t line) {
  const auto v = parse_double(field);
  if (!v) throw ParseError(line, "label '" + std::string(field) + "' is not a number");
  if (*v == 1.0) return Label::positive();
  if (*v == -1.0 || *v == 0.0) return Label::negative();
  throw LabelError(line, "unknown label value '" + std::string(trim(field)) + "'");
}

inline Example make_example(std::vector<Feature> features, Label y, std::size_t line) {
  try {
    return Example(std::move(features), y);
  } catch (const InvalidExample& e) {
    throw ParseError(line, e.what());
  }
}

inline Example parse_svmlight_line(std::string_view text, std::size_t line, int index_base) {
  std::vector<Feature> features;
  std::optional<Label> label;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto b = text.find_first_not_of(" \t", pos);
    if (b == std::string_view::npos) break;
    auto e = text.find_first_of(" \t", b);
    if (e == std::string_view::npos) e = text.size();
    const std::string_view token = text.substr(b, e - b);
    pos = e;
    if (!label) {
      label = parse_label(token, line);
      continue;
    }
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) throw ParseError(line, "expected index:value, got '" + std::string(token) + "'");
    const std::string_view key = token.substr(0, colon);
    if (key == "qid") continue;
    std::uint64_t index = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
    if (ec != std::errc{} || ptr != key.data() + key.size())
      throw ParseError(line, "bad feature index '" + std::string(key) + "'");
    if (index < static_cast<std::uint64_t>(index_base))
      throw ParseError(line, "feature index " + std::to_string(index) + " below index base");
    index -= static_cast<std::uint64_t>(index_base);
    if (index > std::numeric_limits<std::uint32_t>::max()) throw ParseError(line, "feature index too large");
    const auto value = parse_double(token.substr(colon + 1));
    if (!value || !std::isfinite(*value)) throw ParseError(line, "bad feature value in '" + std::string(token) + "'");
    features.push_back({static_cast<std::uint32_t>(index), *value});
  }
  if (!label) throw ParseError(line, "missing label");
  return make_example(std::move(features), *label, line);
}

inline std::vector<std::string_view> split_fields(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto e = s.find(delim, start);
    out.push_back(trim(s.substr(start, e == std::string_view::npos ? std::string_view::npos : e - start)));
    if (e == std::string_view::npos) break;
    start = e + 1;
  }
  return out;
}

}  // namespace detail

/// Parses a whole dataset in file order. Blank lines and '#' comments are
/// skipped. A CSV whose first row has a non-numeric label field treats that
/// row as a header.
inline std::vector<Example> parse_dataset(std::istream& in, const LoadOptions& options) {
  if (options.index_base != 0 && options.index_base != 1) throw Error("index base must be 0 or 1");
  std::vector<Example> out;
  std::string raw;
  std::size_t line = 0;
  std::optional<std::size_t> csv_width;
  bool first_row = true;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;

    if (options.format == DataFormat::svmlight) {
      out.push_back(detail::parse_svmlight_line(text, line, options.index_base));
      continue;
    }

    const auto fields = detail::split_fields(text, options.delimiter);
    if (options.label_column >= fields.size())
      throw ParseError(line, "label column " + std::to_string(options.label_column) + " missing");
    if (first_row) {
      first_row = false;
      if (!detail::parse_double(fields[options.label_column])) {
        csv_width = fields.size();
        continue;
      }
    }
    if (csv_width && fields.size() != *csv_width)
      throw ParseError(line, "expected " + std::to_string(*csv_width) + " fields, got " + std::to_string(fields.size()));
    csv_width = fields.size();
    const Label y = detail::parse_label(fields[options.label_column], line);
    std::vector<Feature> features;
    std::uint32_t index = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == options.label_column) continue;
      const auto v = detail::parse_double(fields[c]);
      if (!v || !std::isfinite(*v)) throw ParseError(line, "bad value '" + std::string(fields[c]) + "'");
      if (*v != 0.0) features.push_back({index, *v});
      ++index;
    }
    out.push_back(detail::make_example(std::move(features), y, line));
  }
  if (out.empty()) throw EmptyDataset("dataset contains no examples");
  return out;
}

inline std::vector<Example> load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset '" + path.string() + "'");
  try {
    return parse_dataset(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  } catch (const EmptyDataset&) {
    throw EmptyDataset("dataset '" + path.string() + "' contains no examples");
  }
}

/// Writes "label idx:value ..." lines with 0-based indices and shortest
/// round-trip values.
inline void write_svmlight(std::ostream& out, std::span<const Example> examples) {
  char buf[64];
  for (const Example& ex : examples) {
    out << (ex.label().is_positive() ? "+1" : "-1");
    for (const Feature& f : ex.features()) {
      const auto res = std::to_chars(buf, buf + sizeof buf, f.value);
      out << ' ' << f.index << ':' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

struct Split {
  std::vector<Example> train;
  std::vector<Example> test;
  std::vector<std::size_t> train_indices;  // positions in the input
  std::vector<std::size_t> test_indices;
};

/// Seeded permutation; the first ceil(fraction * n) go to train.
inline Split split_shuffle(std::span<const Example> examples, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("split fraction must lie in (0,1)");
  const std::size_t n = examples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, streams::data_shuffle);
  shuffle(std::span<std::size_t>(order), rng);
  const auto n_train = std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  Split out;
  out.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  out.train.reserve(n_train);
  out.test.reserve(n - n_train);
  for (std::size_t i : out.train_indices) out.train.push_back(examples[i]);
  for (std::size_t i : out.test_indices) out.test.push_back(examples[i]);
  return out;
}

}  // namespace obboost
