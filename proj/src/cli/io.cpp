#include "cli/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "dpmbq/errors.hpp"

namespace dpmbq::cli {

namespace {

using nlohmann::json;

struct Field {
  std::string text;
  std::size_t column;  // 1-based character offset of the field start
};

std::vector<Field> split_fields(const std::string& line) {
  std::vector<Field> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string::npos ? line.size() : comma;
    std::size_t lo = start;
    std::size_t hi = end;
    while (lo < hi && std::isspace(static_cast<unsigned char>(line[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(line[hi - 1]))) --hi;
    fields.push_back({line.substr(lo, hi - lo), lo + 1});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ", column " << column << ": " << what;
  throw InvalidInput(msg.str());
}

double parse_number(const Field& field, std::size_t line) {
  double value = 0.0;
  const char* first = field.text.data();
  const char* last = first + field.text.size();
  if (!field.text.empty() && field.text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    fail_at(line, field.column, "expected a number, got '" + field.text + "'");
  return value;
}

// Line/column of a byte offset, for JSON parse errors.
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json_or_fail(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    fail_at(line, column, "malformed JSON");
  }
}

Eigen::VectorXd to_vector(const json& node, const std::string& name) {
  if (!node.is_array()) throw InvalidInput("'" + name + "' must be an array of numbers");
  Eigen::VectorXd out(node.size());
  Eigen::Index i = 0;
  for (const auto& v : node) {
    if (!v.is_number()) throw InvalidInput("'" + name + "' must contain only numbers");
    out(i++) = v.get<double>();
  }
  return out;
}

const json& require(const json& node, const std::string& key, const std::string& context) {
  const auto it = node.find(key);
  if (it == node.end()) throw InvalidInput(context + ": missing key '" + key + "'");
  return *it;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string content_hash(std::string_view bytes) {
  std::ostringstream out;
  out << "fnv1a64:" << std::hex;
  out.width(16);
  out.fill('0');
  out << fnv1a64(bytes);
  return out.str();
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

SampleSet<double> parse_sample_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("line 1, column 1: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<Field> header = split_fields(line);
  const std::size_t columns = header.size();
  if (columns < 2) fail_at(1, 1, "header must name columns x1..xd and f");

  const Eigen::Index dims = static_cast<Eigen::Index>(columns - 1);
  std::vector<Eigen::Index> target(columns);  // field -> column in (x | f)
  std::vector<bool> seen(columns, false);
  for (std::size_t c = 0; c < columns; ++c) {
    const std::string& name = header[c].text;
    Eigen::Index slot = -1;
    if (name == "f") {
      slot = dims;
    } else if (name.size() > 1 && name[0] == 'x') {
      int index = 0;
      const auto [ptr, ec] =
          std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec == std::errc{} && ptr == name.data() + name.size() && index >= 1 &&
          index <= dims)
        slot = index - 1;
    }
    if (slot < 0)
      fail_at(1, header[c].column,
              "unexpected column '" + name + "' (expected x1..x" +
                  std::to_string(dims) + " and f)");
    if (seen[static_cast<std::size_t>(slot)])
      fail_at(1, header[c].column, "duplicate column '" + name + "'");
    seen[static_cast<std::size_t>(slot)] = true;
    target[c] = slot;
  }

  std::vector<Eigen::VectorXd> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<Field> fields = split_fields(line);
    if (fields.size() != columns)
      fail_at(line_number, 1,
              "expected " + std::to_string(columns) + " fields, found " +
                  std::to_string(fields.size()));
    Eigen::VectorXd row(columns);
    for (std::size_t c = 0; c < columns; ++c)
      row(target[c]) = parse_number(fields[c], line_number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("line 2, column 1: no data rows");

  SampleSet<double> samples;
  samples.locations.resize(static_cast<Eigen::Index>(rows.size()), dims);
  samples.values.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    samples.locations.row(static_cast<Eigen::Index>(r)) = rows[r].head(dims);
    samples.values(static_cast<Eigen::Index>(r)) = rows[r](dims);
  }
  validate(samples);
  return samples;
}

SampleSet<double> parse_sample_json(const std::string& text) {
  const json doc = parse_json_or_fail(text);
  if (!doc.is_object()) throw InvalidInput("sample JSON must be an object");
  const json& x = require(doc, "x", "sample JSON");
  const json& f = require(doc, "f", "sample JSON");
  if (!x.is_array() || x.empty()) throw InvalidInput("'x' must be a nonempty array");

  SampleSet<double> samples;
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  if (x.front().is_array()) {
    const Eigen::Index dims = static_cast<Eigen::Index>(x.front().size());
    samples.locations.resize(n, dims);
    Eigen::Index i = 0;
    for (const auto& row : x) {
      const Eigen::VectorXd parsed = to_vector(row, "x");
      if (parsed.size() != dims)
        throw InvalidInput("'x' rows must all have the same length");
      samples.locations.row(i++) = parsed;
    }
  } else {
    samples.locations = to_vector(x, "x");
  }
  samples.values = to_vector(f, "f");
  validate(samples);
  return samples;
}

SampleSet<double> load_sample_set(const std::string& path, const std::string& format,
                                  std::string* content_out,
                                  std::string* resolved_format_out) {
  const std::string content = read_file(path);
  if (content_out) *content_out = content;
  std::string resolved = format;
  if (resolved.empty()) {
    resolved = path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? "json"
                                                                           : "csv";
  }
  if (resolved_format_out) *resolved_format_out = resolved;
  if (resolved == "json") return parse_sample_json(content);
  if (resolved == "csv") return parse_sample_csv(content);
  throw InvalidInput("unknown input format '" + resolved + "'");
}

IntegrationTask parse_task_json(const std::string& text) {
  const json doc = parse_json_or_fail(text);
  if (!doc.is_object()) throw InvalidInput("task JSON must be an object");
  const json& mixture = require(doc, "mixture", "task JSON");
  const json& polynomial = require(doc, "polynomial", "task JSON");

  IntegrationTask task;
  task.mixture.weights = to_vector(require(mixture, "weights", "mixture"), "weights");
  task.mixture.means = to_vector(require(mixture, "means", "mixture"), "means");
  task.mixture.sds = to_vector(require(mixture, "sds", "mixture"), "sds");

  const Eigen::VectorXd coeffs =
      to_vector(require(polynomial, "coefficients", "polynomial"), "coefficients");
  const Eigen::VectorXd exps =
      to_vector(require(polynomial, "exponents", "polynomial"), "exponents");
  task.polynomial.coefficients = coeffs;
  task.polynomial.exponents.resize(exps.size());
  for (Eigen::Index t = 0; t < exps.size(); ++t) {
    const double e = exps(t);
    if (e < 0 || e != std::floor(e))
      throw InvalidInput("polynomial exponents must be nonnegative integers");
    task.polynomial.exponents(t) = static_cast<int>(e);
  }
  validate(task.mixture);
  validate(task.polynomial);
  return task;
}

IntegrationTask load_task(const std::string& path, std::string* content_out) {
  const std::string content = read_file(path);
  if (content_out) *content_out = content;
  return parse_task_json(content);
}

}  // namespace dpmbq::cli
