#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "dpmbq/samples.hpp"
#include "dpmbq/testbed.hpp"

namespace dpmbq::cli {

std::string read_file(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);

// "fnv1a64:<16 hex digits>" over the raw file bytes.
std::string content_hash(std::string_view bytes);

// Shortest decimal form that round-trips.
std::string format_double(double value);

// CSV sample sets: a header naming columns x1..xd and f (any order), then
// one numeric row per sample. Parse errors carry 1-based line and column.
SampleSet<double> parse_sample_csv(const std::string& text);

// JSON sample sets: {"x": [[...], ...] or [...], "f": [...]}.
SampleSet<double> parse_sample_json(const std::string& text);

// format is "csv", "json", or "" to infer from the path suffix (default csv).
SampleSet<double> load_sample_set(const std::string& path, const std::string& format,
                                  std::string* content_out = nullptr,
                                  std::string* resolved_format_out = nullptr);

// {"mixture": {"weights", "means", "sds"}, "polynomial": {"coefficients",
// "exponents"}}.
IntegrationTask parse_task_json(const std::string& text);
IntegrationTask load_task(const std::string& path, std::string* content_out = nullptr);

}  // namespace dpmbq::cli
