#pragma once

#include "platoon/scenario/runner.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace platoon::scenario {

/// "%.9g"
std::string format_double(double v);

std::string metrics_header(std::size_t followers);
std::string summary_header();

void write_metrics(std::ostream& out, const std::vector<MetricsRecord>& records,
                   std::size_t followers);
void write_summary(std::ostream& out, const std::vector<RunSummary>& summaries);

/// Throw std::runtime_error carrying the path on I/O failure.
void emit_metrics(const std::vector<MetricsRecord>& records, std::size_t followers,
                  const std::filesystem::path& path);
void emit_summary(const std::vector<RunSummary>& summaries, const std::filesystem::path& path);

}  // namespace platoon::scenario
