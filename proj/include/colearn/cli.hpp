#pragma once

// Batch experiment runner behind the colearn tool. Every subcommand writes
// one report and returns 0 on success, 2 when a checked property fails and
// 1 on usage errors.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace colearn {

inline constexpr const char* kReportSchema = "colearn.report/1";

enum class ReportFormat { tsv, json };

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, bool>> checks;

  void add_meta(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }
  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  /// Records a named property check; returns `passed`.
  bool check(std::string name, bool passed);
  bool ok() const;
  void write(std::ostream& out, ReportFormat format) const;
};

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace colearn
