#pragma once

// JSON and text renderings of diagnostics and reports.

#include <goossdm/correspondence.hpp>
#include <goossdm/diagnostic.hpp>
#include <goossdm/instance.hpp>
#include <goossdm/transformer.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace goossdm {

  /// `[{code, severity, message, file, line, col}]`
  nlohmann::json
  diagnostics_json(const std::vector<Diagnostic>& diags);

  /// `[{kind, construct, expected, found, status, note}]`, found null when
  /// absent.
  nlohmann::json
  rows_json(const CorrespondenceReport& report);

  /// `{ok, violations: [{path, code, message}]}`
  nlohmann::json
  conformance_json(const ConformanceReport& report);

  nlohmann::json
  plan_json(const NestingPlan& plan);

  /// Fixed-width table with one line per row.
  std::string
  rows_table(const CorrespondenceReport& report);

} // namespace goossdm
