#include "test_support.hpp"

#include <goossdm/report.hpp>

#include <gtest/gtest.h>

namespace goossdm {
  namespace {

    using testing::fixture_schema;

    TEST(Report, DiagnosticsJson) {
      const auto j = diagnostics_json({make_warning("W301", "orphan", {"f.goossdm", {3, 5}, {3, 9}})});
      ASSERT_EQ(j.size(), 1u);
      EXPECT_EQ(j[0]["code"], "W301");
      EXPECT_EQ(j[0]["severity"], "warning");
      EXPECT_EQ(j[0]["file"], "f.goossdm");
      EXPECT_EQ(j[0]["line"], 3);
      EXPECT_EQ(j[0]["col"], 5);
    }

    TEST(Report, PlanJsonOfCaseStudy) {
      const auto r = transform(fixture_schema("visit_records.goossdm"));
      ASSERT_TRUE(r.plan);
      const auto j = plan_json(*r.plan);
      ASSERT_EQ(j["globals"].size(), 1u);
      const auto& g = j["globals"][0];
      EXPECT_EQ(g["name"], "Patient");
      EXPECT_EQ(g["role"], "root");
      EXPECT_EQ(g["content"]["occurs"]["max"], "unbounded");
      EXPECT_EQ(g["content"]["compositor"], "sequence");
      EXPECT_TRUE(j["named_types"].empty());
    }

    TEST(Report, RowsAndTable) {
      const auto s = fixture_schema("visit_records.goossdm");
      const auto report = check_correspondence(s, testing::compile_document(s));
      const auto j = rows_json(report);
      EXPECT_EQ(j.size(), report.rows.size());
      for (const auto& row : j) EXPECT_EQ(row["status"], "pass");
      const auto table = rows_table(report);
      const auto summary =
          std::to_string(report.rows.size()) + "/" + std::to_string(report.rows.size()) + " rows pass\n";
      ASSERT_GE(table.size(), summary.size());
      EXPECT_EQ(table.substr(table.size() - summary.size()), summary);
    }

    TEST(Report, ConformanceJson) {
      ConformanceReport r;
      r.ok = false;
      r.violations.push_back({"/R", "V602", "missing a"});
      const auto j = conformance_json(r);
      EXPECT_EQ(j["ok"], false);
      EXPECT_EQ(j["violations"][0]["code"], "V602");
    }

  } // namespace
} // namespace goossdm
