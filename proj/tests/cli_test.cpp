// Runs the goossdm binary end to end.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

  struct Run {
    int status = -1;
    std::string out;
  };

  Run
  run(const std::string& args) {
    const std::string cmd = std::string(GOOSSDM_BIN) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
  }

  std::string
  fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
  }

  std::string
  slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string
  scratch(const std::string& name) {
    const auto dir = std::filesystem::path(::testing::TempDir()) / "goossdm_cli_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
  }

  TEST(Cli, CompileMatchesGolden) {
    const auto r = run("compile " + fixture("visit_records.goossdm"));
    EXPECT_EQ(r.status, 0);
    const auto golden = slurp(fixture("visit_records.xsd"));
    const auto body = golden.substr(golden.find("<xs:schema"));
    EXPECT_EQ(r.out, body);
  }

  TEST(Cli, CompileWritesFileAndPlan) {
    const auto xsd = scratch("out.xsd");
    const auto plan = scratch("plan.json");
    const auto r = run("compile " + fixture("link_person.goossdm") + " -o " + xsd + " --emit-plan " + plan);
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(slurp(xsd).find("<xs:extension base=\"Person\">"), std::string::npos);
    EXPECT_NE(slurp(plan).find("\"named_types\""), std::string::npos);
  }

  TEST(Cli, CheckReportsErrorsAsJson) {
    const auto bad = scratch("bad.goossdm");
    std::ofstream(bad) << "schema S { csg C @layer 1 { contains Missing; } }\n";
    const auto r = run("check " + bad + " --format json");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("\"E105\""), std::string::npos);
  }

  TEST(Cli, MissingFileIsUsageError) {
    EXPECT_EQ(run("check /nonexistent/x.goossdm").status, 2);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("compile").status, 2);
    EXPECT_EQ(run("--help").status, 0);
  }

  TEST(Cli, CorrespondAndValidate) {
    const auto xsd = scratch("vr.xsd");
    ASSERT_EQ(run("compile " + fixture("visit_records.goossdm") + " -o " + xsd).status, 0);
    const auto c = run("correspond " + fixture("visit_records.goossdm") + " " + xsd);
    EXPECT_EQ(c.status, 0);
    EXPECT_NE(c.out.find("rows pass"), std::string::npos);
    const auto v = run("validate " + xsd + " " + fixture("visit_records.xml") + " --format json");
    EXPECT_EQ(v.status, 0);
    EXPECT_NE(v.out.find("\"ok\": true"), std::string::npos);

    const auto other = scratch("other.xsd");
    ASSERT_EQ(run("compile " + fixture("link_person.goossdm") + " -o " + other).status, 0);
    EXPECT_EQ(run("correspond " + fixture("visit_records.goossdm") + " " + other).status, 1);
    EXPECT_EQ(run("validate " + other + " " + fixture("visit_records.xml")).status, 1);
  }

  TEST(Cli, GenerateThenValidate) {
    const auto xsd = scratch("gen.xsd");
    ASSERT_EQ(run("compile " + fixture("visit_records.goossdm") + " -o " + xsd).status, 0);
    const auto dir = scratch("instances");
    ASSERT_EQ(run("generate " + xsd + " --seed 3 --count 4 -o " + dir).status, 0);
    for (int i = 0; i < 4; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "/instance_%03d.xml", i);
      EXPECT_EQ(run("validate " + xsd + " " + dir + name).status, 0) << name;
    }
  }

  TEST(Cli, FmtCheck) {
    EXPECT_EQ(run("fmt --check " + fixture("visit_records.goossdm")).status, 0);
    const auto messy = scratch("messy.goossdm");
    std::ofstream(messy) << "schema   S{esg A;csg C@layer 1{contains A;}}";
    EXPECT_EQ(run("fmt --check " + messy).status, 1);
    const auto r = run("fmt " + messy);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "schema S {\n  esg A;\n  csg C @layer 1 {\n    contains A <1:1,0>;\n  }\n}\n");
  }

} // namespace
