#include "test_support.hpp"

#include <goossdm/instance.hpp>
#include <goossdm/xml.hpp>

#include <gtest/gtest.h>

namespace goossdm {
  namespace {

    using testing::compile_document;
    using testing::fixture_schema;
    using testing::fixture_text;
    using testing::schema_from;

    xsd::Document
    case_study() {
      return compile_document(fixture_schema("visit_records.goossdm"));
    }

    xml::Element
    parse_xml(const std::string& text) {
      auto r = xml::parse(text);
      if (!r.root) throw std::runtime_error("bad xml: " + render(r.diagnostics.at(0)));
      return *r.root;
    }

    std::string
    replace_once(std::string text, const std::string& from, const std::string& to) {
      const auto at = text.find(from);
      if (at == std::string::npos) throw std::runtime_error("anchor not found: " + from);
      return text.replace(at, from.size(), to);
    }

    std::vector<std::string>
    codes(const ConformanceReport& r) {
      std::vector<std::string> out;
      for (const auto& v : r.violations) out.push_back(v.code);
      return out;
    }

    TEST(Validate, CaseStudyInstanceConforms) {
      const auto r = validate_instance(case_study(), parse_xml(fixture_text("visit_records.xml")));
      EXPECT_TRUE(r.ok);
      EXPECT_TRUE(r.violations.empty());
    }

    struct EditCase {
      const char* code;
      const char* from;
      const char* to;
    };

    class SingleEdit : public ::testing::TestWithParam<EditCase> {};

    TEST_P(SingleEdit, ExactlyOneCode) {
      const auto& c = GetParam();
      const auto text = replace_once(fixture_text("visit_records.xml"), c.from, c.to);
      const auto r = validate_instance(case_study(), parse_xml(text));
      EXPECT_FALSE(r.ok);
      EXPECT_EQ(codes(r), std::vector<std::string>{c.code});
    }

    INSTANTIATE_TEST_SUITE_P(
        CaseStudy, SingleEdit,
        ::testing::Values(
            EditCase{"V601", "<DName>Dr. P. Roy</DName>", "<DName>Dr. P. Roy</DName><Nurse/>"},
            EditCase{"V602", "<DName>Dr. P. Roy</DName>", ""},
            EditCase{"V603", "<DName>Dr. P. Roy</DName>",
                     "<DName>Dr. P. Roy</DName><DName>Dr. Q</DName>"},
            EditCase{"V604", "</Hospital>\n    </Dept>",
                     "</Hospital>\n    </Dept><Clinic><Name>Clinic Z</Name></Clinic>"},
            EditCase{"V605", "<RegID>1234</RegID>", "<RegID>4321</RegID>"},
            EditCase{"V606", "<Date>10-JAN-2009</Date>", "stray<Date>10-JAN-2009</Date>"}));

    TEST(Validate, PathsLocateTheViolation) {
      const auto text = replace_once(fixture_text("visit_records.xml"),
                                     "<DName>Dr. P. Roy</DName>", "");
      const auto r = validate_instance(case_study(), parse_xml(text));
      ASSERT_EQ(r.violations.size(), 1u);
      EXPECT_EQ(r.violations[0].path, "/Patient/Visit[1]/Doctor[1]");
    }

    TEST(Validate, WrongRootAndAttributes) {
      const auto d = case_study();
      EXPECT_FALSE(validate_instance(d, parse_xml("<Doctor/>")).ok);
      const auto text = replace_once(fixture_text("visit_records.xml"), "<Patient>", "<Patient a=\"1\">");
      EXPECT_EQ(codes(validate_instance(d, parse_xml(text))), std::vector<std::string>{"V601"});
    }

    TEST(Validate, AllAcceptsAnyOrder) {
      const auto d = compile_document(schema_from(
          "schema S { esg a; esg b; csg R @layer 1 { contains a <1:1,0>; contains b <0:1,0>; } }"));
      EXPECT_TRUE(validate_instance(d, parse_xml("<R><b/><a/></R>")).ok);
      EXPECT_TRUE(validate_instance(d, parse_xml("<R><a/></R>")).ok);
      EXPECT_FALSE(validate_instance(d, parse_xml("<R><b/></R>")).ok);
      EXPECT_FALSE(validate_instance(d, parse_xml("<R><a/><a/></R>")).ok);
    }

    TEST(Validate, MixedContentAllowsText) {
      const auto d = compile_document(schema_from(
          "schema S { esg a; annotation Note; csg R @layer 1 { contains a; contains Note <1:1,0>; } }"));
      EXPECT_TRUE(validate_instance(d, parse_xml("<R>hello <a>x</a> there</R>")).ok);
      const auto strict = compile_document(
          schema_from("schema S { esg a; csg R @layer 1 { contains a; } }"));
      EXPECT_EQ(codes(validate_instance(strict, parse_xml("<R>hello <a>x</a></R>"))),
                std::vector<std::string>{"V606"});
    }

    TEST(Generate, DeterministicPerSeed) {
      const auto d = case_study();
      GenConfig cfg;
      cfg.seed = 42;
      cfg.count = 5;
      const auto a = generate(d, cfg);
      const auto b = generate(d, cfg);
      ASSERT_EQ(a.size(), 5u);
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(xml::serialize(a[i]), xml::serialize(b[i]));
      EXPECT_EQ(xml::serialize(a[1]), xml::serialize(generate_one(d, 43, cfg)));
      EXPECT_NE(xml::serialize(a[0]), xml::serialize(a[1]));
    }

    TEST(Generate, RespectsMaxRepeat) {
      const auto d = case_study();
      GenConfig cfg;
      cfg.max_repeat = 1;
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto doc = generate_one(d, seed, cfg);
        EXPECT_EQ(doc.children.size(), 2u);
      }
    }

    TEST(Generate, Errors) {
      EXPECT_THROW(generate_one(xsd::Document{}, 1), Error);
      GenConfig cfg;
      cfg.max_repeat = 0;
      EXPECT_THROW(generate_one(case_study(), 1, cfg), Error);
    }

    TEST(Property, GeneratedInstancesValidate) {
      for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto d = compile_document(random_schema(seed, 1 + seed % 8));
        for (std::uint64_t k = 0; k < 3; ++k) {
          const auto doc = generate_one(d, seed * 10 + k);
          const auto r = validate_instance(d, doc);
          EXPECT_TRUE(r.ok) << "seed " << seed << ": "
                            << (r.violations.empty() ? "" : r.violations[0].code + " " + r.violations[0].path);
          // Serialization is a fixed point through the parser, and the
          // reparsed document still conforms.
          const auto text = xml::serialize(doc);
          const auto again = parse_xml(text);
          EXPECT_EQ(xml::serialize(again), text);
          EXPECT_TRUE(validate_instance(d, again).ok);
        }
      }
    }

    // Dropping a required leaf from a generated document is always caught.
    TEST(Property, RemovingRequiredChildIsCaught) {
      const auto d = case_study();
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto doc = generate_one(d, seed);
        auto& visit = doc.children.at(1);
        auto& doctor = visit.children.at(1);
        ASSERT_EQ(doctor.name, "Doctor");
        doctor.children.pop_back();
        doctor.texts.pop_back();
        const auto r = validate_instance(d, doc);
        EXPECT_FALSE(r.ok);
        EXPECT_EQ(codes(r).at(0), "V602");
      }
    }

  } // namespace
} // namespace goossdm
