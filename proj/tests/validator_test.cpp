#include "test_support.hpp"

#include <goossdm/instance.hpp>

#include <gtest/gtest.h>

#include <random>

namespace goossdm {
  namespace {

    using testing::count_code;
    using testing::fixture_schema;
    using testing::has_code;
    using testing::schema_from;

    std::vector<Diagnostic>
    check(const std::string& body) {
      return validate(schema_from("schema S {\n" + body + "\n}\n")).diagnostics;
    }

    TEST(Validate, CaseStudyIsClean) {
      const auto r = validate(fixture_schema("visit_records.goossdm"));
      EXPECT_TRUE(r.ok);
      EXPECT_TRUE(r.diagnostics.empty());
      EXPECT_TRUE(validate(fixture_schema("visit_records_extended.goossdm")).ok);
      EXPECT_TRUE(validate(fixture_schema("link_person.goossdm")).ok);
    }

    struct RuleCase {
      const char* code;
      const char* body;
    };

    class Rules : public ::testing::TestWithParam<RuleCase> {};

    TEST_P(Rules, Reported) {
      const auto& c = GetParam();
      const auto diags = check(c.body);
      EXPECT_TRUE(has_code(diags, c.code)) << c.body;
      const bool warning = c.code[0] == 'W';
      EXPECT_EQ(validate(schema_from(std::string("schema S {\n") + c.body + "\n}\n")).ok,
                warning && !has_errors(diags));
    }

    INSTANTIATE_TEST_SUITE_P(
        Validator, Rules,
        ::testing::Values(
            RuleCase{"E301", "annotation N; csg C @layer 1 { contains N <0:1,0>; }"},
            RuleCase{"E302", "esg A; csg B @layer 1 { contains A; } csg D @layer 3 { contains A; }"
                             " csg T @layer 2 { contains B; } csg R @layer 4 { contains D; }"
                             " link B -> D;"},
            RuleCase{"E303", "esg A; csg B @layer 1 { contains A; } csg C @layer 3 { contains B; }"},
            RuleCase{"E304", "esg A; csg B @layer 1 { contains A; }"
                             " csg C @layer 2 { contains det B; }"},
            RuleCase{"E304", "esg A; csg C @layer 1 { contains det ref A; }"},
            RuleCase{"E305", "esg A; esg B; esg D; csg C @layer 1 {"
                             " contains A <0:X,0>; contains B; contains D <0:X,0>; }"},
            RuleCase{"E306", "esg A; csg C @layer 1 { contains A; }"
                             " connector K { member C; }"},
            RuleCase{"E306", "esg A; csg C @layer 1 { contains A; } csg D @layer 2 { contains C; }"
                             " connector K { member C; member C; member D; }"},
            RuleCase{"E308", "esg A; csg B @layer 1 { contains A; } csg D @layer 1 { contains A; }"
                             " csg E @layer 2 { contains A; } link B -> E; link D -> E;"},
            RuleCase{"E309", "esg A; csg B @layer 1 { contains A; } csg M @layer 2 { contains B; }"
                             " csg C @layer 3 { contains M; } associate B -- C;"},
            RuleCase{"W301", "esg A; esg Lonely; csg C @layer 1 { contains A; }"},
            RuleCase{"W302", "esg A; csg B @layer 1 { contains A; } csg C @layer 1 { contains A; }"},
            RuleCase{"W303", "csg C @layer 1 { }"}));

    // E307 through the model API: kinds that the DSL refuses up front.
    TEST(Validate, ReferenceKindMismatch) {
      auto s = schema_from("schema S { esg A; csg C @layer 1 { contains A; } }");
      s.references.push_back({{NodeKind::esg, 0}, {NodeKind::csg, 0}, {}});
      EXPECT_TRUE(has_code(validate(s).diagnostics, "E307"));
    }

    TEST(Validate, LayerBelowOne) {
      auto s = schema_from("schema S { esg A; csg C @layer 1 { contains A; } }");
      s.csgs[0].layer = 0;
      EXPECT_TRUE(has_code(validate(s).diagnostics, "E310"));
    }

    TEST(Validate, LinkCycle) {
      auto s = schema_from(
          "schema S { esg A; csg B @layer 1 { contains A; } csg C @layer 2 { contains A; } }");
      s.links.push_back({0, 1, {}});
      s.links.push_back({1, 0, {}});
      EXPECT_TRUE(has_code(validate(s).diagnostics, "E302"));
    }

    TEST(Validate, ReportsEveryFinding) {
      const auto diags = check(
          "annotation N; esg A; csg B @layer 1 { contains N <1:M,0>; contains det ref A; }"
          " csg C @layer 3 { contains B; }");
      EXPECT_TRUE(has_code(diags, "E301"));
      EXPECT_TRUE(has_code(diags, "E304"));
      EXPECT_TRUE(has_code(diags, "E303"));
    }

    TEST(Validate, SameLayerAssociationIsFine) {
      const auto diags =
          check("esg A; csg B @layer 1 { contains A; } csg C @layer 1 { contains A; }"
                " csg R @layer 2 { contains B; contains C; } associate B -- C;");
      EXPECT_FALSE(has_errors(diags));
    }

    TEST(Validate, SingleExclusiveMemberIsAllowed) {
      const auto diags = check("esg A; esg B; csg C @layer 1 { contains A <0:X,0>; contains B; }");
      EXPECT_EQ(count_code(diags, "E305"), 0u);
    }

    TEST(Explain, CoversEveryEmittedCode) {
      const auto codes = known_codes();
      EXPECT_TRUE(std::is_sorted(codes.begin(), codes.end()));
      for (const auto& c : codes) EXPECT_FALSE(explain(c).empty()) << c;
      for (const char* c : {"E301", "E302", "E303", "E304", "E305", "E306", "E307", "E308",
                            "E309", "E310", "W301", "W302", "W303"})
        EXPECT_NO_THROW(explain(c)) << c;
      EXPECT_THROW(explain("E999"), Error);
    }

    // Every random schema is valid, and each structural mutation below is
    // caught by the rule it targets.
    TEST(Property, RandomSchemasValidate) {
      for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const auto s = random_schema(seed, 1 + seed % 10);
        const auto r = validate(s);
        EXPECT_TRUE(r.ok) << "seed " << seed;
        EXPECT_FALSE(has_errors(r.diagnostics)) << "seed " << seed;
      }
    }

    TEST(Property, MutationsAreCaught) {
      std::size_t hits[4] = {};
      for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const auto s = random_schema(seed, 2 + seed % 8);
        for (std::size_t i = 0; i < s.containments.size(); ++i) {
          const auto& e = s.containments[i];
          if (e.child.kind == NodeKind::csg && !e.is_reference) {
            auto m = s;
            m.csgs[e.parent].layer += 1;
            EXPECT_TRUE(has_code(validate(m).diagnostics, "E303")) << "seed " << seed;
            ++hits[0];
          }
          if (e.child.kind == NodeKind::csg || e.is_reference) {
            auto m = s;
            m.containments[i].is_determinant = true;
            EXPECT_TRUE(has_code(validate(m).diagnostics, "E304")) << "seed " << seed;
            ++hits[1];
          }
          if (e.child.kind == NodeKind::annotation) {
            auto m = s;
            m.containments[i].constraint.p = Participation::zero_many;
            EXPECT_TRUE(has_code(validate(m).diagnostics, "E301")) << "seed " << seed;
            ++hits[2];
          }
        }
        for (std::size_t i = 0; i < s.links.size(); ++i) {
          auto m = s;
          m.csgs[m.links[i].derived].layer += 2;
          EXPECT_TRUE(has_code(validate(m).diagnostics, "E302")) << "seed " << seed;
          ++hits[3];
        }
      }
      for (auto h : hits) EXPECT_GT(h, 0u);
    }

  } // namespace
} // namespace goossdm
