#include "test_support.hpp"

#include <goossdm/instance.hpp>

#include <gtest/gtest.h>

#include <random>

namespace goossdm::xsd {
  namespace {

    using goossdm::testing::fixture_text;
    using goossdm::testing::has_code;

    Element
    leaf(std::string name, Occurs o = {}) {
      Element e;
      e.name = std::move(name);
      e.occurs = o;
      return e;
    }

    Compositor
    seq(std::vector<Particle> children, Occurs o = {}) {
      return Compositor{CompositorKind::sequence, o, std::move(children)};
    }

    TEST(Occurs, Text) {
      EXPECT_EQ(to_string(Occurs{}), "(1,1)");
      EXPECT_EQ(to_string(Occurs{0, Occurs::unbounded}), "(0,unbounded)");
      EXPECT_TRUE((Occurs{1, 1}).is_default());
      EXPECT_TRUE((Occurs{2, Occurs::unbounded}).is_unbounded());
      EXPECT_EQ(to_string(CompositorKind::all), "all");
    }

    TEST(Emit, EmptyDocument) {
      EXPECT_EQ(emit(Document{}),
                "<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\" />\n");
    }

    TEST(Emit, CanonicalLayout) {
      Document d;
      ComplexType base;
      base.name = "Base";
      base.content = Group{seq({Particle{leaf("Id")}})};
      d.types.push_back(base);

      Element root;
      root.name = "Root";
      ComplexType inner;
      inner.mixed = true;
      Element id = leaf("Key");
      id.type_name = std::string(id_type);
      Element typed = leaf("Sub", {0, 1});
      typed.type_name = "Base";
      Element r;
      r.ref = "Other";
      r.occurs = {0, Occurs::unbounded};
      inner.content = Group{seq({Particle{id}, Particle{typed},
                                 Particle{Choice{{0, 1}, {Particle{leaf("A")}, Particle{leaf("B")}}}},
                                 Particle{r}},
                                {1, Occurs::unbounded})};
      root.complex_type = inner;
      d.elements.push_back(root);

      Element other = leaf("Other");
      ComplexType ext;
      ext.content = Extension{"Base", Group{Compositor{CompositorKind::all, {}, {Particle{leaf("X")}}}}};
      other.complex_type = ext;
      d.elements.push_back(other);

      const std::string expect =
          "<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\">\n"
          "  <xs:complexType name=\"Base\">\n"
          "    <xs:sequence>\n"
          "      <xs:element name=\"Id\" />\n"
          "    </xs:sequence>\n"
          "  </xs:complexType>\n"
          "  <xs:element name=\"Root\">\n"
          "    <xs:complexType mixed=\"true\">\n"
          "      <xs:sequence maxOccurs=\"unbounded\">\n"
          "        <xs:element name=\"Key\" type=\"xs:ID\" />\n"
          "        <xs:element name=\"Sub\" type=\"Base\" minOccurs=\"0\" />\n"
          "        <xs:choice minOccurs=\"0\">\n"
          "          <xs:element name=\"A\" />\n"
          "          <xs:element name=\"B\" />\n"
          "        </xs:choice>\n"
          "        <xs:element ref=\"Other\" minOccurs=\"0\" maxOccurs=\"unbounded\" />\n"
          "      </xs:sequence>\n"
          "    </xs:complexType>\n"
          "  </xs:element>\n"
          "  <xs:element name=\"Other\">\n"
          "    <xs:complexType>\n"
          "      <xs:complexContent>\n"
          "        <xs:extension base=\"Base\">\n"
          "          <xs:all>\n"
          "            <xs:element name=\"X\" />\n"
          "          </xs:all>\n"
          "        </xs:extension>\n"
          "      </xs:complexContent>\n"
          "    </xs:complexType>\n"
          "  </xs:element>\n"
          "</xs:schema>\n";
      EXPECT_EQ(emit(d), expect);
      auto back = read(expect);
      ASSERT_TRUE(back.document) << (back.diagnostics.empty() ? "" : render(back.diagnostics[0]));
      EXPECT_EQ(*back.document, d);
    }

    TEST(Invariants, Violations) {
      Document d;
      Element e = leaf("A");
      e.ref = "Missing";
      e.name.clear();
      ComplexType t;
      t.content = Group{seq({Particle{e}})};
      Element g = leaf("G");
      g.complex_type = t;
      d.elements.push_back(g);
      EXPECT_FALSE(check_invariants(d).empty());
      EXPECT_THROW(emit(d), goossdm::Error);

      Document dup;
      dup.elements = {leaf("A"), leaf("A")};
      EXPECT_FALSE(check_invariants(dup).empty());

      Document bad_occurs;
      Element h = leaf("H");
      ComplexType ht;
      ht.content = Group{seq({Particle{leaf("Z", {2, 1})}})};
      h.complex_type = ht;
      bad_occurs.elements.push_back(h);
      EXPECT_FALSE(check_invariants(bad_occurs).empty());

      Document all_repeat;
      Element k = leaf("K");
      ComplexType kt;
      kt.content = Group{Compositor{CompositorKind::all, {}, {Particle{leaf("Z", {1, 3})}}}};
      k.complex_type = kt;
      all_repeat.elements.push_back(k);
      EXPECT_FALSE(check_invariants(all_repeat).empty());

      Document both;
      Element b = leaf("B");
      b.type_name = "T";
      b.complex_type = ComplexType{};
      ComplexType named;
      named.name = "T";
      both.types.push_back(named);
      both.elements.push_back(b);
      EXPECT_FALSE(check_invariants(both).empty());
    }

    TEST(Read, FixtureEqualsCompiledCaseStudy) {
      auto r = read(fixture_text("visit_records.xsd"));
      ASSERT_TRUE(r.document);
      const auto compiled =
          goossdm::testing::compile_document(goossdm::testing::fixture_schema("visit_records.goossdm"));
      EXPECT_EQ(*r.document, compiled);
    }

    TEST(Read, AttributeOrderAndWhitespaceIgnored) {
      const std::string text =
          "<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\">"
          "<xs:element name=\"R\"><xs:complexType><xs:sequence>"
          "<xs:element maxOccurs=\"3\" minOccurs=\"0\" name=\"A\"/>"
          "</xs:sequence></xs:complexType></xs:element></xs:schema>";
      auto r = read(text);
      ASSERT_TRUE(r.document);
      const auto& ct = *r.document->elements.at(0).complex_type;
      const auto& s = std::get<Compositor>(std::get<Group>(ct.content));
      EXPECT_EQ(std::get<Element>(s.children.at(0).node).occurs, (Occurs{0, 3}));
    }

    struct BadCase {
      const char* code;
      const char* body;
    };

    class Rejects : public ::testing::TestWithParam<BadCase> {};

    TEST_P(Rejects, WithCode) {
      const auto& c = GetParam();
      auto r = read(std::string("<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\">") +
                    c.body + "</xs:schema>");
      EXPECT_FALSE(r.document) << c.body;
      ASSERT_EQ(r.diagnostics.size(), 1u) << c.body;
      EXPECT_EQ(r.diagnostics[0].code, c.code);
    }

    INSTANTIATE_TEST_SUITE_P(
        Xsd, Rejects,
        ::testing::Values(
            BadCase{"E402", "<xs:simpleType name=\"S\"/>"},
            BadCase{"E402", "<xs:element name=\"A\"><xs:complexType><xs:attribute name=\"x\"/>"
                            "</xs:complexType></xs:element>"},
            BadCase{"E402", "<xs:element name=\"A\" nillable=\"true\"/>"},
            BadCase{"E402", "<xs:element name=\"A\" minOccurs=\"0\"/>"},
            BadCase{"E402", "<xs:element name=\"A\"><xs:complexType><xs:sequence>"
                            "<xs:element name=\"B\" ref=\"A\"/></xs:sequence></xs:complexType>"
                            "</xs:element>"},
            BadCase{"E402", "<xs:element name=\"A\"><xs:complexType><xs:sequence>"
                            "<xs:element/></xs:sequence></xs:complexType></xs:element>"},
            BadCase{"E402", "<xs:element name=\"A\">text</xs:element>"},
            BadCase{"E402", "<xs:element name=\"A\"><xs:complexType><xs:sequence>"
                            "<xs:any/></xs:sequence></xs:complexType></xs:element>"},
            BadCase{"E401", "<xs:element name=\"A\">"}));

    TEST(Read, WrongNamespaceRejected) {
      auto r = read("<xs:schema xmlns:xs=\"urn:other\"/>");
      EXPECT_FALSE(r.document);
      EXPECT_TRUE(has_code(r.diagnostics, "E402"));
    }

    TEST(Read, NotXml) {
      auto r = read("not xml at all");
      EXPECT_FALSE(r.document);
      EXPECT_TRUE(has_code(r.diagnostics, "E401"));
    }

    // Hand-rolled generator of documents that satisfy the invariants.
    class DocGen {
    public:
      explicit DocGen(std::uint64_t seed) : rng_(seed) {}

      Document
      build() {
        Document d;
        const auto types = rng_() % 3;
        for (std::uint64_t i = 0; i < types; ++i) {
          ComplexType t;
          t.name = "T" + std::to_string(i);
          t.mixed = rng_() % 4 == 0;
          type_names_.push_back(*t.name);
          if (i > 0 && rng_() % 2)
            t.content = Extension{type_names_[rng_() % i], maybe_group(2)};
          else if (rng_() % 4)
            t.content = group(2);
          d.types.push_back(std::move(t));
        }
        global_names_ = {"G0", "G1", "G2"};
        const auto globals = 1 + rng_() % 3;
        for (std::uint64_t i = 0; i < globals; ++i) {
          Element g;
          g.name = global_names_[i];
          if (rng_() % 3 == 0 && !type_names_.empty())
            g.type_name = type_names_[rng_() % type_names_.size()];
          else if (rng_() % 4)
            g.complex_type = complex(3);
          d.elements.push_back(std::move(g));
        }
        global_names_.resize(globals);
        // A ref is resolvable only after every global is known.
        fix_refs(d);
        return d;
      }

    private:
      Occurs
      occurs() {
        switch (rng_() % 5) {
        case 0: return {0, 1};
        case 1: return {1, Occurs::unbounded};
        case 2: return {0, Occurs::unbounded};
        case 3: return {static_cast<std::uint32_t>(rng_() % 3), 3};
        default: return {};
        }
      }

      std::string
      name() {
        return "e" + std::to_string(rng_() % 20);
      }

      Particle
      element(int depth) {
        Element e;
        e.occurs = occurs();
        switch (rng_() % 5) {
        case 0: e.ref = "G"; break;
        case 1:
          e.name = name();
          e.type_name = std::string(id_type);
          break;
        case 2:
          e.name = name();
          if (!type_names_.empty()) e.type_name = type_names_[rng_() % type_names_.size()];
          break;
        case 3:
          e.name = name();
          if (depth > 0) e.complex_type = complex(depth - 1);
          break;
        default: e.name = name(); break;
        }
        return Particle{std::move(e)};
      }

      Particle
      particle(int depth) {
        const auto r = rng_() % 6;
        if (depth > 0 && r == 0) return to_particle(group(depth - 1));
        return element(depth);
      }

      Group
      group(int depth) {
        const auto n = rng_() % 4;
        std::vector<Particle> kids;
        switch (rng_() % 3) {
        case 0: {
          for (std::uint64_t i = 0; i < n; ++i) kids.push_back(particle(depth));
          return Compositor{CompositorKind::sequence, occurs(), std::move(kids)};
        }
        case 1: {
          for (std::uint64_t i = 0; i < n; ++i) {
            Element e;
            e.name = name();
            e.occurs = rng_() % 2 ? Occurs{0, 1} : Occurs{};
            kids.push_back(Particle{std::move(e)});
          }
          return Compositor{CompositorKind::all, rng_() % 2 ? Occurs{0, 1} : Occurs{}, std::move(kids)};
        }
        default: {
          for (std::uint64_t i = 0; i < n; ++i) kids.push_back(particle(depth));
          return Choice{occurs(), std::move(kids)};
        }
        }
      }

      std::optional<Group>
      maybe_group(int depth) {
        if (rng_() % 3 == 0) return std::nullopt;
        return group(depth);
      }

      ComplexType
      complex(int depth) {
        ComplexType t;
        t.mixed = rng_() % 5 == 0;
        if (!type_names_.empty() && rng_() % 4 == 0)
          t.content = Extension{type_names_[rng_() % type_names_.size()], maybe_group(depth)};
        else if (rng_() % 5)
          t.content = group(depth);
        return t;
      }

      void
      fix_particles(std::vector<Particle>& ps) {
        for (auto& p : ps) {
          if (auto* e = std::get_if<Element>(&p.node)) {
            if (e->ref) e->ref = global_names_[rng_() % global_names_.size()];
            if (e->complex_type) fix_type(*e->complex_type);
          } else if (auto* c = std::get_if<Compositor>(&p.node)) {
            fix_particles(c->children);
          } else {
            fix_particles(std::get<Choice>(p.node).children);
          }
        }
      }

      void
      fix_group(Group& g) {
        fix_particles(children_of(g));
      }

      void
      fix_type(ComplexType& t) {
        if (auto* g = std::get_if<Group>(&t.content)) fix_group(*g);
        if (auto* x = std::get_if<Extension>(&t.content))
          if (x->added) fix_group(*x->added);
      }

      void
      fix_refs(Document& d) {
        for (auto& t : d.types) fix_type(t);
        for (auto& e : d.elements)
          if (e.complex_type) fix_type(*e.complex_type);
      }

      std::mt19937_64 rng_;
      std::vector<std::string> type_names_;
      std::vector<std::string> global_names_;
    };

    TEST(Property, EmitReadRoundTrip) {
      for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        const auto d = DocGen(seed).build();
        ASSERT_TRUE(check_invariants(d).empty()) << "seed " << seed << ": " << check_invariants(d)[0];
        const auto text = emit(d);
        auto back = read(text);
        ASSERT_TRUE(back.document) << "seed " << seed << "\n" << text;
        EXPECT_EQ(*back.document, d) << "seed " << seed;
        EXPECT_EQ(emit(*back.document), text) << "seed " << seed;
      }
    }

    TEST(Property, CompiledSchemasRoundTrip) {
      for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto d = goossdm::testing::compile_document(random_schema(seed, 1 + seed % 8));
        auto back = read(emit(d));
        ASSERT_TRUE(back.document) << "seed " << seed;
        EXPECT_EQ(*back.document, d) << "seed " << seed;
      }
    }

  } // namespace
} // namespace goossdm::xsd
