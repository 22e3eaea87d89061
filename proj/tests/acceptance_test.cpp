// Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <goossdm/correspondence.hpp>
#include <goossdm/dsl.hpp>
#include <goossdm/instance.hpp>
#include <goossdm/transformer.hpp>
#include <goossdm/validator.hpp>
#include <goossdm/xml.hpp>
#include <goossdm/xsd.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

  using namespace goossdm;
  using xsd::Occurs;

  // Pinned thresholds.
  constexpr double golden_seconds = 1.0;
  constexpr double property_seconds = 60.0;
  constexpr double instance_seconds = 10.0;
  constexpr std::uint64_t property_seeds = 500;
  constexpr std::uint64_t roundtrip_inputs = 500;
  constexpr std::size_t instance_count = 1000;
  constexpr std::size_t max_budget = 12;

  struct Outcome {
    bool pass = true;
    std::string detail;

    void
    require(bool ok, const std::string& what) {
      if (ok) return;
      if (pass) detail = what;
      pass = false;
    }
  };

  std::string
  fixture_text(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::optional<SchemaGraph>
  schema_of(const std::string& source) {
    auto r = dsl::compile_source(source);
    if (!r.schema || has_errors(r.diagnostics) || !validate(*r.schema).ok) return std::nullopt;
    return r.schema;
  }

  double
  seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  std::string
  timing(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3fs", s);
    return buf;
  }

  const xsd::Compositor*
  compositor_of(const xsd::Element& e) {
    if (!e.complex_type) return nullptr;
    auto* g = std::get_if<xsd::Group>(&e.complex_type->content);
    return g ? std::get_if<xsd::Compositor>(g) : nullptr;
  }

  const xsd::Element*
  element_at(const xsd::Compositor* c, std::size_t i) {
    if (!c || i >= c->children.size()) return nullptr;
    return std::get_if<xsd::Element>(&c->children[i].node);
  }

  // 1. Golden compile.
  Outcome
  golden_compile() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    auto s = schema_of(fixture_text("visit_records.goossdm"));
    o.require(s.has_value(), "case study does not validate");
    if (!s) return o;
    auto r = transform(*s);
    o.require(r.document.has_value(), "transform failed");
    if (!r.document) return o;
    const std::string text = xsd::emit(*r.document);
    const double dt = seconds_since(t0);

    auto golden = xsd::read(fixture_text("visit_records.xsd"));
    o.require(golden.document.has_value(), "golden fixture unreadable");
    if (golden.document) o.require(*golden.document == *r.document, "output differs from golden");
    auto back = xsd::read(text);
    o.require(back.document && *back.document == *r.document, "emitted text does not read back");

    const auto& d = *r.document;
    o.require(d.elements.size() == 1 && d.elements[0].name == "Patient", "root is not Patient");
    if (d.elements.empty()) return o;
    const auto* ps = compositor_of(d.elements[0]);
    o.require(ps && ps->occurs.is_unbounded(), "Patient sequence not unbounded");
    const auto* visit = element_at(ps, 1);
    o.require(visit && visit->name == "Visit" && visit->occurs.is_unbounded(),
              "Visit missing or bounded");
    const auto* vs = visit ? compositor_of(*visit) : nullptr;
    o.require(vs && vs->occurs.is_unbounded(), "Visit sequence not unbounded");
    const auto* doctor = element_at(vs, 1);
    const auto* regid = doctor ? element_at(compositor_of(*doctor), 0) : nullptr;
    o.require(regid && regid->name == "RegID" && regid->type_name == std::string(xsd::id_type),
              "RegID not xs:ID");
    const xsd::Choice* choice =
        vs && vs->children.size() == 3 ? std::get_if<xsd::Choice>(&vs->children[2].node) : nullptr;
    o.require(choice && choice->children.size() == 2, "Dept/Clinic choice missing");
    if (choice && choice->children.size() == 2) {
      const auto* dept = std::get_if<xsd::Element>(&choice->children[0].node);
      const auto* clinic = std::get_if<xsd::Element>(&choice->children[1].node);
      o.require(dept && dept->name == "Dept" && dept->occurs.min == 0, "Dept branch wrong");
      o.require(clinic && clinic->name == "Clinic" && clinic->occurs.min == 0, "Clinic branch wrong");
      const auto* did = dept ? element_at(compositor_of(*dept), 0) : nullptr;
      o.require(did && did->name == "DID" && did->type_name == std::string(xsd::id_type),
                "DID not xs:ID");
    }
    o.require(dt < golden_seconds, "compile took " + timing(dt));
    if (o.pass) o.detail = "structurally equal to golden, " + timing(dt);
    return o;
  }

  std::string
  replace_once(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    if (at == std::string::npos) return {};
    return text.replace(at, from.size(), to);
  }

  // 2. Instance validation of the case-study document and six single edits.
  Outcome
  instance_codes() {
    Outcome o;
    auto s = schema_of(fixture_text("visit_records.goossdm"));
    if (!s) {
      o.require(false, "case study does not validate");
      return o;
    }
    const auto doc = *transform(*s).document;
    const auto base = fixture_text("visit_records.xml");
    auto root = xml::parse(base).root;
    o.require(root && validate_instance(doc, *root).ok, "case-study instance rejected");

    struct Edit {
      const char* code;
      const char* from;
      const char* to;
    };
    const Edit edits[] = {
        {"V601", "<DName>Dr. P. Roy</DName>", "<DName>Dr. P. Roy</DName><Nurse/>"},
        {"V602", "<DName>Dr. P. Roy</DName>", ""},
        {"V603", "<DName>Dr. P. Roy</DName>", "<DName>Dr. P. Roy</DName><DName>Dr. Q</DName>"},
        {"V604", "</Hospital>\n    </Dept>",
         "</Hospital>\n    </Dept><Clinic><Name>Clinic Z</Name></Clinic>"},
        {"V605", "<RegID>1234</RegID>", "<RegID>4321</RegID>"},
        {"V606", "<Date>10-JAN-2009</Date>", "stray<Date>10-JAN-2009</Date>"},
    };
    int hits = 0;
    for (const auto& e : edits) {
      const auto text = replace_once(base, e.from, e.to);
      auto parsed = xml::parse(text);
      if (text.empty() || !parsed.root) {
        o.require(false, std::string("edit for ") + e.code + " not applicable");
        continue;
      }
      const auto r = validate_instance(doc, *parsed.root);
      const bool exact = !r.ok && r.violations.size() == 1 && r.violations[0].code == e.code;
      o.require(exact, std::string("edit for ") + e.code + " gave " +
                           (r.violations.empty() ? "nothing" : r.violations[0].code));
      hits += exact;
    }
    if (o.pass) o.detail = "instance valid, " + std::to_string(hits) + "/6 edits exact";
    return o;
  }

  // 3. Participation encoding through the full pipeline.
  Outcome
  participation_encoding() {
    Outcome o;
    struct Row {
      const char* p;
      bool choice;
      Occurs member;
    };
    const Row rows[] = {
        {"1:1", false, {1, 1}},
        {"0:1", false, {0, 1}},
        {"1:M", false, {1, Occurs::unbounded}},
        {"0:M", false, {0, Occurs::unbounded}},
        {"0:X", true, {0, 1}},
        {"1:X", true, {1, 1}},
    };
    int good = 0;
    for (const auto& row : rows) {
      const std::string src = std::string("schema S { esg a; esg b; csg R @layer 1 {") +
                              " contains a <" + row.p + ",1>; contains b <" + row.p + ",1>; } }";
      auto s = schema_of(src);
      if (!s) {
        o.require(false, std::string(row.p) + ": schema rejected");
        continue;
      }
      const auto d = *transform(*s).document;
      const auto* seq = compositor_of(d.elements.at(0));
      bool ok = seq != nullptr;
      if (ok && row.choice) {
        const auto* ch = seq->children.size() == 1 ? std::get_if<xsd::Choice>(&seq->children[0].node)
                                                   : nullptr;
        ok = ch && ch->children.size() == 2 && ch->occurs.is_default();
        for (std::size_t i = 0; ok && i < 2; ++i) {
          const auto* e = std::get_if<xsd::Element>(&ch->children[i].node);
          ok = e && e->occurs == row.member;
        }
      } else if (ok) {
        ok = seq->children.size() == 2;
        for (std::size_t i = 0; ok && i < 2; ++i) {
          const auto* e = element_at(seq, i);
          ok = e && e->occurs == row.member;
        }
      }
      o.require(ok, std::string(row.p) + " encoded wrongly");
      good += ok;
    }
    o.detail = std::to_string(good) + "/6";
    return o;
  }

  // 4. Compositor table.
  Outcome
  compositor_table() {
    Outcome o;
    struct Row {
      const char* members;
      xsd::CompositorKind kind;
      bool warning;
    };
    const Row rows[] = {
        {"contains a <1:1,1>; contains b <0:1,1>;", xsd::CompositorKind::sequence, false},
        {"contains a <1:1,0>; contains b <0:1,0>;", xsd::CompositorKind::all, false},
        {"contains a <1:M,0>; contains b <1:1,0>;", xsd::CompositorKind::sequence, true},
    };
    int good = 0;
    for (const auto& row : rows) {
      auto s = schema_of(std::string("schema S { esg a; esg b; csg R @layer 1 { ") + row.members + " } }");
      if (!s) {
        o.require(false, "schema rejected");
        continue;
      }
      const auto r = transform(*s);
      const auto* c = compositor_of(r.document->elements.at(0));
      bool warned = false;
      for (const auto& d : r.diagnostics) warned |= d.code == "W201";
      const bool ok = c && c->kind == row.kind && warned == row.warning;
      o.require(ok, std::string("row '") + row.members + "' wrong");
      good += ok;
    }
    o.detail = std::to_string(good) + "/3";
    return o;
  }

  // 5. Link fixture.
  Outcome
  link_extension() {
    Outcome o;
    auto s = schema_of(fixture_text("link_person.goossdm"));
    if (!s) {
      o.require(false, "link fixture rejected");
      return o;
    }
    const auto d = *transform(*s).document;
    const auto* base = d.find_type("Person");
    o.require(base != nullptr, "no named type Person");
    const auto* emp = d.find_element("Employee");
    const auto* ext = emp && emp->complex_type ? std::get_if<xsd::Extension>(&emp->complex_type->content)
                                               : nullptr;
    o.require(ext && ext->base == "Person", "Employee does not extend Person");

    auto link_row = [](const CorrespondenceReport& r) -> const CorrespondenceRow* {
      for (const auto& row : r.rows)
        if (row.kind == "link_extension") return &row;
      return nullptr;
    };
    const auto good = check_correspondence(*s, d);
    const auto* row = link_row(good);
    o.require(row && row->status == RowStatus::pass && good.ok, "link row does not pass");
    auto mutated = apply_mutation(d, MutationKind::drop_extension);
    o.require(mutated.has_value(), "extension could not be removed");
    if (mutated) {
      const auto bad = check_correspondence(*s, *mutated);
      const auto* brow = link_row(bad);
      o.require(brow && brow->status == RowStatus::fail, "link row still passes without extension");
    }
    if (o.pass) o.detail = "named base, extension, row pass, mutation fails row";
    return o;
  }

  // 6. Random schemas: transform, correspondence, mutation detection.
  Outcome
  random_pipeline() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::uint64_t passed = 0, applied = 0, detected = 0;
    for (std::uint64_t seed = 1; seed <= property_seeds; ++seed) {
      const auto s = random_schema(seed, 1 + seed % max_budget);
      if (!validate(s).ok) {
        o.require(false, "seed " + std::to_string(seed) + " invalid");
        continue;
      }
      const auto r = transform(s);
      if (!r.document) {
        o.require(false, "seed " + std::to_string(seed) + " transform failed");
        continue;
      }
      const auto report = check_correspondence(s, *r.document);
      o.require(report.ok, "seed " + std::to_string(seed) + " correspondence failed");
      passed += report.ok;
      for (const auto& m : mutation_suite(s, *r.document)) {
        applied += m.applied;
        detected += m.applied && m.detected;
      }
    }
    o.require(applied == detected, "undetected mutants on random schemas");

    std::size_t kinds_detected = 0;
    if (auto s = schema_of(fixture_text("visit_records_extended.goossdm"))) {
      for (const auto& m : mutation_suite(*s, *transform(*s).document))
        kinds_detected += m.applied && m.detected;
    }
    o.require(kinds_detected == std::size(all_mutations), "mutation suite below 8/8");
    const double dt = seconds_since(t0);
    o.require(dt < property_seconds, "took " + timing(dt));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%llu/%llu pass, mutation suite %zu/8, random mutants %llu/%llu, %s",
                  static_cast<unsigned long long>(passed),
                  static_cast<unsigned long long>(property_seeds), kinds_detected,
                  static_cast<unsigned long long>(detected),
                  static_cast<unsigned long long>(applied), timing(dt).c_str());
    if (o.pass) o.detail = buf;
    return o;
  }

  // 7. Round trips.
  Outcome
  round_trips() {
    Outcome o;
    std::uint64_t xsd_ok = 0, dsl_ok = 0;
    for (std::uint64_t seed = 1; seed <= roundtrip_inputs; ++seed) {
      const auto s = random_schema(seed, 1 + seed % max_budget);
      const auto d = *transform(s).document;
      const auto text = xsd::emit(d);
      auto back = xsd::read(text);
      const bool x = back.document && *back.document == d && xsd::emit(*back.document) == text;
      o.require(x, "xsd round trip failed for seed " + std::to_string(seed));
      xsd_ok += x;

      const auto src = dsl::format(dsl::to_syntax_tree(s));
      auto parsed = dsl::parse(src);
      auto lowered = parsed.ok() ? dsl::lower(parsed.tree) : dsl::LowerResult{};
      const bool y = parsed.ok() && dsl::format(parsed.tree) == src && lowered.schema &&
                     *lowered.schema == s;
      o.require(y, "dsl round trip failed for seed " + std::to_string(seed));
      dsl_ok += y;
    }
    o.detail = "xsd " + std::to_string(xsd_ok) + "/" + std::to_string(roundtrip_inputs) + ", dsl " +
               std::to_string(dsl_ok) + "/" + std::to_string(roundtrip_inputs);
    return o;
  }

  // True when some Visit repetition unit (Date, Doctor, choice) holds both
  // a Dept and a Clinic.
  bool
  dept_and_clinic_together(const xml::Element& e) {
    if (e.name == "Visit") {
      bool dept = false, clinic = false;
      for (const auto& c : e.children) {
        if (c.name == "Date") {
          if (dept && clinic) return true;
          dept = clinic = false;
        }
        dept |= c.name == "Dept";
        clinic |= c.name == "Clinic";
      }
      if (dept && clinic) return true;
    }
    for (const auto& c : e.children)
      if (dept_and_clinic_together(c)) return true;
    return false;
  }

  // 8. Generated case-study instances.
  Outcome
  generated_instances() {
    Outcome o;
    auto s = schema_of(fixture_text("visit_records.goossdm"));
    if (!s) {
      o.require(false, "case study rejected");
      return o;
    }
    const auto doc = *transform(*s).document;
    const auto t0 = std::chrono::steady_clock::now();
    GenConfig cfg;
    cfg.seed = 1;
    cfg.count = instance_count;
    const auto first = generate(doc, cfg);
    const auto second = generate(doc, cfg);
    std::size_t valid = 0, identical = 0, together = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
      const auto text = xml::serialize(first[i]);
      identical += text == xml::serialize(second[i]);
      auto parsed = xml::parse(text);
      valid += parsed.root && validate_instance(doc, *parsed.root).ok;
      together += dept_and_clinic_together(first[i]);
    }
    const double dt = seconds_since(t0);
    o.require(first.size() == instance_count, "wrong number of documents");
    o.require(valid == instance_count, "invalid instances generated");
    o.require(together == 0, "Dept and Clinic co-occur");
    o.require(identical == instance_count, "same seed gave different bytes");
    o.require(dt < instance_seconds, "took " + timing(dt));
    if (o.pass)
      o.detail = std::to_string(valid) + "/" + std::to_string(instance_count) +
                 " valid, 0 co-occurrences, byte-identical, " + timing(dt);
    return o;
  }

} // namespace

int
main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"golden compile", golden_compile},
      {"instance validation codes", instance_codes},
      {"participation encoding", participation_encoding},
      {"compositor table", compositor_table},
      {"link extension", link_extension},
      {"random schema pipeline", random_pipeline},
      {"round trips", round_trips},
      {"generated instances", generated_instances},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    failed += !o.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
