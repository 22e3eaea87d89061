#include <goossdm/report.hpp>

#include <algorithm>

namespace goossdm {

  using nlohmann::json;

  json
  diagnostics_json(const std::vector<Diagnostic>& diags) {
    json out = json::array();
    for (const auto& d : diags) {
      out.push_back({{"code", d.code},
                     {"severity", severity_name(d.severity)},
                     {"message", d.message},
                     {"file", d.span.file},
                     {"line", d.span.start.line},
                     {"col", d.span.start.column}});
    }
    return out;
  }

  json
  rows_json(const CorrespondenceReport& report) {
    json out = json::array();
    for (const auto& r : report.rows) {
      out.push_back({{"kind", r.kind},
                     {"construct", r.construct},
                     {"expected", r.expected},
                     {"found", r.found ? json(*r.found) : json(nullptr)},
                     {"status", std::string(to_string(r.status))},
                     {"note", r.note}});
    }
    return out;
  }

  json
  conformance_json(const ConformanceReport& report) {
    json v = json::array();
    for (const auto& x : report.violations)
      v.push_back({{"path", x.path}, {"code", x.code}, {"message", x.message}});
    return {{"ok", report.ok}, {"violations", v}};
  }

  namespace {

    json
    occurs_json(const xsd::Occurs& o) {
      return {{"min", o.min}, {"max", o.is_unbounded() ? json("unbounded") : json(o.max)}};
    }

    json
    node_json(const PlanNode& n);

    json
    entry_json(const PlanEntry& e) {
      static const char* kinds[] = {"element", "csg", "ref", "choice"};
      json j = {{"kind", kinds[static_cast<int>(e.kind)]}, {"occurs", occurs_json(e.occurs)}};
      if (e.kind == EntryKind::choice) {
        json b = json::array();
        for (const auto& x : e.branches) b.push_back(entry_json(x));
        j["branches"] = b;
        return j;
      }
      j["name"] = e.name;
      if (e.type_name) j["type"] = *e.type_name;
      if (!e.content.empty()) j["content"] = node_json(e.content.front());
      return j;
    }

    json
    node_json(const PlanNode& n) {
      json entries = json::array();
      for (const auto& e : n.entries) entries.push_back(entry_json(e));
      json j = {{"csg", n.name},
                {"compositor", std::string(xsd::to_string(n.compositor))},
                {"occurs", occurs_json(n.occurs)},
                {"mixed", n.mixed},
                {"entries", entries}};
      if (n.base) j["base"] = *n.base;
      return j;
    }

  } // namespace

  json
  plan_json(const NestingPlan& plan) {
    json types = json::array();
    for (const auto& t : plan.named_types) types.push_back(node_json(t));
    json globals = json::array();
    for (const auto& g : plan.globals) {
      json j = {{"name", g.name}, {"role", std::string(to_string(g.role))}};
      if (g.type_name) j["type"] = *g.type_name;
      if (g.content) j["content"] = node_json(*g.content);
      globals.push_back(j);
    }
    return {{"named_types", types}, {"globals", globals}};
  }

  std::string
  rows_table(const CorrespondenceReport& report) {
    std::size_t w = 9;
    for (const auto& r : report.rows) w = std::max(w, r.construct.size());
    auto pad = [](std::string s, std::size_t n) {
      if (s.size() < n) s.append(n - s.size(), ' ');
      return s;
    };
    std::string out = pad("status", 8) + pad("construct", w + 2) + "expected -> found\n";
    for (const auto& r : report.rows) {
      out += pad(std::string(to_string(r.status)), 8) + pad(r.construct, w + 2) + r.expected +
             " -> " + (r.found ? *r.found : "(none)");
      if (!r.note.empty()) out += "  [" + r.note + "]";
      out += '\n';
    }
    std::size_t passed = 0;
    for (const auto& r : report.rows) passed += r.status == RowStatus::pass;
    out += std::to_string(passed) + "/" + std::to_string(report.rows.size()) + " rows pass\n";
    return out;
  }

} // namespace goossdm
