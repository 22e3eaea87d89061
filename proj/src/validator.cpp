#include <goossdm/validator.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace goossdm {

  namespace {

    struct RuleText {
      std::string_view code;
      std::string_view text;
    };

    constexpr RuleText rule_table[] = {
        {"E101", "Unexpected token: the input does not follow the schema grammar."},
        {"E102", "Invalid participation value: p and P take one of 1:1, 0:1, "
                 "1:M, 0:M, 0:X, 1:X."},
        {"E103", "Invalid ordering value: theta is 1 (ordered) or 0 (unordered)."},
        {"E104", "Duplicate name: ESG, CSG, annotation and connector names "
                 "share one namespace and must be unique."},
        {"E105", "Unresolved name: every identifier must name a declared "
                 "construct."},
        {"E106", "Reference kind mismatch: a reference joins an ESG to an ESG "
                 "or a CSG to a CSG; annotations cannot be referenced."},
        {"E107", "Invalid layer: CSGs live on layer 1 or above; layer 0 holds "
                 "the ESGs."},
        {"E108", "Wrong construct kind: associations, connectors, links and "
                 "groups relate CSGs only."},
        {"E201", "I/O failure: the input could not be read or the output "
                 "could not be written."},
        {"E301", "Annotation containment: an annotation always participates "
                 "with cardinality 1:1; only its ordering value may vary."},
        {"E302", "Link adjacency: a link is defined between a parent CSG and "
                 "the inheriting CSG on the adjacent upper layer, and links "
                 "never form a cycle."},
        {"E303", "Containment adjacency: a CSG contains CSGs of the adjacent "
                 "lower layer only, so containment between CSGs is acyclic."},
        {"E304", "Determinant placement: only an ESG directly encapsulated by "
                 "its CSG can be the determinant vertex."},
        {"E305", "Exclusive grouping: members sharing 0:X or 1:X must be "
                 "declared consecutively to form one disjunction."},
        {"E306", "Connector shape: an association connector joins at least two "
                 "distinct CSGs, and its context CSG is not also a member."},
        {"E307", "Reference kind: references are defined between an ESG and a "
                 "referred ESG or between a CSG and a referred CSG."},
        {"E308", "Single inheritance: a CSG specializes at most one base CSG."},
        {"E309", "Association adjacency: associations join CSGs of the same "
                 "layer or of adjacent layers."},
        {"E310", "Layer range: every CSG occupies layer 1 or higher."},
        {"W301", "Orphan ESG: the ESG is never contained and never referenced, "
                 "so it produces no element."},
        {"W302", "Multiple roots: several CSGs occupy the topmost layer; each "
                 "becomes a global element."},
        {"W303", "Empty CSG: the CSG has no members and produces an empty "
                 "complex type."},
        {"E401", "Malformed XML: the document is not well-formed."},
        {"E402", "Unsupported construct: the XSD uses a feature outside the "
                 "emitted subset."},
        {"E502", "Mixed exclusive run: consecutive exclusive members mix 0:X "
                 "and 1:X, so no single choice encodes them."},
        {"E503", "Association cycle: nesting relationships form a cycle and no "
                 "tree-shaped XSD exists."},
        {"W201", "Unordered members cannot use xs:all here (a member repeats, "
                 "or a choice is present); xs:sequence is used instead."},
        {"W501", "Unreachable CSG: no root nests the CSG; it is emitted as an "
                 "additional global element."},
        {"V601", "Unexpected child: the element is not allowed at this point "
                 "of the content model."},
        {"V602", "Missing child: a required element is absent."},
        {"V603", "Occurrence bound: an element repeats more often than its "
                 "maxOccurs allows, or less than minOccurs."},
        {"V604", "Choice violation: a choice unit holds more than one branch, "
                 "or none where one is required."},
        {"V605", "Duplicate ID: one ID value identifies two different "
                 "instances."},
        {"V606", "Unexpected text: character content appears in an element "
                 "whose complex type is not mixed."},
    };

    // Flags exclusive values that occur in more than one run of consecutive
    // exclusive members.
    template <typename Member, typename GetTuple, typename Report>
    void
    check_exclusive_runs(const std::vector<Member>& list, GetTuple get,
                         Report report) {
      std::map<Participation, int> runs_seen;
      std::set<Participation> in_run;
      auto close_run = [&] {
        for (auto p : in_run) ++runs_seen[p];
        in_run.clear();
      };
      for (const auto& m : list) {
        const auto p = get(m).p;
        if (!is_exclusive(p)) {
          close_run();
          continue;
        }
        if (runs_seen[p] > 0 && !in_run.contains(p)) {
          report(m, p);
          // Count once per offending member; keep scanning.
        }
        in_run.insert(p);
      }
      close_run();
    }

    bool
    has_cycle(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
      std::vector<std::vector<std::size_t>> adj(n);
      for (auto [a, b] : edges) adj[a].push_back(b);
      std::vector<int> state(n, 0);
      for (std::size_t s = 0; s < n; ++s) {
        if (state[s]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
        state[s] = 1;
        while (!stack.empty()) {
          auto& [v, i] = stack.back();
          if (i < adj[v].size()) {
            const auto w = adj[v][i++];
            if (state[w] == 1) return true;
            if (state[w] == 0) {
              state[w] = 1;
              stack.emplace_back(w, 0);
            }
          } else {
            state[v] = 2;
            stack.pop_back();
          }
        }
      }
      return false;
    }

  } // namespace

  ValidationReport
  validate(const SchemaGraph& s) {
    ValidationReport report;
    auto& out = report.diagnostics;
    auto csg_name = [&](std::size_t i) { return "'" + s.csgs[i].name + "'"; };

    for (const auto& c : s.csgs) {
      if (c.layer < 1)
        out.push_back(make_error("E310", "CSG '" + c.name + "' has layer " +
                                             std::to_string(c.layer) +
                                             "; CSG layers start at 1",
                                 c.span));
    }

    // Containment rules.
    std::vector<std::pair<std::size_t, std::size_t>> csg_edges;
    bool adjacency_ok = true;
    for (const auto& e : s.containments) {
      const std::string& parent = s.csgs[e.parent].name;
      const std::string& child = s.name_of(e.child);
      if (e.child.kind == NodeKind::annotation &&
          e.constraint.p != Participation::one_one) {
        out.push_back(make_error(
            "E301", "annotation '" + child + "' in CSG '" + parent +
                        "' has participation " +
                        std::string(to_string(e.constraint.p)) +
                        "; annotations are always 1:1",
            e.span));
      }
      if (e.is_determinant &&
          (e.child.kind != NodeKind::esg || e.is_reference)) {
        out.push_back(make_error(
            "E304", "determinant flag on '" + child + "' in CSG '" + parent +
                        "'; only a directly encapsulated ESG can be a "
                        "determinant",
            e.span));
      }
      if (e.is_reference && e.child.kind == NodeKind::annotation) {
        out.push_back(make_error("E307", "CSG '" + parent +
                                             "' references annotation '" +
                                             child + "'",
                                 e.span));
      }
      if (e.child.kind == NodeKind::csg && !e.is_reference) {
        csg_edges.emplace_back(e.parent, e.child.index);
        const int pl = s.csgs[e.parent].layer;
        const int cl = s.csgs[e.child.index].layer;
        if (cl + 1 != pl) {
          adjacency_ok = false;
          out.push_back(make_error(
              "E303", "CSG '" + parent + "' (layer " + std::to_string(pl) +
                          ") contains CSG '" + child + "' (layer " +
                          std::to_string(cl) +
                          "); contained CSGs must sit one layer below",
              e.span));
        }
      }
    }
    if (adjacency_ok && has_cycle(s.csgs.size(), csg_edges)) {
      out.push_back(make_error("E303", "containment between CSGs forms a cycle"));
    }

    // Exclusive runs: containment lists, connector participants, and the
    // association children of each parent.
    auto report_split = [&](const std::string& where, const std::string& who,
                            Participation p, const SourceSpan& span) {
      out.push_back(make_error(
          "E305", "exclusive member '" + who + "' (" +
                      std::string(to_string(p)) + ") in " + where +
                      " is separated from the other " +
                      std::string(to_string(p)) + " members",
          span));
    };
    for (std::size_t i = 0; i < s.csgs.size(); ++i) {
      check_exclusive_runs(
          s.members_of(i), [](const ContainmentEdge* e) { return e->constraint; },
          [&](const ContainmentEdge* e, Participation p) {
            report_split("CSG " + csg_name(i), s.name_of(e->child), p, e->span);
          });
      std::vector<const AssociationEdge*> children;
      for (const auto& a : s.associations)
        if (s.association_parent(a) == i) children.push_back(&a);
      check_exclusive_runs(
          children, [](const AssociationEdge* a) { return a->constraint; },
          [&](const AssociationEdge* a, Participation p) {
            report_split("associations of CSG " + csg_name(i),
                         s.csgs[s.association_child(*a)].name, p, a->span);
          });
    }

    for (const auto& a : s.associations) {
      const int d = s.csgs[a.left].layer - s.csgs[a.right].layer;
      if (d > 1 || d < -1) {
        out.push_back(make_error(
            "E309", "association " + csg_name(a.left) + " -- " +
                        csg_name(a.right) +
                        " joins CSGs more than one layer apart",
            a.span));
      }
    }

    for (const auto& c : s.connectors) {
      std::set<std::size_t> seen;
      bool repeated = false;
      for (const auto& m : c.members) repeated |= !seen.insert(m.csg).second;
      if (c.context && seen.contains(c.context->csg)) repeated = true;
      if (c.members.size() < 2) {
        out.push_back(make_error("E306", "connector '" + c.name + "' has " +
                                             std::to_string(c.members.size()) +
                                             " member(s); at least two are "
                                             "required",
                                 c.span));
        continue;
      }
      if (repeated) {
        out.push_back(make_error("E306", "connector '" + c.name +
                                             "' repeats a participant",
                                 c.span));
      }
      const auto layout = s.connector_layout(c);
      check_exclusive_runs(
          layout.participants,
          [](const NestedPartner& m) { return m.constraint; },
          [&](const NestedPartner& m, Participation p) {
            report_split("connector '" + c.name + "'", s.csgs[m.csg].name, p,
                         c.span);
          });
    }

    // Links.
    std::vector<std::pair<std::size_t, std::size_t>> link_edges;
    bool link_adjacent = true;
    std::map<std::size_t, int> base_count;
    for (const auto& l : s.links) {
      link_edges.emplace_back(l.base, l.derived);
      const int bl = s.csgs[l.base].layer;
      const int dl = s.csgs[l.derived].layer;
      if (dl != bl + 1) {
        link_adjacent = false;
        out.push_back(make_error(
            "E302", "link " + csg_name(l.base) + " (layer " +
                        std::to_string(bl) + ") -> " + csg_name(l.derived) +
                        " (layer " + std::to_string(dl) +
                        "); the specialized CSG must be on the adjacent upper "
                        "layer",
            l.span));
      }
      if (++base_count[l.derived] == 2) {
        out.push_back(make_error("E308", "CSG " + csg_name(l.derived) +
                                             " specializes more than one base",
                                 l.span));
      }
    }
    if (link_adjacent && has_cycle(s.csgs.size(), link_edges))
      out.push_back(make_error("E302", "links form a cycle"));

    for (const auto& r : s.references) {
      if (r.source.kind != r.target.kind ||
          r.source.kind == NodeKind::annotation) {
        out.push_back(make_error(
            "E307", "reference from " + std::string(to_string(r.source.kind)) +
                        " '" + s.name_of(r.source) + "' to " +
                        std::string(to_string(r.target.kind)) + " '" +
                        s.name_of(r.target) + "'",
            r.span));
      }
    }

    // Warnings.
    for (std::size_t i = 0; i < s.esgs.size(); ++i) {
      const NodeRef ref{NodeKind::esg, i};
      const bool used =
          std::any_of(s.containments.begin(), s.containments.end(),
                      [&](const ContainmentEdge& e) { return e.child == ref; }) ||
          std::any_of(s.references.begin(), s.references.end(),
                      [&](const ReferenceEdge& r) {
                        return r.source == ref || r.target == ref;
                      });
      if (!used)
        out.push_back(make_warning("W301", "ESG '" + s.esgs[i].name +
                                               "' is never contained or "
                                               "referenced",
                                   s.esgs[i].span));
    }
    if (!s.csgs.empty()) {
      const auto roots = s.roots_of();
      if (roots.size() > 1) {
        std::string names;
        for (auto r : roots) names += (names.empty() ? "" : ", ") + s.csgs[r].name;
        out.push_back(make_warning(
            "W302", "several CSGs occupy the topmost layer: " + names));
      }
    }
    for (std::size_t i = 0; i < s.csgs.size(); ++i) {
      if (s.members_of(i).empty())
        out.push_back(make_warning("W303", "CSG " + csg_name(i) +
                                               " has no members",
                                   s.csgs[i].span));
    }

    report.ok = !has_errors(out);
    return report;
  }

  std::string
  explain(std::string_view code) {
    for (const auto& r : rule_table)
      if (r.code == code) return std::string(r.code) + ": " + std::string(r.text);
    throw Error("unknown-code", "unknown diagnostic code '" + std::string(code) + "'");
  }

  std::vector<std::string>
  known_codes() {
    std::vector<std::string> out;
    for (const auto& r : rule_table) out.emplace_back(r.code);
    std::sort(out.begin(), out.end());
    return out;
  }

} // namespace goossdm
