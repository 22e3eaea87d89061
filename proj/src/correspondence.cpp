#include <goossdm/correspondence.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace goossdm {

  std::string_view
  to_string(RowStatus s) {
    return s == RowStatus::pass ? "pass" : "fail";
  }

  namespace {

    using xsd::ComplexType;
    using xsd::Occurs;

    constexpr auto unbounded = Occurs::unbounded;

    // Occurs a member must carry, taken straight from the lookup table.
    Occurs
    table_occurs(Participation p) {
      switch (p) {
      case Participation::one_one: return {1, 1};
      case Participation::zero_one: return {0, 1};
      case Participation::one_many: return {1, unbounded};
      case Participation::zero_many: return {0, unbounded};
      case Participation::zero_excl: return {0, 1};
      case Participation::one_excl: return {1, 1};
      }
      return {};
    }

    struct Member {
      std::string name;
      ConstraintTuple tuple;
    };

    struct Expect {
      Occurs occurs;
      bool in_choice = false;
    };

    std::vector<Expect>
    expect_list(const std::vector<Member>& list) {
      std::vector<Expect> out(list.size());
      std::size_t i = 0;
      while (i < list.size()) {
        std::size_t j = i + 1;
        if (is_exclusive(list[i].tuple.p))
          while (j < list.size() && list[j].tuple.p == list[i].tuple.p) ++j;
        for (std::size_t k = i; k < j; ++k)
          out[k] = {table_occurs(list[k].tuple.p), j - i >= 2};
        i = j;
      }
      return out;
    }

    struct Item {
      const xsd::Element* element;
      const xsd::Choice* choice;
    };

    bool
    names(const xsd::Element& e, const std::string& x) {
      return e.ref ? *e.ref == x : e.name == x;
    }

    const xsd::Group*
    content_group(const ComplexType& t) {
      if (auto* g = std::get_if<xsd::Group>(&t.content)) return g;
      if (auto* x = std::get_if<xsd::Extension>(&t.content))
        if (x->added) return &*x->added;
      return nullptr;
    }

    void
    collect_items(const std::vector<xsd::Particle>& ps, const xsd::Choice* choice,
                  std::vector<Item>& items, std::vector<const xsd::Choice*>& choices) {
      for (const auto& p : ps) {
        if (auto* e = std::get_if<xsd::Element>(&p.node)) {
          items.push_back({e, choice});
        } else if (auto* c = std::get_if<xsd::Compositor>(&p.node)) {
          collect_items(c->children, choice, items, choices);
        } else {
          const auto& ch = std::get<xsd::Choice>(p.node);
          choices.push_back(&ch);
          collect_items(ch.children, &ch, items, choices);
        }
      }
    }

    struct Content {
      std::vector<Item> items;
      std::vector<const xsd::Choice*> choices;
    };

    Content
    content_of(const ComplexType& t) {
      Content c;
      if (auto* g = content_group(t)) {
        if (auto* ch = std::get_if<xsd::Choice>(g)) {
          c.choices.push_back(ch);
          collect_items(ch->children, ch, c.items, c.choices);
        } else {
          collect_items(xsd::children_of(*g), nullptr, c.items, c.choices);
        }
      }
      return c;
    }

    const Item*
    find_item(const Content& c, const std::string& name) {
      for (const auto& i : c.items)
        if (names(*i.element, name)) return &i;
      return nullptr;
    }

    std::string
    describe(const xsd::Element& e) {
      std::string s = e.ref ? "xs:element ref=" + *e.ref : "xs:element " + e.name;
      if (e.type_name) s += " type=" + *e.type_name;
      if (!e.occurs.is_default()) s += " occurs=" + xsd::to_string(e.occurs);
      return s;
    }

    class Checker {
    public:
      Checker(const SchemaGraph& s, const xsd::Document& d) : s_(s), d_(d) {
        for (const auto& t : d.types) walk(t);
        for (const auto& e : d.elements) walk(e);
        compute_nesting();
      }

      CorrespondenceReport
      run() {
        roots();
        for (std::size_t i = 0; i < s_.csgs.size(); ++i) csg(i);
        for (const auto& a : s_.associations) association(a);
        for (const auto& c : s_.connectors) connector(c);
        for (const auto& l : s_.links) link(l);
        for (const auto& r : s_.references) reference(r);
        CorrespondenceReport report;
        report.ok = std::all_of(rows_.begin(), rows_.end(), [](const CorrespondenceRow& r) {
          return r.status == RowStatus::pass;
        });
        report.rows = std::move(rows_);
        return report;
      }

    private:
      void
      walk(const xsd::Element& e) {
        if (!e.ref) decls_[e.name].push_back(&e);
        if (e.complex_type) walk(*e.complex_type);
      }

      void
      walk(const ComplexType& t) {
        if (auto* g = content_group(t)) walk(xsd::children_of(*g));
      }

      void
      walk(const std::vector<xsd::Particle>& ps) {
        for (const auto& p : ps) {
          if (auto* e = std::get_if<xsd::Element>(&p.node))
            walk(*e);
          else if (auto* c = std::get_if<xsd::Compositor>(&p.node))
            walk(c->children);
          else
            walk(std::get<xsd::Choice>(p.node).children);
        }
      }

      std::vector<const ComplexType*>
      instances(std::size_t csg) const {
        const std::string& name = s_.csgs[csg].name;
        if (auto* t = d_.find_type(name)) return {t};
        std::vector<const ComplexType*> out;
        auto it = decls_.find(name);
        if (it == decls_.end()) return out;
        for (const auto* e : it->second)
          if (e->complex_type) out.push_back(&*e->complex_type);
        return out;
      }

      // The complex type an element resolves to, inline or named.
      const ComplexType*
      type_of(const xsd::Element& e) const {
        if (e.complex_type) return &*e.complex_type;
        if (e.type_name) return d_.find_type(*e.type_name);
        if (e.ref)
          if (auto* g = d_.find_element(*e.ref)) return type_of(*g);
        return nullptr;
      }

      void
      add(std::string kind, std::string construct, std::string expected,
          std::optional<std::string> found, bool pass, std::string note = {}) {
        rows_.push_back({std::move(kind), std::move(construct), std::move(expected),
                         std::move(found), pass ? RowStatus::pass : RowStatus::fail,
                         std::move(note)});
      }

      // Applies `check` to every instance of `host`; the row fails when there
      // is no instance or any instance fails. `check` returns what it found,
      // and sets `ok`.
      void
      per_instance(std::size_t host, const std::string& kind, const std::string& construct,
                   const std::string& expected,
                   const std::function<std::optional<std::string>(const ComplexType&, bool&)>& check,
                   const std::string& note = {}) {
        const auto inst = instances(host);
        if (inst.empty()) {
          add(kind, construct, expected, std::nullopt, false,
              "no complexType for CSG '" + s_.csgs[host].name + "'");
          return;
        }
        std::optional<std::string> found;
        for (const auto* t : inst) {
          bool ok = false;
          auto f = check(*t, ok);
          if (!ok) {
            add(kind, construct, expected, f, false, note);
            return;
          }
          if (!found) found = f;
        }
        add(kind, construct, expected, found, true, note);
      }

      void
      compute_nesting() {
        has_parent_.assign(s_.csgs.size(), false);
        for (const auto& e : s_.containments)
          if (e.child.kind == NodeKind::csg && !e.is_reference) has_parent_[e.child.index] = true;
        for (const auto& a : s_.associations) has_parent_[s_.association_child(a)] = true;
        for (const auto& c : s_.connectors) {
          const auto layout = s_.connector_layout(c);
          if (layout.context) has_parent_[layout.context->csg] = true;
          for (const auto& m : layout.participants) has_parent_[m.csg] = true;
        }
      }

      void
      roots() {
        if (s_.csgs.empty()) return;
        for (auto r : s_.roots_of()) {
          if (has_parent_[r]) continue;
          const std::string& n = s_.csgs[r].name;
          const auto* g = d_.find_element(n);
          add("root_element", "root CSG " + n, "global xs:element " + n,
              g ? std::optional<std::string>(describe(*g)) : std::nullopt, g != nullptr);
        }
      }

      // Every particle the CSG's content model must hold, in order, as
      // (name, tuple) lists whose exclusive runs are folded independently.
      struct Lists {
        std::vector<std::vector<Member>> lists;
        bool ordered = false;
        std::size_t extra = 0; // reference sites
      };

      Lists
      entry_lists(std::size_t c) const {
        Lists out;
        std::vector<Member> own;
        for (const auto* m : s_.members_of(c)) {
          out.ordered = out.ordered || m->constraint.ordered;
          if (m->child.kind == NodeKind::annotation && !m->is_reference && !m->constraint.ordered)
            continue;
          own.push_back({s_.name_of(m->child), m->constraint});
        }
        out.lists.push_back(std::move(own));
        for (const auto& k : s_.connectors) {
          const auto layout = s_.connector_layout(k);
          const bool rooted = layout.root == c;
          const bool hosted = layout.context && layout.context->csg == c;
          if (rooted && layout.context) {
            out.ordered = out.ordered || layout.context->constraint.ordered;
            out.lists.push_back({{s_.csgs[layout.context->csg].name, layout.context->constraint}});
          }
          if ((rooted && !layout.context) || hosted) {
            std::vector<Member> ps;
            for (const auto& m : layout.participants) {
              out.ordered = out.ordered || m.constraint.ordered;
              ps.push_back({s_.csgs[m.csg].name, m.constraint});
            }
            out.lists.push_back(std::move(ps));
          }
        }
        std::vector<Member> assoc;
        for (const auto& a : s_.associations) {
          if (s_.association_parent(a) != c) continue;
          out.ordered = out.ordered || a.constraint.ordered;
          assoc.push_back({s_.csgs[s_.association_child(a)].name, a.constraint});
        }
        out.lists.push_back(std::move(assoc));
        out.extra = ref_sites(c).size();
        return out;
      }

      std::vector<NodeRef>
      ref_sites(std::size_t c) const {
        std::vector<NodeRef> out;
        for (const auto& r : s_.references) {
          if (r.source == NodeRef{NodeKind::csg, c}) {
            out.push_back(r.target);
          } else if (r.source.kind == NodeKind::esg) {
            for (const auto* m : s_.members_of(c))
              if (m->child == r.source && !m->is_reference) {
                out.push_back(r.target);
                break;
              }
          }
        }
        return out;
      }

      // Occurs and choice rows for one member list hosted by `host`.
      void
      list_rows(std::size_t host, const std::vector<Member>& list, const std::string& kind,
                const std::string& where) {
        const auto expect = expect_list(list);
        for (std::size_t i = 0; i < list.size(); ++i) {
          const auto& m = list[i];
          const auto& ex = expect[i];
          const std::string expected =
              "occurs " + xsd::to_string(ex.occurs) + (ex.in_choice ? " inside xs:choice" : "");
          per_instance(host, kind, to_string(m.tuple) + " " + m.name + " in " + where, expected,
                       [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                         const auto c = content_of(t);
                         const auto* it = find_item(c, m.name);
                         if (!it) return std::nullopt;
                         ok = it->element->occurs == ex.occurs &&
                              (it->choice != nullptr) == ex.in_choice;
                         return "occurs " + xsd::to_string(it->element->occurs) +
                                (it->choice ? " inside xs:choice" : "");
                       });
        }
        auto runs = exclusive_runs(list, [](const Member& m) { return m.tuple; });
        for (const auto& run : runs) {
          std::multiset<std::string> want;
          std::string label;
          for (const auto& m : run) {
            want.insert(m.name);
            label += (label.empty() ? "" : ", ") + m.name;
          }
          per_instance(host, "exclusive_choice",
                       std::string(to_string(run.front().tuple.p)) + " group {" + label + "} in " +
                           where,
                       "xs:choice over {" + label + "}",
                       [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                         const auto c = content_of(t);
                         for (const auto* ch : c.choices) {
                           std::multiset<std::string> got;
                           for (const auto& p : ch->children)
                             if (auto* e = std::get_if<xsd::Element>(&p.node))
                               got.insert(e->ref ? *e->ref : e->name);
                           if (got == want && ch->occurs.is_default() &&
                               ch->children.size() == want.size()) {
                             ok = true;
                             return "xs:choice {" + label + "}";
                           }
                         }
                         return std::nullopt;
                       });
        }
      }

      void
      csg(std::size_t c) {
        const std::string& name = s_.csgs[c].name;
        const std::string where = "CSG " + name;
        const auto inst = instances(c);
        // Every declaration of the CSG must carry its content, not just one.
        std::size_t bare = 0;
        if (auto it = decls_.find(name); it != decls_.end())
          for (const auto* e : it->second)
            bare += !e->complex_type && !(e->type_name && d_.find_type(*e->type_name));
        std::optional<std::string> found;
        if (!inst.empty()) found = std::to_string(inst.size()) + " instance(s)";
        if (bare > 0) found = std::to_string(bare) + " declaration(s) without content";
        add("csg_complex_type", "CSG " + name, "xs:complexType", found, !inst.empty() && bare == 0);

        std::vector<Member> own;
        for (const auto* m : s_.members_of(c)) {
          const std::string& child = s_.name_of(m->child);
          if (m->is_reference) {
            per_instance(c, "reference_ref", "member ref " + child + " in " + where,
                         "xs:element ref=" + child + " with a global declaration",
                         [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                           const auto cc = content_of(t);
                           for (const auto& i : cc.items)
                             if (i.element->ref && *i.element->ref == child) {
                               ok = d_.find_element(child) != nullptr;
                               return describe(*i.element);
                             }
                           return std::nullopt;
                         });
          } else if (m->child.kind == NodeKind::esg) {
            per_instance(c, "esg_element", "ESG " + child + " in " + where,
                         "xs:element " + child,
                         [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                           const auto cc = content_of(t);
                           for (const auto& i : cc.items)
                             if (!i.element->ref && i.element->name == child) {
                               ok = i.element->is_leaf() &&
                                    (m->is_determinant ||
                                     i.element->type_name != std::string(xsd::id_type));
                               return describe(*i.element);
                             }
                           return std::nullopt;
                         });
            if (m->is_determinant)
              per_instance(c, "determinant_id", "determinant ESG " + child + " in " + where,
                           "xs:element " + child + " type=xs:ID",
                           [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                             const auto cc = content_of(t);
                             for (const auto& i : cc.items)
                               if (!i.element->ref && i.element->name == child) {
                                 ok = i.element->type_name == std::string(xsd::id_type);
                                 return describe(*i.element);
                               }
                             return std::nullopt;
                           });
          } else if (m->child.kind == NodeKind::csg) {
            per_instance(c, "csg_nested", "CSG " + child + " in " + where,
                         "xs:element " + child + " (declaration or ref)",
                         [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                           const auto cc = content_of(t);
                           if (auto* i = find_item(cc, child)) {
                             ok = true;
                             return describe(*i->element);
                           }
                           return std::nullopt;
                         });
          } else if (!m->constraint.ordered) {
            per_instance(c, "annotation_mixed", "annotation " + child + " in " + where,
                         "mixed=\"true\"",
                         [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                           ok = t.mixed;
                           return t.mixed ? "mixed=\"true\"" : "mixed=\"false\"";
                         });
          } else {
            per_instance(c, "annotation_text", "annotation " + child + " in " + where,
                         "text-only xs:element " + child,
                         [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                           const auto cc = content_of(t);
                           for (const auto& i : cc.items)
                             if (!i.element->ref && i.element->name == child) {
                               ok = i.element->is_leaf();
                               return describe(*i.element);
                             }
                           return std::nullopt;
                         });
          }
          if (m->child.kind == NodeKind::annotation && !m->is_reference && !m->constraint.ordered)
            continue;
          own.push_back({child, m->constraint});
        }
        list_rows(c, own, "containment_occurs", where);

        std::vector<Member> assoc;
        for (const auto& a : s_.associations)
          if (s_.association_parent(a) == c)
            assoc.push_back({s_.csgs[s_.association_child(a)].name, a.constraint});
        list_rows(c, assoc, "association_occurs", "associations of " + where);

        compositor_rows(c);
      }

      void
      compositor_rows(std::size_t c) {
        const std::string& name = s_.csgs[c].name;
        const auto lists = entry_lists(c);
        const auto& group = s_.csgs[c].group_occurs;
        bool ordered = lists.ordered || (group && group->ordered);
        std::size_t count = lists.extra;
        bool repeats = false;
        bool choice = false;
        for (const auto& l : lists.lists) {
          count += l.size();
          const auto ex = expect_list(l);
          for (const auto& e : ex) {
            repeats = repeats || e.occurs.max > 1;
            choice = choice || e.in_choice;
          }
        }
        const Occurs group_occ = group ? table_occurs(group->p) : Occurs{};
        if (group_occ.max > 1) repeats = true;

        if (count == 0) {
          per_instance(c, "ordering_compositor", "CSG " + name + " ordering", "no model group",
                       [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                         ok = content_group(t) == nullptr;
                         return ok ? "empty content" : "model group";
                       });
          return;
        }

        std::string note;
        xsd::CompositorKind want = xsd::CompositorKind::sequence;
        if (!ordered) {
          if (!repeats && !choice)
            want = xsd::CompositorKind::all;
          else
            note = "unordered content repeats or holds a choice; xs:sequence is the fallback";
        }
        const std::string expected = "xs:" + std::string(xsd::to_string(want));
        per_instance(
            c, "ordering_compositor",
            "CSG " + name + " ordering (theta=" + (ordered ? "1" : "0") + ")", expected,
            [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
              const auto* g = content_group(t);
              if (!g) return std::nullopt;
              const auto* comp = std::get_if<xsd::Compositor>(g);
              if (!comp) return "xs:choice";
              ok = comp->kind == want;
              return "xs:" + std::string(xsd::to_string(comp->kind));
            },
            note);

        if (group) {
          per_instance(c, "group_occurs", "group " + to_string(*group) + " of CSG " + name,
                       "model group occurs " + xsd::to_string(group_occ),
                       [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                         const auto* g = content_group(t);
                         if (!g) return std::nullopt;
                         ok = xsd::occurs_of(*g) == group_occ;
                         return "occurs " + xsd::to_string(xsd::occurs_of(*g));
                       });
        }
      }

      // Whether an element named `name` is reachable below `t`.
      bool
      subtree_has(const ComplexType& t, const std::string& name, std::set<const ComplexType*>& seen,
                  std::string& path) const {
        if (!seen.insert(&t).second) return false;
        const auto c = content_of(t);
        for (const auto& i : c.items) {
          if (names(*i.element, name)) {
            path = describe(*i.element);
            return true;
          }
        }
        for (const auto& i : c.items) {
          if (const auto* sub = type_of(*i.element)) {
            if (subtree_has(*sub, name, seen, path)) {
              path = (i.element->ref ? *i.element->ref : i.element->name) + "/" + path;
              return true;
            }
          }
        }
        return false;
      }

      void
      association(const AssociationEdge& a) {
        const auto parent = s_.association_parent(a);
        const auto child = s_.association_child(a);
        const std::string& pn = s_.csgs[parent].name;
        const std::string& cn = s_.csgs[child].name;
        per_instance(parent, "association_nesting",
                     "association " + s_.csgs[a.left].name + " -- " + s_.csgs[a.right].name,
                     "xs:element " + cn + " nested inside " + pn,
                     [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                       std::set<const ComplexType*> seen;
                       std::string path;
                       ok = subtree_has(t, cn, seen, path);
                       if (!ok) return std::nullopt;
                       return pn + "/" + path;
                     });
      }

      void
      connector(const AssociationConnector& k) {
        const auto layout = s_.connector_layout(k);
        const std::string& rn = s_.csgs[layout.root].name;
        std::size_t host = layout.root;
        if (layout.context) {
          const std::string& cn = s_.csgs[layout.context->csg].name;
          per_instance(layout.root, "connector_context",
                       "context " + cn + " of connector " + k.name,
                       "xs:element " + cn + " inside " + rn,
                       [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                         const auto c = content_of(t);
                         if (auto* i = find_item(c, cn)) {
                           ok = true;
                           return describe(*i->element);
                         }
                         return std::nullopt;
                       });
          list_rows(layout.root, {{cn, layout.context->constraint}}, "connector_occurs",
                    "connector " + k.name);
          host = layout.context->csg;
        }
        const std::string& hn = s_.csgs[host].name;
        std::vector<Member> ps;
        for (const auto& m : layout.participants) {
          const std::string& mn = s_.csgs[m.csg].name;
          ps.push_back({mn, m.constraint});
          per_instance(host, "connector_member", "member " + mn + " of connector " + k.name,
                       "xs:element " + mn + " inside " + hn,
                       [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                         const auto c = content_of(t);
                         if (auto* i = find_item(c, mn)) {
                           ok = true;
                           return describe(*i->element);
                         }
                         return std::nullopt;
                       });
        }
        list_rows(host, ps, "connector_occurs", "connector " + k.name);
      }

      void
      link(const LinkEdge& l) {
        const std::string& bn = s_.csgs[l.base].name;
        const std::string& dn = s_.csgs[l.derived].name;
        const bool named = d_.find_type(bn) != nullptr;
        per_instance(l.derived, "link_extension", "link " + bn + " -> " + dn,
                     "xs:extension base=" + bn + " of a named xs:complexType",
                     [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                       const auto* x = std::get_if<xsd::Extension>(&t.content);
                       if (!x) return std::nullopt;
                       ok = x->base == bn && named;
                       return "xs:extension base=" + x->base;
                     });
      }

      void
      reference(const ReferenceEdge& r) {
        const std::string& tn = s_.name_of(r.target);
        std::vector<std::size_t> sites;
        if (r.source.kind == NodeKind::csg) {
          sites.push_back(r.source.index);
        } else {
          for (std::size_t c = 0; c < s_.csgs.size(); ++c)
            for (const auto* m : s_.members_of(c))
              if (m->child == r.source && !m->is_reference) {
                sites.push_back(c);
                break;
              }
        }
        const std::string construct = "reference " + s_.name_of(r.source) + " -> " + tn;
        const std::string expected = "xs:element ref=" + tn + " with a global declaration";
        if (!d_.find_element(tn)) {
          add("reference_ref", construct, expected, std::nullopt, false,
              "no global element '" + tn + "'");
          return;
        }
        if (sites.empty()) {
          add("reference_ref", construct, expected, "global " + tn, true,
              "source has no containing CSG");
          return;
        }
        const auto before = rows_.size();
        for (auto site : sites) {
          per_instance(site, "reference_ref", construct, expected,
                       [&](const ComplexType& t, bool& ok) -> std::optional<std::string> {
                         const auto c = content_of(t);
                         for (const auto& i : c.items)
                           if (i.element->ref && *i.element->ref == tn) {
                             ok = true;
                             return "in " + s_.csgs[site].name + ": " + describe(*i.element);
                           }
                         return std::nullopt;
                       });
        }
        // One row per reference edge.
        auto first_fail = std::find_if(rows_.begin() + static_cast<std::ptrdiff_t>(before),
                                       rows_.end(), [](const CorrespondenceRow& row) {
                                         return row.status == RowStatus::fail;
                                       });
        CorrespondenceRow keep =
            first_fail != rows_.end() ? *first_fail : rows_[before];
        rows_.resize(before);
        rows_.push_back(std::move(keep));
      }

      const SchemaGraph& s_;
      const xsd::Document& d_;
      std::map<std::string, std::vector<const xsd::Element*>> decls_;
      std::vector<bool> has_parent_;
      std::vector<CorrespondenceRow> rows_;
    };

  } // namespace

  CorrespondenceReport
  check_correspondence(const SchemaGraph& schema, const xsd::Document& doc) {
    return Checker(schema, doc).run();
  }

  CorrespondenceReport
  check_correspondence(const SchemaGraph& schema, std::string_view xsd_text) {
    auto r = xsd::read(xsd_text);
    if (!r.document) {
      CorrespondenceReport report;
      report.ok = false;
      report.rows.push_back({"xsd_document", "XSD document", "readable XSD subset", std::nullopt,
                             RowStatus::fail,
                             r.diagnostics.empty() ? "" : render(r.diagnostics.front())});
      return report;
    }
    return check_correspondence(schema, *r.document);
  }

  // Mutations.

  std::string_view
  to_string(MutationKind k) {
    switch (k) {
    case MutationKind::delete_element: return "delete_element";
    case MutationKind::delete_complex_type: return "delete_complex_type";
    case MutationKind::strip_id_type: return "strip_id_type";
    case MutationKind::swap_compositor: return "swap_compositor";
    case MutationKind::drop_choice: return "drop_choice";
    case MutationKind::strip_occurs: return "strip_occurs";
    case MutationKind::drop_extension: return "drop_extension";
    case MutationKind::drop_ref: return "drop_ref";
    }
    return "?";
  }

  std::vector<std::string>
  expected_row_kinds(MutationKind k) {
    switch (k) {
    case MutationKind::delete_element: return {"esg_element", "annotation_text"};
    case MutationKind::delete_complex_type: return {"csg_complex_type"};
    case MutationKind::strip_id_type: return {"determinant_id"};
    case MutationKind::swap_compositor: return {"ordering_compositor"};
    case MutationKind::drop_choice: return {"exclusive_choice"};
    case MutationKind::strip_occurs:
      return {"containment_occurs", "association_occurs", "connector_occurs", "group_occurs"};
    case MutationKind::drop_extension: return {"link_extension"};
    // A ref also nests a CSG met a second time.
    case MutationKind::drop_ref:
      return {"reference_ref",      "csg_nested",         "containment_occurs",
              "association_nesting", "association_occurs", "connector_context",
              "connector_member",   "connector_occurs",   "exclusive_choice"};
    }
    return {};
  }

  namespace {

    // Visits nodes in document order until `f` returns true.
    class Mutator {
    public:
      explicit Mutator(MutationKind k) : k_(k) {}

      bool
      run(xsd::Document& d) {
        for (auto& t : d.types)
          if (type(t)) return true;
        for (auto& e : d.elements)
          if (element(e, true)) return true;
        return false;
      }

    private:
      bool
      element(xsd::Element& e, bool global) {
        switch (k_) {
        case MutationKind::delete_complex_type:
          if (e.complex_type && !e.ref) {
            e.complex_type.reset();
            return true;
          }
          break;
        case MutationKind::strip_id_type:
          if (e.type_name == std::string(xsd::id_type)) {
            e.type_name.reset();
            return true;
          }
          break;
        case MutationKind::strip_occurs:
          if (!global && !e.occurs.is_default()) {
            e.occurs = {};
            return true;
          }
          break;
        default: break;
        }
        return e.complex_type && type(*e.complex_type);
      }

      bool
      type(xsd::ComplexType& t) {
        if (auto* x = std::get_if<xsd::Extension>(&t.content)) {
          if (k_ == MutationKind::drop_extension) {
            if (x->added) {
              xsd::Group g = std::move(*x->added);
              t.content = std::move(g);
            } else {
              t.content = std::monostate{};
            }
            return true;
          }
          return x->added && group(*x->added);
        }
        if (auto* g = std::get_if<xsd::Group>(&t.content)) return group(*g);
        return false;
      }

      bool
      group(xsd::Group& g) {
        if (auto* c = std::get_if<xsd::Compositor>(&g)) {
          if (k_ == MutationKind::swap_compositor) {
            c->kind = c->kind == xsd::CompositorKind::sequence ? xsd::CompositorKind::all
                                                               : xsd::CompositorKind::sequence;
            return true;
          }
          if (k_ == MutationKind::strip_occurs && !c->occurs.is_default()) {
            c->occurs = {};
            return true;
          }
        }
        return particles(xsd::children_of(g));
      }

      bool
      particles(std::vector<xsd::Particle>& ps) {
        for (std::size_t i = 0; i < ps.size(); ++i) {
          auto& p = ps[i];
          if (auto* e = std::get_if<xsd::Element>(&p.node)) {
            const bool leaf = !e->ref && !e->complex_type;
            if ((k_ == MutationKind::delete_element && leaf) ||
                (k_ == MutationKind::drop_ref && e->ref)) {
              ps.erase(ps.begin() + static_cast<std::ptrdiff_t>(i));
              return true;
            }
            if (element(*e, false)) return true;
          } else if (auto* ch = std::get_if<xsd::Choice>(&p.node)) {
            if (k_ == MutationKind::drop_choice) {
              auto children = std::move(ch->children);
              ps.erase(ps.begin() + static_cast<std::ptrdiff_t>(i));
              ps.insert(ps.begin() + static_cast<std::ptrdiff_t>(i),
                        std::make_move_iterator(children.begin()),
                        std::make_move_iterator(children.end()));
              return true;
            }
            xsd::Group g = std::move(*ch);
            const bool done = group(g);
            p.node = std::move(std::get<xsd::Choice>(g));
            if (done) return true;
          } else {
            xsd::Group g = std::move(std::get<xsd::Compositor>(p.node));
            const bool done = group(g);
            p.node = std::move(std::get<xsd::Compositor>(g));
            if (done) return true;
          }
        }
        return false;
      }

      MutationKind k_;
    };

  } // namespace

  std::optional<xsd::Document>
  apply_mutation(const xsd::Document& doc, MutationKind k) {
    xsd::Document copy = doc;
    if (!Mutator(k).run(copy)) return std::nullopt;
    return copy;
  }

  std::vector<MutationOutcome>
  mutation_suite(const SchemaGraph& schema, const xsd::Document& doc) {
    std::vector<MutationOutcome> out;
    for (auto k : all_mutations) {
      MutationOutcome o;
      o.kind = k;
      auto mutated = apply_mutation(doc, k);
      if (mutated) {
        o.applied = true;
        const auto report = check_correspondence(schema, *mutated);
        const auto kinds = expected_row_kinds(k);
        for (const auto& row : report.rows) {
          if (row.status == RowStatus::fail &&
              std::find(kinds.begin(), kinds.end(), row.kind) != kinds.end()) {
            o.detected = true;
            o.witness = row;
            break;
          }
        }
      }
      out.push_back(std::move(o));
    }
    return out;
  }

} // namespace goossdm
