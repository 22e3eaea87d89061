#include <goossdm/transformer.hpp>
#include <goossdm/validator.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace goossdm {

  OccursOrChoice
  map_participation(const ConstraintTuple& c) {
    switch (c.p) {
    case Participation::one_one: return xsd::Occurs{1, 1};
    case Participation::zero_one: return xsd::Occurs{0, 1};
    case Participation::one_many: return xsd::Occurs{1, xsd::Occurs::unbounded};
    case Participation::zero_many: return xsd::Occurs{0, xsd::Occurs::unbounded};
    case Participation::zero_excl: return ChoiceMarker{false};
    case Participation::one_excl: return ChoiceMarker{true};
    }
    return xsd::Occurs{};
  }

  xsd::Occurs
  resolved_occurs(Participation p) {
    auto m = map_participation({p, false});
    if (auto* o = std::get_if<xsd::Occurs>(&m)) return *o;
    return std::get<ChoiceMarker>(m).mandatory ? xsd::Occurs{1, 1} : xsd::Occurs{0, 1};
  }

  CompositorDecision
  choose_compositor(bool theta, const std::vector<xsd::Particle>& members, xsd::Occurs group) {
    if (theta) return {xsd::CompositorKind::sequence, false};
    bool fits = group.max <= 1;
    for (const auto& p : members) {
      if (auto* e = std::get_if<xsd::Element>(&p.node))
        fits = fits && e->occurs.max <= 1;
      else
        fits = false;
    }
    if (fits) return {xsd::CompositorKind::all, false};
    return {xsd::CompositorKind::sequence, true};
  }

  namespace {

    void
    set_occurs(xsd::Particle& p, xsd::Occurs o) {
      std::visit([&](auto& x) { x.occurs = o; }, p.node);
    }

    std::string
    particle_name(const xsd::Particle& p) {
      if (auto* e = std::get_if<xsd::Element>(&p.node)) return e->ref ? *e->ref : e->name;
      return "group";
    }

  } // namespace

  ChoiceResult
  build_choice(std::vector<ExclusiveMember> group) {
    ChoiceResult result;
    for (const auto& m : group) {
      if (!is_exclusive(m.p) || m.p != group.front().p) {
        result.diagnostics.push_back(make_error(
            "E502", "exclusive group mixes " + std::string(to_string(group.front().p)) +
                        " and " + std::string(to_string(m.p)) + " at '" +
                        particle_name(m.particle) + "'"));
        return result;
      }
    }
    xsd::Choice choice;
    for (auto& m : group) {
      set_occurs(m.particle, resolved_occurs(m.p));
      choice.children.push_back(std::move(m.particle));
    }
    result.choice = std::move(choice);
    return result;
  }

  std::string_view
  to_string(GlobalRole r) {
    switch (r) {
    case GlobalRole::root: return "root";
    case GlobalRole::reference_target: return "reference_target";
    case GlobalRole::promoted: return "promoted";
    case GlobalRole::unreachable: return "unreachable";
    }
    return "?";
  }

  namespace {

    struct Candidate {
      PlanEntry entry;
      ConstraintTuple tuple;
      bool has_tuple = true;
    };

    class Planner {
    public:
      explicit Planner(const SchemaGraph& s) : s_(s) {
        const std::size_t n = s.csgs.size();
        nest_.resize(n);
        assoc_children_.resize(n);
        rooted_.resize(n);
        hosted_.resize(n);
        ref_sites_.resize(n);
        has_parent_.assign(n, false);
        visited_anywhere_.assign(n, false);
        warned_fallback_.assign(n, false);

        for (const auto& e : s.containments)
          if (e.child.kind == NodeKind::csg && !e.is_reference)
            add_edge(e.parent, e.child.index);
        for (std::size_t k = 0; k < s.connectors.size(); ++k) {
          const auto layout = s.connector_layout(s.connectors[k]);
          rooted_[layout.root].push_back(k);
          std::size_t host = layout.root;
          if (layout.context) {
            add_edge(layout.root, layout.context->csg);
            hosted_[layout.context->csg].push_back(k);
            host = layout.context->csg;
          }
          for (const auto& m : layout.participants) add_edge(host, m.csg);
          layouts_.push_back(layout);
        }
        for (const auto& a : s.associations) {
          const auto parent = s.association_parent(a);
          const auto child = s.association_child(a);
          assoc_children_[parent].push_back({child, a.constraint});
          add_edge(parent, child);
        }
        for (const auto& r : s.references) {
          if (r.source.kind == NodeKind::csg) {
            ref_sites_[r.source.index].push_back(r.target);
          } else if (r.source.kind == NodeKind::esg) {
            std::set<std::size_t> sites;
            for (const auto& e : s.containments)
              if (e.child == r.source && !e.is_reference) sites.insert(e.parent);
            for (auto site : sites) ref_sites_[site].push_back(r.target);
          }
        }
      }

      PlanResult
      run() {
        PlanResult result;
        if (auto cycle = find_cycle()) {
          result.diagnostics.push_back(
              make_error("E503", "association nesting forms a cycle: " + *cycle));
          return result;
        }
        NestingPlan plan;
        if (!s_.csgs.empty()) {
          for (auto r : s_.roots_of())
            if (!has_parent_[r]) add_global({NodeKind::csg, r}, GlobalRole::root);
        }
        for (const auto& e : s_.containments)
          if (e.is_reference && e.child.kind != NodeKind::annotation)
            pending_targets_.push_back(e.child);
        for (const auto& r : s_.references) pending_targets_.push_back(r.target);
        for (const auto& t : pending_targets_) add_global(t, GlobalRole::reference_target);

        for (std::size_t i = 0; i < s_.csgs.size(); ++i) {
          if (!s_.is_link_base(i)) continue;
          std::set<std::size_t> visited{i};
          visited_anywhere_[i] = true;
          named_types_.push_back(plan_csg(i, visited));
        }
        drain();

        std::vector<std::size_t> unreachable;
        for (std::size_t i = 0; i < s_.csgs.size(); ++i)
          if (!visited_anywhere_[i] && !s_.is_link_base(i)) unreachable.push_back(i);
        for (auto i : unreachable)
          diags_.push_back(make_warning(
              "W501", "CSG '" + s_.csgs[i].name + "' is unreachable from every root",
              s_.csgs[i].span));
        for (int pass = 0; pass < 2; ++pass) {
          for (auto i : unreachable) {
            if (visited_anywhere_[i] || (pass == 0 && has_parent_[i])) continue;
            add_global({NodeKind::csg, i}, GlobalRole::unreachable);
            drain();
          }
        }

        if (has_errors(diags_)) {
          result.diagnostics = std::move(diags_);
          return result;
        }
        plan.named_types = std::move(named_types_);
        plan.globals = std::move(globals_);
        result.plan = std::move(plan);
        result.diagnostics = std::move(diags_);
        return result;
      }

    private:
      struct Child {
        std::size_t csg;
        ConstraintTuple tuple;
      };

      void
      add_edge(std::size_t from, std::size_t to) {
        nest_[from].push_back(to);
        has_parent_[to] = true;
      }

      std::optional<std::string>
      find_cycle() const {
        const std::size_t n = s_.csgs.size();
        std::vector<int> state(n, 0);
        std::vector<std::size_t> stack;
        std::optional<std::string> found;
        std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
          state[u] = 1;
          stack.push_back(u);
          for (auto v : nest_[u]) {
            if (state[v] == 1) {
              auto it = std::find(stack.begin(), stack.end(), v);
              std::string text;
              for (; it != stack.end(); ++it) text += s_.csgs[*it].name + " -> ";
              found = text + s_.csgs[v].name;
              return true;
            }
            if (state[v] == 0 && dfs(v)) return true;
          }
          stack.pop_back();
          state[u] = 2;
          return false;
        };
        for (std::size_t i = 0; i < n; ++i)
          if (state[i] == 0 && dfs(i)) return found;
        return std::nullopt;
      }

      void
      add_global(NodeRef node, GlobalRole role) {
        const std::string& name = s_.name_of(node);
        if (global_names_.count(name)) return;
        global_names_.insert(name);
        PlanGlobal g;
        g.name = name;
        g.role = role;
        g.node = node;
        globals_.push_back(std::move(g));
        queue_.push_back(globals_.size() - 1);
      }

      void
      drain() {
        while (!queue_.empty()) {
          const auto gi = queue_.front();
          queue_.pop_front();
          const NodeRef node = globals_[gi].node;
          if (node.kind != NodeKind::csg) continue;
          visited_anywhere_[node.index] = true;
          if (s_.is_link_base(node.index)) {
            globals_[gi].type_name = s_.csgs[node.index].name;
            continue;
          }
          std::set<std::size_t> visited{node.index};
          auto content = plan_csg(node.index, visited);
          globals_[gi].content = std::move(content);
        }
      }

      PlanEntry
      csg_entry(std::size_t c, std::set<std::size_t>& visited) {
        PlanEntry e;
        e.name = s_.csgs[c].name;
        e.node = NodeRef{NodeKind::csg, c};
        visited_anywhere_[c] = true;
        if (s_.is_link_base(c)) {
          e.kind = EntryKind::csg;
          e.type_name = s_.csgs[c].name;
          return e;
        }
        if (visited.count(c)) {
          e.kind = EntryKind::ref;
          add_global({NodeKind::csg, c}, GlobalRole::promoted);
          return e;
        }
        visited.insert(c);
        e.kind = EntryKind::csg;
        e.content.push_back(plan_csg(c, visited));
        return e;
      }

      PlanEntry
      ref_entry(NodeRef target) {
        PlanEntry e;
        e.kind = EntryKind::ref;
        e.name = s_.name_of(target);
        e.node = target;
        return e;
      }

      // Folds consecutive same-kind exclusives into a choice and resolves
      // the occurs of everything else.
      void
      fold(std::vector<Candidate> list, std::vector<PlanEntry>& out, const std::string& where) {
        std::size_t i = 0;
        while (i < list.size()) {
          auto& c = list[i];
          if (!c.has_tuple || !is_exclusive(c.tuple.p)) {
            if (c.has_tuple) c.entry.occurs = resolved_occurs(c.tuple.p);
            out.push_back(std::move(c.entry));
            ++i;
            continue;
          }
          std::size_t j = i;
          while (j < list.size() && list[j].has_tuple && is_exclusive(list[j].tuple.p)) ++j;
          // list[i, j) is a maximal exclusive stretch.
          for (std::size_t k = i + 1; k < j; ++k) {
            if (list[k].tuple.p != list[i].tuple.p) {
              diags_.push_back(make_error(
                  "E502", "adjacent exclusive members '" + list[k - 1].entry.name + "' (" +
                              std::string(to_string(list[k - 1].tuple.p)) + ") and '" +
                              list[k].entry.name + "' (" +
                              std::string(to_string(list[k].tuple.p)) + ") in " + where +
                              " mix 0:X and 1:X"));
              break;
            }
          }
          if (j - i == 1) {
            c.entry.occurs = resolved_occurs(c.tuple.p);
            out.push_back(std::move(c.entry));
          } else {
            PlanEntry choice;
            choice.kind = EntryKind::choice;
            for (std::size_t k = i; k < j; ++k) {
              list[k].entry.occurs = resolved_occurs(list[k].tuple.p);
              choice.branches.push_back(std::move(list[k].entry));
            }
            out.push_back(std::move(choice));
          }
          i = j;
        }
      }

      std::vector<Candidate>
      participants(const ConnectorLayout& layout, std::set<std::size_t>& visited, bool& ordered) {
        std::vector<Candidate> list;
        for (const auto& m : layout.participants) {
          ordered = ordered || m.constraint.ordered;
          list.push_back({csg_entry(m.csg, visited), m.constraint});
        }
        return list;
      }

      PlanNode
      plan_csg(std::size_t c, std::set<std::size_t>& visited) {
        PlanNode node;
        node.csg = c;
        node.name = s_.csgs[c].name;
        const auto bases = s_.bases_of(c);
        if (!bases.empty()) node.base = s_.csgs[bases.front()].name;
        const std::string where = "CSG '" + node.name + "'";
        bool ordered = false;

        std::vector<Candidate> own;
        for (const auto* m : s_.members_of(c)) {
          ordered = ordered || m->constraint.ordered;
          if (m->is_reference) {
            own.push_back({ref_entry(m->child), m->constraint});
            continue;
          }
          switch (m->child.kind) {
          case NodeKind::esg: {
            PlanEntry e;
            e.name = s_.esgs[m->child.index].name;
            e.node = m->child;
            if (m->is_determinant) e.type_name = std::string(xsd::id_type);
            own.push_back({std::move(e), m->constraint});
            break;
          }
          case NodeKind::annotation:
            if (!m->constraint.ordered) {
              node.mixed = true;
            } else {
              PlanEntry e;
              e.name = s_.annotations[m->child.index].name;
              e.node = m->child;
              own.push_back({std::move(e), m->constraint});
            }
            break;
          case NodeKind::csg:
            own.push_back({csg_entry(m->child.index, visited), m->constraint});
            break;
          }
        }
        fold(std::move(own), node.entries, where);

        for (auto k : rooted_[c]) {
          const auto& layout = layouts_[k];
          if (layout.context) {
            ordered = ordered || layout.context->constraint.ordered;
            std::vector<Candidate> ctx;
            ctx.push_back({csg_entry(layout.context->csg, visited), layout.context->constraint});
            fold(std::move(ctx), node.entries, where);
          } else {
            fold(participants(layout, visited, ordered), node.entries,
                 "connector '" + s_.connectors[k].name + "'");
          }
        }
        for (auto k : hosted_[c])
          fold(participants(layouts_[k], visited, ordered), node.entries,
               "connector '" + s_.connectors[k].name + "'");

        std::vector<Candidate> assoc;
        for (const auto& ch : assoc_children_[c]) {
          ordered = ordered || ch.tuple.ordered;
          assoc.push_back({csg_entry(ch.csg, visited), ch.tuple});
        }
        fold(std::move(assoc), node.entries, "associations of " + where);

        for (const auto& t : ref_sites_[c]) {
          Candidate cand{ref_entry(t), {}, false};
          std::vector<Candidate> one;
          one.push_back(std::move(cand));
          fold(std::move(one), node.entries, where);
        }

        const auto& group = s_.csgs[c].group_occurs;
        if (group) {
          ordered = ordered || group->ordered;
          node.occurs = resolved_occurs(group->p);
        }
        if (ordered) {
          node.compositor = xsd::CompositorKind::sequence;
        } else {
          bool fits = node.occurs.max <= 1;
          for (const auto& e : node.entries)
            fits = fits && e.kind != EntryKind::choice && e.occurs.max <= 1;
          node.compositor = fits ? xsd::CompositorKind::all : xsd::CompositorKind::sequence;
          node.fallback = !fits && !node.entries.empty();
          if (node.fallback && !warned_fallback_[c]) {
            warned_fallback_[c] = true;
            diags_.push_back(make_warning(
                "W201", where + " is unordered but has repeating content; using xs:sequence",
                s_.csgs[c].span));
          }
        }
        return node;
      }

      const SchemaGraph& s_;
      std::vector<std::vector<std::size_t>> nest_;
      std::vector<std::vector<Child>> assoc_children_;
      std::vector<std::vector<std::size_t>> rooted_;
      std::vector<std::vector<std::size_t>> hosted_;
      std::vector<std::vector<NodeRef>> ref_sites_;
      std::vector<ConnectorLayout> layouts_;
      std::vector<bool> has_parent_;
      std::vector<bool> visited_anywhere_;
      std::vector<bool> warned_fallback_;
      std::vector<NodeRef> pending_targets_;
      std::vector<PlanNode> named_types_;
      std::vector<PlanGlobal> globals_;
      std::set<std::string> global_names_;
      std::deque<std::size_t> queue_;
      std::vector<Diagnostic> diags_;
    };

    xsd::ComplexType
    complex_type(const PlanNode& node);

    xsd::Particle
    particle(const PlanEntry& e) {
      if (e.kind == EntryKind::choice) {
        xsd::Choice c;
        for (const auto& b : e.branches) c.children.push_back(particle(b));
        return xsd::Particle{std::move(c)};
      }
      xsd::Element el;
      el.occurs = e.occurs;
      if (e.kind == EntryKind::ref) {
        el.ref = e.name;
        return xsd::Particle{std::move(el)};
      }
      el.name = e.name;
      el.type_name = e.type_name;
      if (!e.content.empty()) el.complex_type = complex_type(e.content.front());
      return xsd::Particle{std::move(el)};
    }

    xsd::ComplexType
    complex_type(const PlanNode& node) {
      xsd::ComplexType t;
      t.mixed = node.mixed;
      std::optional<xsd::Group> group;
      if (!node.entries.empty()) {
        xsd::Compositor c;
        c.kind = node.compositor;
        c.occurs = node.occurs;
        for (const auto& e : node.entries) c.children.push_back(particle(e));
        group = std::move(c);
      }
      if (node.base)
        t.content = xsd::Extension{*node.base, std::move(group)};
      else if (group)
        t.content = std::move(*group);
      return t;
    }

  } // namespace

  PlanResult
  plan_nesting(const SchemaGraph& schema) {
    return Planner(schema).run();
  }

  xsd::Document
  to_document(const NestingPlan& plan) {
    xsd::Document doc;
    for (const auto& n : plan.named_types) {
      auto t = complex_type(n);
      t.name = n.name;
      doc.types.push_back(std::move(t));
    }
    for (const auto& g : plan.globals) {
      xsd::Element e;
      e.name = g.name;
      e.type_name = g.type_name;
      if (g.content) e.complex_type = complex_type(*g.content);
      doc.elements.push_back(std::move(e));
    }
    return doc;
  }

  TransformResult
  transform(const SchemaGraph& schema) {
    const auto report = validate(schema);
    if (!report.ok) {
      std::string first;
      for (const auto& d : report.diagnostics)
        if (d.severity == Severity::error) {
          first = d.code + " " + d.message;
          break;
        }
      throw Error("internal-error", "transform called on an invalid schema: " + first);
    }
    TransformResult result;
    auto planned = plan_nesting(schema);
    result.diagnostics = std::move(planned.diagnostics);
    if (!planned.plan) return result;
    result.document = to_document(*planned.plan);
    result.plan = std::move(planned.plan);
    return result;
  }

} // namespace goossdm
