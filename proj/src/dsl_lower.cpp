#include <goossdm/dsl.hpp>

#include <map>

namespace goossdm::dsl {

  namespace {

    struct Binding {
      NodeKind kind;
      std::size_t index;
      bool connector = false;
    };

    class Lowering {
    public:
      explicit Lowering(std::vector<Diagnostic>& diags) : diags_(diags) {}

      std::optional<SchemaGraph>
      run(const SyntaxTree& tree) {
        out_.name = tree.name.text;
        declare(tree);
        for (const auto& item : tree.items) {
          if (auto* c = std::get_if<CsgDecl>(&item)) lower_members(*c);
        }
        for (const auto& item : tree.items) {
          std::visit([&](const auto& decl) { lower_edge(decl); }, item);
        }
        if (has_errors(diags_)) return std::nullopt;
        return std::move(out_);
      }

    private:
      void
      error(std::string code, std::string msg, const SourceSpan& span) {
        diags_.push_back(make_error(std::move(code), std::move(msg), span));
      }

      void
      bind(const Ident& id, Binding b) {
        if (!names_.emplace(id.text, b).second) {
          error("E104", "duplicate name '" + id.text + "'", id.span);
        }
      }

      void
      declare(const SyntaxTree& tree) {
        for (const auto& item : tree.items) {
          if (auto* e = std::get_if<EsgDecl>(&item)) {
            bind(e->name, {NodeKind::esg, out_.esgs.size()});
            out_.esgs.push_back({e->name.text, e->span});
          } else if (auto* a = std::get_if<AnnotationDecl>(&item)) {
            bind(a->name, {NodeKind::annotation, out_.annotations.size()});
            out_.annotations.push_back({a->name.text, a->span});
          } else if (auto* c = std::get_if<CsgDecl>(&item)) {
            bind(c->name, {NodeKind::csg, out_.csgs.size()});
            if (c->layer < 1)
              error("E107", "CSG '" + c->name.text +
                                "' must declare a layer of at least 1",
                    c->layer_span);
            CsgNode node;
            node.name = c->name.text;
            node.layer = static_cast<int>(c->layer);
            if (c->group) node.group_occurs = c->group->value;
            node.span = c->span;
            out_.csgs.push_back(std::move(node));
          } else if (auto* k = std::get_if<ConnectorDecl>(&item)) {
            bind(k->name, {NodeKind::csg, 0, true});
          }
        }
      }

      std::optional<Binding>
      resolve(const Ident& id) {
        auto it = names_.find(id.text);
        if (it == names_.end()) {
          error("E105", "unresolved name '" + id.text + "'", id.span);
          return std::nullopt;
        }
        return it->second;
      }

      std::optional<std::size_t>
      resolve_csg(const Ident& id, const char* role) {
        auto b = resolve(id);
        if (!b) return std::nullopt;
        if (b->connector || b->kind != NodeKind::csg) {
          error("E108", std::string(role) + " '" + id.text + "' is not a CSG",
                id.span);
          return std::nullopt;
        }
        return b->index;
      }

      void
      lower_members(const CsgDecl& c) {
        const std::size_t parent = *out_.find_csg(c.name.text);
        std::size_t position = 0;
        for (const auto& m : c.members) {
          auto b = resolve(m.name);
          if (!b) continue;
          if (b->connector) {
            error("E108", "connector '" + m.name.text + "' cannot be contained",
                  m.name.span);
            continue;
          }
          if (m.reference && b->kind == NodeKind::annotation) {
            error("E106", "reference to annotation '" + m.name.text +
                              "'; only ESGs and CSGs can be referenced",
                  m.name.span);
            continue;
          }
          ContainmentEdge e;
          e.child = {b->kind, b->index};
          e.parent = parent;
          e.constraint = materialize(m.tuple);
          e.is_determinant = m.determinant;
          e.is_reference = m.reference;
          e.position = position++;
          e.span = m.span;
          out_.containments.push_back(e);
        }
      }

      void
      lower_edge(const EsgDecl&) {}
      void
      lower_edge(const AnnotationDecl&) {}
      void
      lower_edge(const CsgDecl&) {}

      void
      lower_edge(const AssociateDecl& a) {
        auto l = resolve_csg(a.left, "association endpoint");
        auto r = resolve_csg(a.right, "association endpoint");
        if (!l || !r) return;
        out_.associations.push_back({*l, *r, materialize(a.tuple), a.span});
      }

      void
      lower_edge(const ConnectorDecl& k) {
        AssociationConnector conn;
        conn.name = k.name.text;
        conn.span = k.span;
        bool ok = true;
        for (const auto& e : k.entries) {
          auto c = resolve_csg(e.name, "connector participant");
          if (!c) {
            ok = false;
            continue;
          }
          ConnectorMember m{*c, materialize(e.tuple), e.span};
          if (e.role == ConnectorRole::member) {
            conn.members.push_back(m);
          } else if (conn.context) {
            error("E104", "connector '" + k.name.text +
                              "' declares more than one context",
                  e.span);
            ok = false;
          } else {
            conn.context = m;
          }
        }
        if (ok) out_.connectors.push_back(std::move(conn));
      }

      void
      lower_edge(const LinkDecl& l) {
        auto b = resolve_csg(l.base, "link base");
        auto d = resolve_csg(l.derived, "link target");
        if (!b || !d) return;
        out_.links.push_back({*b, *d, l.span});
      }

      void
      lower_edge(const RefDecl& r) {
        auto s = resolve(r.source);
        auto t = resolve(r.target);
        if (!s || !t) return;
        auto kind_name = [](const Binding& b) -> std::string {
          return b.connector ? "connector" : std::string(to_string(b.kind));
        };
        const bool referable_s = !s->connector && s->kind != NodeKind::annotation;
        const bool referable_t = !t->connector && t->kind != NodeKind::annotation;
        if (!referable_s || !referable_t || s->kind != t->kind) {
          error("E106",
                "reference kind mismatch: " + kind_name(*s) + " '" +
                    r.source.text + "' -> " + kind_name(*t) + " '" +
                    r.target.text + "'; references join ESG to ESG or CSG to CSG",
                r.span);
          return;
        }
        out_.references.push_back(
            {{s->kind, s->index}, {t->kind, t->index}, r.span});
      }

      std::vector<Diagnostic>& diags_;
      std::map<std::string, Binding, std::less<>> names_;
      SchemaGraph out_;
    };

  } // namespace

  LowerResult
  lower(const SyntaxTree& tree) {
    LowerResult result;
    Lowering lowering(result.diagnostics);
    result.schema = lowering.run(tree);
    return result;
  }

  LowerResult
  compile_source(std::string_view source, std::string file) {
    auto parsed = parse(source, std::move(file));
    if (!parsed.ok()) return {std::nullopt, std::move(parsed.diagnostics)};
    auto lowered = lower(parsed.tree);
    parsed.diagnostics.insert(parsed.diagnostics.end(),
                              lowered.diagnostics.begin(),
                              lowered.diagnostics.end());
    return {std::move(lowered.schema), std::move(parsed.diagnostics)};
  }

} // namespace goossdm::dsl
