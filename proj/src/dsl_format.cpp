#include <goossdm/dsl.hpp>

namespace goossdm::dsl {

  namespace {

    std::string
    tuple_text(const std::optional<TupleSyntax>& t) {
      return to_string(materialize(t));
    }

    struct Printer {
      std::string out;

      void
      line(int indent, const std::string& text) {
        out.append(static_cast<std::size_t>(indent) * 2, ' ');
        out += text;
        out += '\n';
      }

      void
      operator()(const EsgDecl& d) {
        line(1, "esg " + d.name.text + ";");
      }

      void
      operator()(const AnnotationDecl& d) {
        line(1, "annotation " + d.name.text + ";");
      }

      void
      operator()(const CsgDecl& d) {
        std::string head = "csg " + d.name.text + " @layer " +
                           std::to_string(d.layer);
        if (d.group) head += " group " + to_string(d.group->value);
        if (d.members.empty()) {
          line(1, head + " {}");
          return;
        }
        line(1, head + " {");
        for (const auto& m : d.members) {
          std::string text = "contains ";
          if (m.determinant) text += "det ";
          if (m.reference) text += "ref ";
          text += m.name.text + " " + tuple_text(m.tuple) + ";";
          line(2, text);
        }
        line(1, "}");
      }

      void
      operator()(const AssociateDecl& d) {
        line(1, "associate " + d.left.text + " -- " + d.right.text + " " +
                    tuple_text(d.tuple) + ";");
      }

      void
      operator()(const ConnectorDecl& d) {
        if (d.entries.empty()) {
          line(1, "connector " + d.name.text + " {}");
          return;
        }
        line(1, "connector " + d.name.text + " {");
        for (const auto& e : d.entries) {
          line(2, std::string(e.role == ConnectorRole::member ? "member "
                                                              : "context ") +
                      e.name.text + " " + tuple_text(e.tuple) + ";");
        }
        line(1, "}");
      }

      void
      operator()(const LinkDecl& d) {
        line(1, "link " + d.base.text + " -> " + d.derived.text + ";");
      }

      void
      operator()(const RefDecl& d) {
        line(1, "ref " + d.source.text + " -> " + d.target.text + ";");
      }
    };

    Ident
    ident(std::string text) {
      return Ident{std::move(text), {}};
    }

    TupleSyntax
    tuple(const ConstraintTuple& t) {
      return TupleSyntax{t, {}};
    }

  } // namespace

  std::string
  format(const SyntaxTree& tree) {
    Printer p;
    if (tree.items.empty()) {
      p.line(0, "schema " + tree.name.text + " {}");
      return p.out;
    }
    p.line(0, "schema " + tree.name.text + " {");
    for (const auto& item : tree.items) std::visit(p, item);
    p.line(0, "}");
    return p.out;
  }

  SyntaxTree
  to_syntax_tree(const SchemaGraph& s) {
    SyntaxTree tree;
    tree.name = ident(s.name);
    for (const auto& e : s.esgs) tree.items.emplace_back(EsgDecl{ident(e.name), {}});
    for (const auto& a : s.annotations)
      tree.items.emplace_back(AnnotationDecl{ident(a.name), {}});
    for (std::size_t i = 0; i < s.csgs.size(); ++i) {
      const auto& c = s.csgs[i];
      CsgDecl d;
      d.name = ident(c.name);
      d.layer = c.layer;
      if (c.group_occurs) d.group = tuple(*c.group_occurs);
      for (const auto* m : s.members_of(i)) {
        MemberDecl md;
        md.determinant = m->is_determinant;
        md.reference = m->is_reference;
        md.name = ident(s.name_of(m->child));
        md.tuple = tuple(m->constraint);
        d.members.push_back(std::move(md));
      }
      tree.items.emplace_back(std::move(d));
    }
    for (const auto& a : s.associations) {
      tree.items.emplace_back(AssociateDecl{ident(s.csgs[a.left].name),
                                            ident(s.csgs[a.right].name),
                                            tuple(a.constraint),
                                            {}});
    }
    for (const auto& c : s.connectors) {
      ConnectorDecl d;
      d.name = ident(c.name);
      for (const auto& m : c.members)
        d.entries.push_back({ConnectorRole::member, ident(s.csgs[m.csg].name),
                             tuple(m.constraint), {}});
      if (c.context)
        d.entries.push_back({ConnectorRole::context,
                             ident(s.csgs[c.context->csg].name),
                             tuple(c.context->constraint),
                             {}});
      tree.items.emplace_back(std::move(d));
    }
    for (const auto& l : s.links)
      tree.items.emplace_back(LinkDecl{ident(s.csgs[l.base].name),
                                       ident(s.csgs[l.derived].name), {}});
    for (const auto& r : s.references)
      tree.items.emplace_back(
          RefDecl{ident(s.name_of(r.source)), ident(s.name_of(r.target)), {}});
    return tree;
  }

} // namespace goossdm::dsl
