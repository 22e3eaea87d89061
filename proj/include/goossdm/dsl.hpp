#pragma once

// Textual schema language:
//
//   schema   := "schema" IDENT "{" item* "}"
//   item     := "esg" IDENT ";" | "annotation" IDENT ";" | csg | assoc
//             | conn | link | refdecl
//   csg      := "csg" IDENT "@layer" INT ["group" tuple] "{" member* "}"
//   member   := "contains" ["det"] ["ref"] IDENT [tuple] ";"
//   tuple    := "<" P "," THETA ">"   P in {1:1,0:1,1:M,0:M,0:X,1:X}
//   assoc    := "associate" IDENT "--" IDENT [tuple] ";"
//   conn     := "connector" IDENT "{" (("member"|"context") IDENT [tuple] ";")* "}"
//   link     := "link" IDENT "->" IDENT ";"      (base -> derived)
//   refdecl  := "ref" IDENT "->" IDENT ";"
//
// `//` starts a comment running to the end of the line.

#include <goossdm/diagnostic.hpp>
#include <goossdm/model.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace goossdm::dsl {

  // Syntax nodes compare structurally; spans are ignored and an omitted
  // member tuple compares equal to an explicit <1:1,0>.

  struct Ident {
    std::string text;
    SourceSpan span;

    friend bool
    operator==(const Ident& a, const Ident& b) {
      return a.text == b.text;
    }
  };

  struct TupleSyntax {
    ConstraintTuple value;
    SourceSpan span;

    friend bool
    operator==(const TupleSyntax& a, const TupleSyntax& b) {
      return a.value == b.value;
    }
  };

  inline ConstraintTuple
  materialize(const std::optional<TupleSyntax>& t) {
    return t ? t->value : ConstraintTuple{};
  }

  struct MemberDecl {
    bool determinant = false;
    bool reference = false;
    Ident name;
    std::optional<TupleSyntax> tuple;
    SourceSpan span;

    friend bool
    operator==(const MemberDecl& a, const MemberDecl& b) {
      return a.determinant == b.determinant && a.reference == b.reference &&
             a.name == b.name && materialize(a.tuple) == materialize(b.tuple);
    }
  };

  struct EsgDecl {
    Ident name;
    SourceSpan span;

    friend bool
    operator==(const EsgDecl& a, const EsgDecl& b) {
      return a.name == b.name;
    }
  };

  struct AnnotationDecl {
    Ident name;
    SourceSpan span;

    friend bool
    operator==(const AnnotationDecl& a, const AnnotationDecl& b) {
      return a.name == b.name;
    }
  };

  struct CsgDecl {
    Ident name;
    long layer = 1;
    SourceSpan layer_span;
    std::optional<TupleSyntax> group;
    std::vector<MemberDecl> members;
    SourceSpan span;

    friend bool
    operator==(const CsgDecl& a, const CsgDecl& b) {
      return a.name == b.name && a.layer == b.layer && a.group == b.group &&
             a.members == b.members;
    }
  };

  struct AssociateDecl {
    Ident left;
    Ident right;
    std::optional<TupleSyntax> tuple;
    SourceSpan span;

    friend bool
    operator==(const AssociateDecl& a, const AssociateDecl& b) {
      return a.left == b.left && a.right == b.right &&
             materialize(a.tuple) == materialize(b.tuple);
    }
  };

  enum class ConnectorRole { member, context };

  struct ConnectorEntry {
    ConnectorRole role = ConnectorRole::member;
    Ident name;
    std::optional<TupleSyntax> tuple;
    SourceSpan span;

    friend bool
    operator==(const ConnectorEntry& a, const ConnectorEntry& b) {
      return a.role == b.role && a.name == b.name &&
             materialize(a.tuple) == materialize(b.tuple);
    }
  };

  struct ConnectorDecl {
    Ident name;
    std::vector<ConnectorEntry> entries;
    SourceSpan span;

    friend bool
    operator==(const ConnectorDecl& a, const ConnectorDecl& b) {
      return a.name == b.name && a.entries == b.entries;
    }
  };

  struct LinkDecl {
    Ident base;
    Ident derived;
    SourceSpan span;

    friend bool
    operator==(const LinkDecl& a, const LinkDecl& b) {
      return a.base == b.base && a.derived == b.derived;
    }
  };

  struct RefDecl {
    Ident source;
    Ident target;
    SourceSpan span;

    friend bool
    operator==(const RefDecl& a, const RefDecl& b) {
      return a.source == b.source && a.target == b.target;
    }
  };

  using Item = std::variant<EsgDecl, AnnotationDecl, CsgDecl, AssociateDecl,
                            ConnectorDecl, LinkDecl, RefDecl>;

  struct SyntaxTree {
    Ident name;
    std::vector<Item> items;
    SourceSpan span;

    friend bool
    operator==(const SyntaxTree& a, const SyntaxTree& b) {
      return a.name == b.name && a.items == b.items;
    }
  };

  /// `tree` holds whatever was recovered; it is complete only when
  /// `diagnostics` carries no errors.
  struct ParseResult {
    SyntaxTree tree;
    std::vector<Diagnostic> diagnostics;

    bool
    ok() const {
      return !has_errors(diagnostics);
    }
  };

  ParseResult
  parse(std::string_view source, std::string file = {});

  struct LowerResult {
    std::optional<SchemaGraph> schema;
    std::vector<Diagnostic> diagnostics;
  };

  /// Resolves names and materializes default tuples.
  LowerResult
  lower(const SyntaxTree& tree);

  /// Canonical layout: 2-space indent, one declaration per line, explicit
  /// member and association tuples.
  std::string
  format(const SyntaxTree& tree);

  /// Inverse of `lower`: the syntax tree that lowers back to `schema`.
  SyntaxTree
  to_syntax_tree(const SchemaGraph& schema);

  /// parse + lower, concatenating diagnostics.
  LowerResult
  compile_source(std::string_view source, std::string file = {});

  bool
  is_keyword(std::string_view word);

} // namespace goossdm::dsl
