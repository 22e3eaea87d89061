#pragma once

#include <goossdm/diagnostic.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goossdm {

  /// Participation constraint values shared by containment (p) and
  /// association (P) edges.
  enum class Participation : std::uint8_t {
    one_one,   // 1:1
    zero_one,  // 0:1
    one_many,  // 1:M
    zero_many, // 0:M
    zero_excl, // 0:X
    one_excl,  // 1:X
  };

  inline constexpr Participation all_participations[] = {
      Participation::one_one,   Participation::zero_one,
      Participation::one_many,  Participation::zero_many,
      Participation::zero_excl, Participation::one_excl};

  std::string_view
  to_string(Participation p);

  std::optional<Participation>
  parse_participation(std::string_view text);

  inline bool
  is_exclusive(Participation p) {
    return p == Participation::zero_excl || p == Participation::one_excl;
  }

  /// The <p, theta> pair. `ordered` is theta: true for 1, false for 0.
  struct ConstraintTuple {
    Participation p = Participation::one_one;
    bool ordered = false;

    friend bool operator==(const ConstraintTuple&,
                           const ConstraintTuple&) = default;
  };

  std::string
  to_string(const ConstraintTuple& t);

  enum class NodeKind : std::uint8_t { esg, csg, annotation };

  std::string_view
  to_string(NodeKind k);

  struct NodeRef {
    NodeKind kind = NodeKind::esg;
    std::size_t index = 0;

    friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
  };

  // Spans on model values are informational; equality ignores them.

  struct EsgNode {
    std::string name;
    SourceSpan span;

    friend bool
    operator==(const EsgNode& a, const EsgNode& b) {
      return a.name == b.name;
    }
  };

  struct CsgNode {
    std::string name;
    int layer = 1;
    std::optional<ConstraintTuple> group_occurs;
    SourceSpan span;

    friend bool
    operator==(const CsgNode& a, const CsgNode& b) {
      return a.name == b.name && a.layer == b.layer &&
             a.group_occurs == b.group_occurs;
    }
  };

  struct AnnotationNode {
    std::string name;
    SourceSpan span;

    friend bool
    operator==(const AnnotationNode& a, const AnnotationNode& b) {
      return a.name == b.name;
    }
  };

  /// Member -> parent CSG. `is_reference` marks `contains ref X`, which
  /// encapsulates a reference to X rather than X itself.
  struct ContainmentEdge {
    NodeRef child;
    std::size_t parent = 0;
    ConstraintTuple constraint;
    bool is_determinant = false;
    bool is_reference = false;
    std::size_t position = 0;
    SourceSpan span;

    friend bool
    operator==(const ContainmentEdge& a, const ContainmentEdge& b) {
      return a.child == b.child && a.parent == b.parent &&
             a.constraint == b.constraint &&
             a.is_determinant == b.is_determinant &&
             a.is_reference == b.is_reference && a.position == b.position;
    }
  };

  /// Binary association `left -- right`.
  struct AssociationEdge {
    std::size_t left = 0;
    std::size_t right = 0;
    ConstraintTuple constraint;
    SourceSpan span;

    friend bool
    operator==(const AssociationEdge& a, const AssociationEdge& b) {
      return a.left == b.left && a.right == b.right &&
             a.constraint == b.constraint;
    }
  };

  struct ConnectorMember {
    std::size_t csg = 0;
    ConstraintTuple constraint;
    SourceSpan span;

    friend bool
    operator==(const ConnectorMember& a, const ConnectorMember& b) {
      return a.csg == b.csg && a.constraint == b.constraint;
    }
  };

  /// n-ary association. The optional context is the associated CSG that
  /// hosts the participants.
  struct AssociationConnector {
    std::string name;
    std::vector<ConnectorMember> members;
    std::optional<ConnectorMember> context;
    SourceSpan span;

    friend bool
    operator==(const AssociationConnector& a, const AssociationConnector& b) {
      return a.name == b.name && a.members == b.members &&
             a.context == b.context;
    }
  };

  struct LinkEdge {
    std::size_t base = 0;
    std::size_t derived = 0;
    SourceSpan span;

    friend bool
    operator==(const LinkEdge& a, const LinkEdge& b) {
      return a.base == b.base && a.derived == b.derived;
    }
  };

  struct ReferenceEdge {
    NodeRef source;
    NodeRef target;
    SourceSpan span;

    friend bool
    operator==(const ReferenceEdge& a, const ReferenceEdge& b) {
      return a.source == b.source && a.target == b.target;
    }
  };

  /// Child of an association or connector after root-side resolution.
  struct NestedPartner {
    std::size_t csg = 0;
    ConstraintTuple constraint;
  };

  /// How a connector nests: `root` hosts `context` (when present), and the
  /// context (or the root itself) hosts `participants` in nesting order.
  struct ConnectorLayout {
    std::size_t root = 0;
    std::optional<NestedPartner> context;
    std::vector<NestedPartner> participants;
  };

  /// The whole conceptual schema. Built by lowering or by hand; treated as
  /// immutable once handed to the validator.
  class SchemaGraph {
  public:
    std::string name;
    std::vector<EsgNode> esgs;
    std::vector<CsgNode> csgs;
    std::vector<AnnotationNode> annotations;
    std::vector<ContainmentEdge> containments;
    std::vector<AssociationEdge> associations;
    std::vector<AssociationConnector> connectors;
    std::vector<LinkEdge> links;
    std::vector<ReferenceEdge> references;

    friend bool operator==(const SchemaGraph&, const SchemaGraph&) = default;

    std::optional<NodeRef>
    find(std::string_view node_name) const;

    std::optional<std::size_t>
    find_csg(std::string_view csg_name) const;

    const std::string&
    name_of(NodeRef ref) const;

    bool
    contains(NodeRef ref) const;

    /// 0 for ESGs and annotations, the declared layer for CSGs.
    int
    layer_of(NodeRef ref) const;

    /// CSGs at the maximum layer, in declaration order.
    std::vector<std::size_t>
    roots_of() const;

    /// Containment edges whose parent is `csg`, ordered by position.
    std::vector<const ContainmentEdge*>
    members_of(std::size_t csg) const;

    /// Number of distinct containment parents of an ESG.
    std::size_t
    containment_parent_count(std::size_t esg) const;

    bool
    is_shared(std::size_t esg) const {
      return containment_parent_count(esg) > 1;
    }

    /// Disjunction groups among the members of `csg`.
    std::vector<std::vector<const ContainmentEdge*>>
    exclusive_groups(std::size_t csg) const;

    /// Nesting parent of a binary association: the upper-layer endpoint, or
    /// the right-hand endpoint when both share a layer.
    std::size_t
    association_parent(const AssociationEdge& edge) const;

    std::size_t
    association_child(const AssociationEdge& edge) const {
      return association_parent(edge) == edge.left ? edge.right : edge.left;
    }

    ConnectorLayout
    connector_layout(const AssociationConnector& conn) const;

    /// Link bases of `csg` (validated schemas have at most one).
    std::vector<std::size_t>
    bases_of(std::size_t csg) const;

    bool
    is_link_base(std::size_t csg) const;

  private:
    void
    check(NodeRef ref) const;
  };

  /// Splits a member list into maximal runs of consecutive members sharing
  /// the same exclusive participation value; runs of size one are dropped
  /// because a lone exclusive member degrades to 0:1 or 1:1.
  template <typename Member, typename GetTuple>
  std::vector<std::vector<Member>>
  exclusive_runs(const std::vector<Member>& members, GetTuple get) {
    std::vector<std::vector<Member>> groups;
    std::vector<Member> run;
    auto flush = [&] {
      if (run.size() >= 2) groups.push_back(run);
      run.clear();
    };
    for (const auto& m : members) {
      const ConstraintTuple& t = get(m);
      if (!is_exclusive(t.p)) {
        flush();
        continue;
      }
      if (!run.empty() && get(run.back()).p != t.p) flush();
      run.push_back(m);
    }
    flush();
    return groups;
  }

} // namespace goossdm
