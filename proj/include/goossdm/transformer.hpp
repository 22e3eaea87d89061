#pragma once

#include <goossdm/diagnostic.hpp>
#include <goossdm/model.hpp>
#include <goossdm/xsd.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace goossdm {

  /// Placeholder for an exclusive participation; resolved by build_choice.
  struct ChoiceMarker {
    bool mandatory = false;

    friend bool operator==(const ChoiceMarker&, const ChoiceMarker&) = default;
  };

  using OccursOrChoice = std::variant<xsd::Occurs, ChoiceMarker>;

  OccursOrChoice
  map_participation(const ConstraintTuple& c);

  /// Occurs of an exclusive member, either inside a choice or left alone:
  /// 0:X gives (0,1), 1:X gives (1,1). Non-exclusive values map as usual.
  xsd::Occurs
  resolved_occurs(Participation p);

  struct CompositorDecision {
    xsd::CompositorKind kind = xsd::CompositorKind::sequence;
    /// θ=0 could not be honoured because a member repeats (W201).
    bool fallback = false;

    friend bool operator==(const CompositorDecision&, const CompositorDecision&) = default;
  };

  /// `all` needs θ=0, members that never repeat, no nested choice and a
  /// non-repeating group.
  CompositorDecision
  choose_compositor(bool theta, const std::vector<xsd::Particle>& members,
                    xsd::Occurs group = {});

  struct ExclusiveMember {
    xsd::Particle particle;
    Participation p = Participation::zero_excl;
  };

  struct ChoiceResult {
    std::optional<xsd::Choice> choice;
    std::vector<Diagnostic> diagnostics;
  };

  /// Folds an exclusive run into a choice; mixed 0:X/1:X gives E502.
  ChoiceResult
  build_choice(std::vector<ExclusiveMember> group);

  enum class EntryKind { element, csg, ref, choice };

  struct PlanNode;

  /// One particle in a CSG's content.
  struct PlanEntry {
    EntryKind kind = EntryKind::element;
    std::string name;
    std::optional<NodeRef> node;
    xsd::Occurs occurs;
    /// xs:ID for determinants, the base name for a link base CSG.
    std::optional<std::string> type_name;
    /// Nested CSG content (kind csg, at most one).
    std::vector<PlanNode> content;
    /// Choice branches (kind choice).
    std::vector<PlanEntry> branches;
  };

  /// One occurrence of a CSG inside a plan tree.
  struct PlanNode {
    std::size_t csg = 0;
    std::string name;
    bool mixed = false;
    std::optional<std::string> base;
    xsd::CompositorKind compositor = xsd::CompositorKind::sequence;
    xsd::Occurs occurs;
    bool fallback = false;
    std::vector<PlanEntry> entries;
  };

  enum class GlobalRole { root, reference_target, promoted, unreachable };

  std::string_view
  to_string(GlobalRole r);

  struct PlanGlobal {
    std::string name;
    GlobalRole role = GlobalRole::root;
    NodeRef node;
    std::optional<std::string> type_name;
    std::optional<PlanNode> content;
  };

  /// Named complex types for link bases, then the global elements: roots
  /// first, followed by reference targets, promoted revisits and unreachable
  /// CSGs in discovery order.
  struct NestingPlan {
    std::vector<PlanNode> named_types;
    std::vector<PlanGlobal> globals;
  };

  struct PlanResult {
    std::optional<NestingPlan> plan;
    std::vector<Diagnostic> diagnostics;
  };

  /// E502 for mixed exclusive runs, E503 for nesting cycles, W201 and W501
  /// as warnings.
  PlanResult
  plan_nesting(const SchemaGraph& schema);

  xsd::Document
  to_document(const NestingPlan& plan);

  struct TransformResult {
    std::optional<xsd::Document> document;
    std::optional<NestingPlan> plan;
    std::vector<Diagnostic> diagnostics;
  };

  /// Throws goossdm::Error("internal-error") when `schema` does not pass
  /// validation.
  TransformResult
  transform(const SchemaGraph& schema);

} // namespace goossdm
