#pragma once

#include <goossdm/model.hpp>
#include <goossdm/xsd.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goossdm {

  enum class RowStatus { pass, fail };

  std::string_view
  to_string(RowStatus s);

  /// One source construct and what was found for it. `kind` is a stable
  /// identifier such as "csg_complex_type" or "link_extension".
  struct CorrespondenceRow {
    std::string kind;
    std::string construct;
    std::string expected;
    std::optional<std::string> found;
    RowStatus status = RowStatus::pass;
    std::string note;
  };

  struct CorrespondenceReport {
    std::vector<CorrespondenceRow> rows;
    bool ok = true;
  };

  /// Expectations are computed from `schema` alone; `doc` is inspected only
  /// through its structure.
  CorrespondenceReport
  check_correspondence(const SchemaGraph& schema, const xsd::Document& doc);

  /// Reads `xsd_text` first; an unreadable document yields a single failing
  /// "xsd_document" row.
  CorrespondenceReport
  check_correspondence(const SchemaGraph& schema, std::string_view xsd_text);

  enum class MutationKind {
    delete_element,
    delete_complex_type,
    strip_id_type,
    swap_compositor,
    drop_choice,
    strip_occurs,
    drop_extension,
    drop_ref,
  };

  inline constexpr MutationKind all_mutations[] = {
      MutationKind::delete_element, MutationKind::delete_complex_type,
      MutationKind::strip_id_type,  MutationKind::swap_compositor,
      MutationKind::drop_choice,    MutationKind::strip_occurs,
      MutationKind::drop_extension, MutationKind::drop_ref};

  std::string_view
  to_string(MutationKind k);

  /// Row kinds a mutation is expected to break.
  std::vector<std::string>
  expected_row_kinds(MutationKind k);

  /// Applies `k` to the first applicable node in document order; nullopt
  /// when nothing applies.
  std::optional<xsd::Document>
  apply_mutation(const xsd::Document& doc, MutationKind k);

  struct MutationOutcome {
    MutationKind kind = MutationKind::delete_element;
    bool applied = false;
    bool detected = false;
    /// The failing row of an expected kind, when detected.
    std::optional<CorrespondenceRow> witness;
  };

  std::vector<MutationOutcome>
  mutation_suite(const SchemaGraph& schema, const xsd::Document& doc);

} // namespace goossdm
