#pragma once

#include <goossdm/diagnostic.hpp>
#include <goossdm/model.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace goossdm {

  struct ValidationReport {
    std::vector<Diagnostic> diagnostics;
    bool ok = true;
  };

  /// Checks every well-formedness rule; never stops at the first finding.
  ///
  ///   E301 annotation contained with p other than 1:1
  ///   E302 link between non-adjacent layers (or a link cycle)
  ///   E303 CSG containment between non-adjacent layers (or a cycle)
  ///   E304 determinant flag on a member that is not a directly held ESG
  ///   E305 exclusive members of one kind split into separate runs
  ///   E306 connector with fewer than two members, or a repeated participant
  ///   E307 reference between constructs of different kinds
  ///   E308 CSG specializing more than one base
  ///   E309 association between CSGs more than one layer apart
  ///   E310 CSG layer below 1
  ///   W301 ESG that is never contained or referenced
  ///   W302 several CSGs share the topmost layer
  ///   W303 CSG without members
  ValidationReport
  validate(const SchemaGraph& schema);

  /// Rule text for a diagnostic code; throws goossdm::Error for unknown codes.
  std::string
  explain(std::string_view code);

  /// Every code `explain` knows, in ascending order.
  std::vector<std::string>
  known_codes();

} // namespace goossdm
