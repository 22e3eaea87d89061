#pragma once

#include <goossdm/model.hpp>
#include <goossdm/xml.hpp>
#include <goossdm/xsd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace goossdm {

  struct GenConfig {
    std::uint64_t seed = 0;
    /// Cap for unbounded maxOccurs.
    std::uint32_t max_repeat = 3;
    std::string text_alphabet = "abcdefghijklmnopqrstuvwxyz";
    std::size_t count = 1;
  };

  /// Document i uses seed `cfg.seed + i`. The root is the first global
  /// element. Throws goossdm::Error("no-root") for a document without
  /// global elements.
  std::vector<xml::Element>
  generate(const xsd::Document& doc, const GenConfig& cfg);

  xml::Element
  generate_one(const xsd::Document& doc, std::uint64_t seed, const GenConfig& cfg = {});

  /// V601 unexpected child, V602 missing required child, V603 too many or
  /// too few occurrences, V604 choice violated, V605 one ID value on
  /// different instances, V606 text in element-only content.
  struct Violation {
    std::string path;
    std::string code;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
  };

  struct ConformanceReport {
    bool ok = true;
    std::vector<Violation> violations;
  };

  ConformanceReport
  validate_instance(const xsd::Document& doc, const xml::Element& root);

  /// A schema that passes `validate`, with `budget` CSGs (at least one).
  SchemaGraph
  random_schema(std::uint64_t seed, std::size_t budget);

} // namespace goossdm
