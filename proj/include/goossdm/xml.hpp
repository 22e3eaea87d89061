#pragma once

#include <goossdm/diagnostic.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace goossdm::xml {

  /// Generic element tree. Text is kept as segments interleaved with child
  /// elements: `texts[i]` precedes `children[i]`, and
  /// `texts.size() == children.size() + 1` always holds.
  struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::vector<std::string> texts{std::string()};
    std::size_t line = 0;

    friend bool
    operator==(const Element& a, const Element& b) {
      return a.name == b.name && a.attributes == b.attributes &&
             a.children == b.children && a.texts == b.texts;
    }

    const std::string*
    attribute(std::string_view key) const;

    void
    append_child(Element child);

    void
    append_text(std::string_view text);

    /// Concatenation of all text segments.
    std::string
    text() const;

    bool
    has_significant_text() const;
  };

  struct ParseResult {
    std::optional<Element> root;
    std::vector<Diagnostic> diagnostics;
  };

  /// Parses a UTF-8 document; well-formedness failures become E401.
  ParseResult
  parse(std::string_view text, const std::string& file = {});

  /// Indented serialization. Elements carrying non-whitespace text are
  /// written inline so their character content is preserved exactly.
  std::string
  serialize(const Element& root);

  std::string
  escape(std::string_view text, bool attribute = false);

  bool
  is_whitespace(std::string_view text);

} // namespace goossdm::xml
