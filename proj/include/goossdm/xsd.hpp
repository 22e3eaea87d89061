#pragma once

#include <goossdm/diagnostic.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace goossdm::xsd {

  inline constexpr std::string_view namespace_uri = "http://www.w3.org/2001/XMLSchema";
  inline constexpr std::string_view id_type = "xs:ID";

  struct Occurs {
    static constexpr std::uint32_t unbounded = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t min = 1;
    std::uint32_t max = 1;

    bool
    is_unbounded() const {
      return max == unbounded;
    }

    bool
    is_default() const {
      return min == 1 && max == 1;
    }

    friend bool operator==(const Occurs&, const Occurs&) = default;
  };

  std::string
  to_string(const Occurs& o);

  struct Particle;

  enum class CompositorKind { sequence, all };

  std::string_view
  to_string(CompositorKind k);

  struct Compositor {
    CompositorKind kind = CompositorKind::sequence;
    Occurs occurs;
    std::vector<Particle> children;

    friend bool operator==(const Compositor&, const Compositor&) = default;
  };

  struct Choice {
    Occurs occurs;
    std::vector<Particle> children;

    friend bool operator==(const Choice&, const Choice&) = default;
  };

  using Group = std::variant<Compositor, Choice>;

  /// complexContent/extension: `base` names a global complex type.
  struct Extension {
    std::string base;
    std::optional<Group> added;

    friend bool operator==(const Extension&, const Extension&) = default;
  };

  struct ComplexType {
    std::optional<std::string> name;
    bool mixed = false;
    std::variant<std::monostate, Group, Extension> content;

    friend bool operator==(const ComplexType&, const ComplexType&) = default;
  };

  /// At most one of `type_name`, `ref` or `complex_type` is set. An element
  /// with none of them is a text-only leaf.
  struct Element {
    std::string name;
    std::optional<std::string> type_name;
    std::optional<std::string> ref;
    Occurs occurs;
    std::optional<ComplexType> complex_type;

    friend bool operator==(const Element&, const Element&) = default;

    bool
    is_leaf() const {
      return !ref && !complex_type && (!type_name || *type_name == id_type);
    }
  };

  struct Particle {
    std::variant<Element, Compositor, Choice> node;

    friend bool operator==(const Particle&, const Particle&) = default;
  };

  struct Document {
    std::vector<ComplexType> types;
    std::vector<Element> elements;

    friend bool operator==(const Document&, const Document&) = default;

    const ComplexType*
    find_type(std::string_view name) const;

    const Element*
    find_element(std::string_view name) const;
  };

  /// Invariant violations: duplicate global names, unresolved ref/base/type,
  /// more than one of type/ref/content on an element, occurs min > max,
  /// repeating children in xs:all.
  std::vector<std::string>
  check_invariants(const Document& doc);

  /// Canonical text. Throws goossdm::Error("unresolved-ref") when the
  /// document violates its invariants.
  std::string
  emit(const Document& doc);

  struct ReadResult {
    std::optional<Document> document;
    std::vector<Diagnostic> diagnostics;
  };

  /// Reads the emitted subset back; any whitespace and attribute order.
  ReadResult
  read(std::string_view text, const std::string& file = {});

  /// Depth-first visit of every particle below a group, not descending into
  /// element content.
  template <typename F>
  void
  for_each_particle(const std::vector<Particle>& particles, F&& f) {
    for (const auto& p : particles) {
      f(p);
      if (auto* c = std::get_if<Compositor>(&p.node))
        for_each_particle(c->children, f);
      else if (auto* ch = std::get_if<Choice>(&p.node))
        for_each_particle(ch->children, f);
    }
  }

  inline const std::vector<Particle>&
  children_of(const Group& g) {
    return std::visit([](const auto& x) -> const std::vector<Particle>& { return x.children; }, g);
  }

  inline std::vector<Particle>&
  children_of(Group& g) {
    return std::visit([](auto& x) -> std::vector<Particle>& { return x.children; }, g);
  }

  inline const Occurs&
  occurs_of(const Group& g) {
    return std::visit([](const auto& x) -> const Occurs& { return x.occurs; }, g);
  }

  inline Particle
  to_particle(Group g) {
    return std::visit([](auto&& x) { return Particle{std::move(x)}; }, std::move(g));
  }

} // namespace goossdm::xsd
