#pragma once

// Resolves element declarations to complete content models, flattening
// extension chains into one sequence.

#include <goossdm/xsd.hpp>

#include <deque>
#include <map>

namespace goossdm::detail {

  struct Resolved {
    /// Null for text-only leaves.
    const xsd::ComplexType* type = nullptr;
    bool mixed = false;
    /// Null when the type has no model group.
    const xsd::Particle* particle = nullptr;
  };

  class ContentModels {
  public:
    explicit ContentModels(const xsd::Document& doc) : doc_(doc) {}

    const xsd::Document&
    document() const {
      return doc_;
    }

    Resolved
    resolve(const xsd::Element& decl) {
      const xsd::Element* e = &decl;
      if (e->ref) {
        e = doc_.find_element(*e->ref);
        if (!e) throw Error("unresolved-ref", "ref '" + *decl.ref + "' has no global element");
      }
      const xsd::ComplexType* t = nullptr;
      if (e->complex_type)
        t = &*e->complex_type;
      else if (e->type_name && *e->type_name != xsd::id_type)
        t = doc_.find_type(*e->type_name);
      if (!t) return {};
      return {t, t->mixed, particle_of(*t)};
    }

    /// Declaration reached through refs.
    const xsd::Element&
    target(const xsd::Element& decl) const {
      if (!decl.ref) return decl;
      const auto* g = doc_.find_element(*decl.ref);
      if (!g) throw Error("unresolved-ref", "ref '" + *decl.ref + "' has no global element");
      return *g;
    }

    bool
    is_id(const xsd::Element& decl) const {
      const auto& e = target(decl);
      return e.type_name && *e.type_name == xsd::id_type;
    }

  private:
    const xsd::Particle*
    particle_of(const xsd::ComplexType& t) {
      auto it = cache_.find(&t);
      if (it != cache_.end()) return it->second;
      std::vector<xsd::Particle> parts;
      collect(t, parts, 0);
      const xsd::Particle* out = nullptr;
      if (parts.size() == 1) {
        owned_.push_back(std::move(parts.front()));
        out = &owned_.back();
      } else if (!parts.empty()) {
        owned_.push_back(xsd::Particle{
            xsd::Compositor{xsd::CompositorKind::sequence, {}, std::move(parts)}});
        out = &owned_.back();
      }
      cache_[&t] = out;
      return out;
    }

    void
    collect(const xsd::ComplexType& t, std::vector<xsd::Particle>& parts, int depth) {
      if (depth > 64) throw Error("extension-cycle", "extension chain does not terminate");
      if (auto* g = std::get_if<xsd::Group>(&t.content)) {
        parts.push_back(xsd::to_particle(*g));
      } else if (auto* x = std::get_if<xsd::Extension>(&t.content)) {
        const auto* base = doc_.find_type(x->base);
        if (!base) throw Error("unresolved-ref", "extension base '" + x->base + "' not found");
        collect(*base, parts, depth + 1);
        if (x->added) parts.push_back(xsd::to_particle(*x->added));
      }
    }

    const xsd::Document& doc_;
    std::map<const xsd::ComplexType*, const xsd::Particle*> cache_;
    std::deque<xsd::Particle> owned_;
  };

} // namespace goossdm::detail
