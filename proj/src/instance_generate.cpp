#include "content_model.hpp"

#include <goossdm/instance.hpp>

#include <random>

namespace goossdm {

  namespace {

    constexpr int max_depth = 256;

    class Generator {
    public:
      Generator(const xsd::Document& doc, std::uint64_t seed, const GenConfig& cfg)
          : models_(doc), rng_(seed), cfg_(cfg) {
        if (cfg_.max_repeat < 1) throw Error("invalid-config", "max_repeat must be at least 1");
        if (cfg_.text_alphabet.empty()) throw Error("invalid-config", "empty text alphabet");
      }

      xml::Element
      root() {
        const auto& doc = models_.document();
        if (doc.elements.empty()) throw Error("no-root", "document has no global element");
        return element(doc.elements.front(), 0);
      }

    private:
      std::uint64_t
      below(std::uint64_t n) {
        return n == 0 ? 0 : rng_() % n;
      }

      std::uint32_t
      count(const xsd::Occurs& o) {
        const std::uint32_t hi =
            o.is_unbounded() ? std::max(o.min, cfg_.max_repeat) : o.max;
        return o.min + static_cast<std::uint32_t>(below(std::uint64_t(hi - o.min) + 1));
      }

      std::string
      word() {
        const auto len = 1 + below(12);
        std::string s;
        for (std::uint64_t i = 0; i < len; ++i)
          s += cfg_.text_alphabet[below(cfg_.text_alphabet.size())];
        return s;
      }

      xml::Element
      element(const xsd::Element& decl, int depth) {
        if (depth > max_depth) throw Error("recursion", "generated document exceeds depth limit");
        const auto& target = models_.target(decl);
        xml::Element x;
        x.name = target.name;
        const auto resolved = models_.resolve(decl);
        if (!resolved.type) {
          if (models_.is_id(decl))
            x.append_text("id" + std::to_string(++ids_));
          else
            x.append_text(word());
          return x;
        }
        std::vector<xml::Element> kids;
        if (resolved.particle) particle(*resolved.particle, kids, depth);
        for (auto& k : kids) {
          if (resolved.mixed && below(2)) x.append_text(" " + word() + " ");
          x.append_child(std::move(k));
        }
        if (resolved.mixed && below(2)) x.append_text(" " + word());
        return x;
      }

      void
      particle(const xsd::Particle& p, std::vector<xml::Element>& out, int depth) {
        if (auto* e = std::get_if<xsd::Element>(&p.node)) {
          const auto n = count(e->occurs);
          for (std::uint32_t i = 0; i < n; ++i) out.push_back(element(*e, depth + 1));
        } else if (auto* ch = std::get_if<xsd::Choice>(&p.node)) {
          const auto n = count(ch->occurs);
          for (std::uint32_t i = 0; i < n && !ch->children.empty(); ++i)
            particle(ch->children[below(ch->children.size())], out, depth);
        } else {
          const auto& c = std::get<xsd::Compositor>(p.node);
          const auto n = count(c.occurs);
          for (std::uint32_t i = 0; i < n; ++i) {
            if (c.kind == xsd::CompositorKind::sequence) {
              for (const auto& child : c.children) particle(child, out, depth);
            } else {
              std::vector<std::size_t> order(c.children.size());
              for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
              for (std::size_t k = order.size(); k > 1; --k)
                std::swap(order[k - 1], order[below(k)]);
              for (auto k : order) particle(c.children[k], out, depth);
            }
          }
        }
      }

      detail::ContentModels models_;
      std::mt19937_64 rng_;
      const GenConfig& cfg_;
      std::uint64_t ids_ = 0;
    };

  } // namespace

  xml::Element
  generate_one(const xsd::Document& doc, std::uint64_t seed, const GenConfig& cfg) {
    return Generator(doc, seed, cfg).root();
  }

  std::vector<xml::Element>
  generate(const xsd::Document& doc, const GenConfig& cfg) {
    std::vector<xml::Element> out;
    out.reserve(cfg.count);
    for (std::size_t i = 0; i < cfg.count; ++i) out.push_back(generate_one(doc, cfg.seed + i, cfg));
    return out;
  }

} // namespace goossdm
