#include "content_model.hpp"

#include <goossdm/instance.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace goossdm {

  namespace {

    using Set = std::vector<char>;

    const std::string&
    element_name(const xsd::Element& e) {
      return e.ref ? *e.ref : e.name;
    }

    const xsd::Occurs&
    occurs_of(const xsd::Particle& p) {
      return std::visit([](const auto& x) -> const xsd::Occurs& { return x.occurs; }, p.node);
    }

    // Exact matcher for one element's children: ends(p, i) is the set of
    // positions where a match of p started at i can stop.
    class Matcher {
    public:
      explicit Matcher(const std::vector<xml::Element>& kids)
          : kids_(kids), n_(kids.size()), assign_(kids.size(), nullptr) {}

      bool
      match(const xsd::Particle* root) {
        if (!root) return n_ == 0;
        if (!ends(*root, 0)[n_]) return false;
        assign_occ(*root, 0, n_);
        return true;
      }

      std::size_t
      furthest() const {
        return furthest_;
      }

      const std::vector<const xsd::Element*>&
      assignment() const {
        return assign_;
      }

    private:
      std::uint32_t
      limit(const xsd::Occurs& o) const {
        const std::uint64_t cap = std::uint64_t(o.min) + n_ + 1;
        return static_cast<std::uint32_t>(std::min<std::uint64_t>(o.max, cap));
      }

      const Set&
      ends(const xsd::Particle& p, std::size_t pos) {
        const auto key = std::make_pair(&p, pos);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const auto layers = iterate(p, pos);
        const auto& o = occurs_of(p);
        Set result(n_ + 1, 0);
        for (std::size_t k = o.min; k < layers.size(); ++k)
          for (std::size_t q = 0; q <= n_; ++q) result[q] |= layers[k][q];
        return memo_.emplace(key, std::move(result)).first->second;
      }

      // layers[k] = positions reachable after exactly k iterations.
      std::vector<Set>
      iterate(const xsd::Particle& p, std::size_t pos) {
        std::vector<Set> layers;
        Set cur(n_ + 1, 0);
        cur[pos] = 1;
        layers.push_back(cur);
        const auto lim = limit(occurs_of(p));
        for (std::uint32_t k = 1; k <= lim; ++k) {
          Set next(n_ + 1, 0);
          bool any = false;
          for (std::size_t q = 0; q <= n_; ++q) {
            if (!cur[q]) continue;
            const Set& e = once(p, q);
            for (std::size_t r = 0; r <= n_; ++r)
              if (e[r]) next[r] = 1, any = true;
          }
          if (!any) break;
          layers.push_back(next);
          cur = std::move(next);
        }
        return layers;
      }

      const Set&
      once(const xsd::Particle& p, std::size_t pos) {
        const auto key = std::make_pair(&p, pos);
        auto it = once_memo_.find(key);
        if (it != once_memo_.end()) return it->second;
        Set out(n_ + 1, 0);
        if (auto* e = std::get_if<xsd::Element>(&p.node)) {
          if (pos < n_ && kids_[pos].name == element_name(*e)) {
            out[pos + 1] = 1;
            furthest_ = std::max(furthest_, pos + 1);
          }
        } else if (auto* ch = std::get_if<xsd::Choice>(&p.node)) {
          for (const auto& b : ch->children) {
            const Set& e = ends(b, pos);
            for (std::size_t r = 0; r <= n_; ++r) out[r] |= e[r];
          }
        } else {
          const auto& c = std::get<xsd::Compositor>(p.node);
          if (c.kind == xsd::CompositorKind::sequence) {
            const auto layers = sequence_layers(c, pos);
            out = layers.back();
          } else {
            all_once(c, pos, out, nullptr);
          }
        }
        return once_memo_.emplace(key, std::move(out)).first->second;
      }

      std::vector<Set>
      sequence_layers(const xsd::Compositor& c, std::size_t pos) {
        std::vector<Set> layers;
        Set cur(n_ + 1, 0);
        cur[pos] = 1;
        layers.push_back(cur);
        for (const auto& child : c.children) {
          Set next(n_ + 1, 0);
          for (std::size_t q = 0; q <= n_; ++q) {
            if (!layers.back()[q]) continue;
            const Set& e = ends(child, q);
            for (std::size_t r = 0; r <= n_; ++r) next[r] |= e[r];
          }
          layers.push_back(std::move(next));
        }
        return layers;
      }

      // Members in any order, each consumed at most once. When `to` is set,
      // records the assignment for the prefix ending there.
      void
      all_once(const xsd::Compositor& c, std::size_t pos, Set& out, const std::size_t* to) {
        std::vector<bool> used(c.children.size(), false);
        auto satisfied = [&] {
          for (std::size_t i = 0; i < c.children.size(); ++i)
            if (!used[i] && occurs_of(c.children[i]).min > 0) return false;
          return true;
        };
        if (satisfied()) out[pos] = 1;
        for (std::size_t q = pos; q < n_; ++q) {
          if (to && q == *to) return;
          bool matched = false;
          for (std::size_t i = 0; i < c.children.size(); ++i) {
            const auto* e = std::get_if<xsd::Element>(&c.children[i].node);
            if (used[i] || !e || element_name(*e) != kids_[q].name || e->occurs.max == 0) continue;
            used[i] = true;
            matched = true;
            if (to) assign_[q] = e;
            furthest_ = std::max(furthest_, q + 1);
            break;
          }
          if (!matched) return;
          if (satisfied()) out[q + 1] = 1;
        }
      }

      void
      assign_occ(const xsd::Particle& p, std::size_t from, std::size_t to) {
        const auto layers = iterate(p, from);
        const auto& o = occurs_of(p);
        std::size_t k = o.min;
        while (k < layers.size() && !layers[k][to]) ++k;
        if (k >= layers.size()) return;
        std::vector<std::size_t> stops(k + 1);
        stops[k] = to;
        for (std::size_t i = k; i > 0; --i) {
          for (std::size_t q = 0; q <= n_; ++q) {
            if (layers[i - 1][q] && once(p, q)[stops[i]]) {
              stops[i - 1] = q;
              break;
            }
          }
        }
        for (std::size_t i = 0; i < k; ++i) assign_once(p, stops[i], stops[i + 1]);
      }

      void
      assign_once(const xsd::Particle& p, std::size_t from, std::size_t to) {
        if (from == to) return;
        if (auto* e = std::get_if<xsd::Element>(&p.node)) {
          assign_[from] = e;
        } else if (auto* ch = std::get_if<xsd::Choice>(&p.node)) {
          for (const auto& b : ch->children) {
            if (ends(b, from)[to]) {
              assign_occ(b, from, to);
              return;
            }
          }
        } else {
          const auto& c = std::get<xsd::Compositor>(p.node);
          if (c.kind == xsd::CompositorKind::all) {
            Set scratch(n_ + 1, 0);
            all_once(c, from, scratch, &to);
            return;
          }
          const auto layers = sequence_layers(c, from);
          std::size_t cur = to;
          for (std::size_t i = c.children.size(); i > 0; --i) {
            for (std::size_t q = 0; q <= n_; ++q) {
              if (layers[i - 1][q] && ends(c.children[i - 1], q)[cur]) {
                assign_occ(c.children[i - 1], q, cur);
                cur = q;
                break;
              }
            }
          }
        }
      }

      const std::vector<xml::Element>& kids_;
      std::size_t n_;
      std::size_t furthest_ = 0;
      std::vector<const xsd::Element*> assign_;
      std::map<std::pair<const xsd::Particle*, std::size_t>, Set> memo_;
      std::map<std::pair<const xsd::Particle*, std::size_t>, Set> once_memo_;
    };

    void
    collect_names(const xsd::Particle& p, std::map<std::string, const xsd::Element*>& out) {
      if (auto* e = std::get_if<xsd::Element>(&p.node)) {
        out.emplace(element_name(*e), e);
        return;
      }
      const auto& children = std::holds_alternative<xsd::Choice>(p.node)
                                 ? std::get<xsd::Choice>(p.node).children
                                 : std::get<xsd::Compositor>(p.node).children;
      for (const auto& c : children) collect_names(c, out);
    }

    // Required element names and choices that cannot be skipped.
    void
    mandatory(const xsd::Particle& p, std::vector<std::string>& names,
              std::vector<const xsd::Choice*>& choices) {
      if (occurs_of(p).min == 0) return;
      if (auto* e = std::get_if<xsd::Element>(&p.node)) {
        names.push_back(element_name(*e));
      } else if (auto* ch = std::get_if<xsd::Choice>(&p.node)) {
        bool skippable = ch->children.empty();
        for (const auto& b : ch->children) skippable = skippable || occurs_of(b).min == 0;
        if (!skippable) choices.push_back(ch);
      } else {
        for (const auto& c : std::get<xsd::Compositor>(p.node).children)
          mandatory(c, names, choices);
      }
    }

    // Branch names of every choice, for sibling detection.
    void
    choices_of(const xsd::Particle& p, std::vector<const xsd::Choice*>& out) {
      if (std::holds_alternative<xsd::Element>(p.node)) return;
      if (auto* ch = std::get_if<xsd::Choice>(&p.node)) {
        out.push_back(ch);
        for (const auto& b : ch->children) choices_of(b, out);
        return;
      }
      for (const auto& c : std::get<xsd::Compositor>(p.node).children) choices_of(c, out);
    }

    bool
    branch_names(const xsd::Particle& b, const std::string& name) {
      std::map<std::string, const xsd::Element*> names;
      collect_names(b, names);
      return names.count(name) > 0;
    }

    std::string
    canonical(const xml::Element& e) {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.texts.size(); ++i) {
        if (!xml::is_whitespace(e.texts[i])) s += "'" + e.texts[i] + "'";
        if (i < e.children.size()) s += canonical(e.children[i]);
      }
      return s + ")";
    }

    std::string
    trim(const std::string& s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return {};
      const auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    }

    struct IdUse {
      std::string value;
      std::string parent;
      std::string path;
    };

    class InstanceValidator {
    public:
      explicit InstanceValidator(const xsd::Document& doc) : models_(doc) {}

      ConformanceReport
      run(const xml::Element& root) {
        const std::string path = "/" + root.name;
        const auto* decl = models_.document().find_element(root.name);
        if (!decl) {
          add(path, "V601", "no global element declaration for '" + root.name + "'");
        } else {
          element(*decl, root, nullptr, path);
        }
        ids();
        ConformanceReport r;
        r.violations = std::move(violations_);
        r.ok = r.violations.empty();
        return r;
      }

    private:
      void
      add(std::string path, std::string code, std::string message) {
        violations_.push_back({std::move(path), std::move(code), std::move(message)});
      }

      void
      element(const xsd::Element& decl, const xml::Element& x, const xml::Element* parent,
              const std::string& path) {
        for (const auto& [k, v] : x.attributes)
          add(path, "V601", "unexpected attribute '" + k + "'");
        const auto resolved = models_.resolve(decl);
        if (!resolved.type) {
          for (std::size_t i = 0; i < x.children.size(); ++i)
            add(child_path(x, i, path), "V601",
                "element '" + x.children[i].name + "' inside text-only element '" + x.name + "'");
          if (models_.is_id(decl) && parent)
            id_uses_.push_back({trim(x.text()), canonical(*parent), path});
          return;
        }
        if (!resolved.mixed && x.has_significant_text())
          add(path, "V606", "character content in element-only '" + x.name + "'");

        Matcher m(x.children);
        std::vector<const xsd::Element*> assignment;
        if (m.match(resolved.particle)) {
          assignment = m.assignment();
        } else {
          diagnose(resolved.particle, x, path, m.furthest());
          assignment.assign(x.children.size(), nullptr);
          std::map<std::string, const xsd::Element*> names;
          if (resolved.particle) collect_names(*resolved.particle, names);
          for (std::size_t i = 0; i < x.children.size(); ++i) {
            auto it = names.find(x.children[i].name);
            if (it != names.end()) assignment[i] = it->second;
          }
        }
        for (std::size_t i = 0; i < x.children.size(); ++i)
          if (assignment[i])
            element(*assignment[i], x.children[i], &x, child_path(x, i, path));
      }

      static std::string
      child_path(const xml::Element& x, std::size_t i, const std::string& path) {
        std::size_t index = 0;
        for (std::size_t j = 0; j <= i; ++j)
          if (x.children[j].name == x.children[i].name) ++index;
        return path + "/" + x.children[i].name + "[" + std::to_string(index) + "]";
      }

      void
      diagnose(const xsd::Particle* model, const xml::Element& x, const std::string& path,
               std::size_t furthest) {
        const auto& kids = x.children;
        std::map<std::string, const xsd::Element*> names;
        std::vector<std::string> required;
        std::vector<const xsd::Choice*> required_choices;
        std::vector<const xsd::Choice*> all_choices;
        if (model) {
          collect_names(*model, names);
          mandatory(*model, required, required_choices);
          choices_of(*model, all_choices);
        }
        auto present = [&](const std::string& n) {
          return std::any_of(kids.begin(), kids.end(),
                             [&](const xml::Element& k) { return k.name == n; });
        };
        auto missing = [&]() -> std::optional<std::string> {
          for (const auto& r : required)
            if (!present(r)) return r;
          return std::nullopt;
        };

        if (furthest < kids.size()) {
          const std::string& c = kids[furthest].name;
          const std::string cpath = child_path(x, furthest, path);
          if (!names.count(c)) {
            add(cpath, "V601", "unexpected element '" + c + "' in '" + x.name + "'");
            return;
          }
          if (furthest > 0) {
            const std::string& prev = kids[furthest - 1].name;
            if (prev == c) {
              add(cpath, "V603", "too many occurrences of '" + c + "' in '" + x.name + "'");
              return;
            }
            for (const auto* ch : all_choices) {
              bool has_c = false;
              bool has_prev = false;
              for (const auto& b : ch->children) {
                const bool bc = branch_names(b, c);
                const bool bp = branch_names(b, prev);
                if (bc && bp) continue;
                has_c = has_c || bc;
                has_prev = has_prev || bp;
              }
              if (has_c && has_prev) {
                add(cpath, "V604",
                    "'" + c + "' and '" + prev + "' are alternatives of one xs:choice");
                return;
              }
            }
          }
          if (auto m = missing()) {
            add(path, "V602", "missing required element '" + *m + "' in '" + x.name + "'");
            return;
          }
          add(cpath, "V601", "element '" + c + "' is not expected here in '" + x.name + "'");
          return;
        }
        if (auto m = missing()) {
          add(path, "V602", "missing required element '" + *m + "' in '" + x.name + "'");
          return;
        }
        for (const auto* ch : required_choices) {
          bool any = false;
          for (const auto& b : ch->children) {
            std::map<std::string, const xsd::Element*> bn;
            collect_names(b, bn);
            for (const auto& [n, e] : bn) any = any || present(n);
          }
          if (!any) {
            add(path, "V604", "no alternative of a required xs:choice in '" + x.name + "'");
            return;
          }
        }
        add(path, "V603", "too few occurrences in '" + x.name + "'");
      }

      void
      ids() {
        std::map<std::string, std::vector<const IdUse*>> by_value;
        for (const auto& u : id_uses_) by_value[u.value].push_back(&u);
        for (const auto& u : id_uses_) {
          auto& uses = by_value[u.value];
          if (uses.empty()) continue;
          for (const auto* other : uses) {
            if (other->parent != uses.front()->parent) {
              add(other->path, "V605",
                  "ID value '" + u.value + "' identifies different instances");
              break;
            }
          }
          uses.clear();
        }
      }

      detail::ContentModels models_;
      std::vector<Violation> violations_;
      std::vector<IdUse> id_uses_;
    };

  } // namespace

  ConformanceReport
  validate_instance(const xsd::Document& doc, const xml::Element& root) {
    return InstanceValidator(doc).run(root);
  }

} // namespace goossdm
