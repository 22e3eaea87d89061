#include <goossdm/instance.hpp>

#include <algorithm>
#include <random>
#include <set>

namespace goossdm {

  namespace {

    constexpr Participation plain_values[] = {Participation::one_one, Participation::zero_one,
                                              Participation::one_many, Participation::zero_many};

    class SchemaBuilder {
    public:
      SchemaBuilder(std::uint64_t seed, std::size_t budget) : rng_(seed), n_(budget) {}

      SchemaGraph
      build() {
        s_.name = "Random" + std::to_string(rng_() % 100000);
        const int top = 1 + static_cast<int>(below(std::min<std::size_t>(4, n_)));
        for (std::size_t i = 0; i < n_; ++i) {
          CsgNode c;
          c.name = "Csg" + std::to_string(i);
          c.layer = 1 + static_cast<int>(below(static_cast<std::uint64_t>(top)));
          if (chance(3)) c.group_occurs = ConstraintTuple{any_value(), chance(2)};
          s_.csgs.push_back(std::move(c));
        }
        const std::size_t e = n_ * 2 + 1 + below(3);
        for (std::size_t i = 0; i < e; ++i) s_.esgs.push_back({"Esg" + std::to_string(i), {}});
        const std::size_t a = below(3);
        for (std::size_t i = 0; i < a; ++i)
          s_.annotations.push_back({"Note" + std::to_string(i), {}});
        content_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) content_[i].insert(s_.csgs[i].name);

        for (std::size_t c = 0; c < n_; ++c) containments(c);
        associations();
        connectors();
        links();
        references();
        return std::move(s_);
      }

    private:
      std::uint64_t
      below(std::uint64_t n) {
        return n == 0 ? 0 : rng_() % n;
      }

      bool
      chance(std::uint64_t n) {
        return below(n) == 0;
      }

      Participation
      any_value() {
        return all_participations[below(6)];
      }

      Participation
      plain() {
        return plain_values[below(4)];
      }

      // φ order: layer first, then declaration index.
      bool
      lower(std::size_t a, std::size_t b) const {
        const int la = s_.csgs[a].layer;
        const int lb = s_.csgs[b].layer;
        return la != lb ? la < lb : a < b;
      }

      // Tuples for a list, with at most one contiguous exclusive run.
      std::vector<ConstraintTuple>
      tuples(std::size_t count) {
        std::vector<ConstraintTuple> out(count);
        for (auto& t : out) t = {plain(), chance(2)};
        if (count > 0 && chance(2)) {
          const auto start = below(count);
          const auto len = 1 + below(std::min<std::uint64_t>(3, count - start));
          const auto kind = chance(2) ? Participation::zero_excl : Participation::one_excl;
          for (auto i = start; i < start + len; ++i) out[i].p = kind;
        }
        return out;
      }

      bool
      claim(std::size_t host, const std::string& name) {
        return content_[host].insert(name).second;
      }

      void
      containments(std::size_t c) {
        struct Pending {
          NodeRef child;
          bool det = false;
          bool ref = false;
        };
        std::vector<Pending> list;
        const std::size_t esgs = below(4);
        for (std::size_t k = 0; k < esgs; ++k) {
          const std::size_t e = below(s_.esgs.size());
          if (!claim(c, s_.esgs[e].name)) continue;
          list.push_back({{NodeKind::esg, e}, chance(3), false});
        }
        for (std::size_t k = 0; k < 2; ++k) {
          if (!chance(3)) continue;
          std::vector<std::size_t> below_layer;
          for (std::size_t o = 0; o < n_; ++o)
            if (s_.csgs[o].layer + 1 == s_.csgs[c].layer) below_layer.push_back(o);
          if (below_layer.empty()) break;
          const auto child = below_layer[below(below_layer.size())];
          if (!claim(c, s_.csgs[child].name)) continue;
          list.push_back({{NodeKind::csg, child}, false, false});
        }
        if (chance(6)) {
          const std::size_t e = below(s_.esgs.size());
          if (claim(c, s_.esgs[e].name)) list.push_back({{NodeKind::esg, e}, false, true});
        }
        if (chance(8)) {
          std::vector<std::size_t> targets;
          for (std::size_t o = 0; o < n_; ++o)
            if (lower(o, c)) targets.push_back(o);
          if (!targets.empty()) {
            const auto t = targets[below(targets.size())];
            if (claim(c, s_.csgs[t].name)) list.push_back({{NodeKind::csg, t}, false, true});
          }
        }
        auto ts = tuples(list.size());
        std::size_t pos = 0;
        for (std::size_t i = 0; i < list.size(); ++i) {
          ContainmentEdge edge;
          edge.child = list[i].child;
          edge.parent = c;
          edge.constraint = ts[i];
          edge.is_determinant = list[i].det;
          edge.is_reference = list[i].ref;
          edge.position = pos++;
          s_.containments.push_back(edge);
        }
        if (!s_.annotations.empty() && chance(4)) {
          const std::size_t an = below(s_.annotations.size());
          if (claim(c, s_.annotations[an].name)) {
            ContainmentEdge edge;
            edge.child = {NodeKind::annotation, an};
            edge.parent = c;
            edge.constraint = {Participation::one_one, chance(2)};
            edge.position = pos++;
            s_.containments.push_back(edge);
          }
        }
      }

      void
      associations() {
        for (std::size_t p = 0; p < n_; ++p) {
          if (!chance(3)) continue;
          std::vector<std::size_t> children;
          for (std::size_t c = 0; c < n_; ++c) {
            if (c == p) continue;
            const int d = s_.csgs[p].layer - s_.csgs[c].layer;
            const bool ok = d == 1 || (d == 0 && c < p);
            if (ok && chance(3) && claim(p, s_.csgs[c].name)) children.push_back(c);
          }
          const auto ts = tuples(children.size());
          for (std::size_t i = 0; i < children.size(); ++i) {
            AssociationEdge a;
            const auto c = children[i];
            if (s_.csgs[c].layer == s_.csgs[p].layer) {
              a.left = c;
              a.right = p;
            } else if (chance(2)) {
              a.left = c;
              a.right = p;
            } else {
              a.left = p;
              a.right = c;
            }
            a.constraint = ts[i];
            s_.associations.push_back(a);
          }
        }
      }

      void
      connectors() {
        const std::size_t count = n_ >= 3 ? below(3) : 0;
        for (std::size_t k = 0; k < count; ++k) {
          const std::size_t root = below(n_);
          std::vector<std::size_t> lowers;
          for (std::size_t o = 0; o < n_; ++o)
            if (lower(o, root)) lowers.push_back(o);
          if (lowers.empty()) continue;
          std::optional<std::size_t> context;
          std::size_t host = root;
          if (chance(2)) {
            std::vector<std::size_t> ctx;
            for (auto o : lowers) {
              std::size_t smaller = 0;
              for (auto q : lowers) smaller += lower(q, o) ? 1 : 0;
              if (smaller > 0) ctx.push_back(o);
            }
            if (!ctx.empty()) {
              const auto c = ctx[below(ctx.size())];
              if (claim(root, s_.csgs[c].name)) {
                context = c;
                host = c;
              }
            }
          }
          std::vector<std::size_t> parts;
          for (std::size_t o = 0; o < n_; ++o) {
            if (!lower(o, host) || o == root || (context && o == *context)) continue;
            if (chance(2) && claim(host, s_.csgs[o].name)) parts.push_back(o);
          }
          if (parts.empty()) continue;
          AssociationConnector conn;
          conn.name = "Conn" + std::to_string(s_.connectors.size());
          // model order puts the root last; outward order is the reverse.
          const auto ts = tuples(parts.size());
          for (std::size_t i = parts.size(); i > 0; --i)
            conn.members.push_back({parts[i - 1], ts[i - 1], {}});
          conn.members.push_back({root, {any_value(), chance(2)}, {}});
          if (context) conn.context = ConnectorMember{*context, {any_value(), chance(2)}, {}};
          s_.connectors.push_back(std::move(conn));
        }
      }

      void
      links() {
        for (std::size_t d = 0; d < n_; ++d) {
          if (!chance(6)) continue;
          std::vector<std::size_t> bases;
          for (std::size_t b = 0; b < n_; ++b)
            if (s_.csgs[b].layer + 1 == s_.csgs[d].layer) bases.push_back(b);
          if (bases.empty()) continue;
          s_.links.push_back({bases[below(bases.size())], d, {}});
        }
      }

      void
      references() {
        const std::size_t count = below(3);
        for (std::size_t k = 0; k < count; ++k) {
          ReferenceEdge r;
          if (chance(2)) {
            const auto src = below(n_);
            std::vector<std::size_t> targets;
            for (std::size_t o = 0; o < n_; ++o)
              if (lower(o, src)) targets.push_back(o);
            if (targets.empty()) continue;
            const auto t = targets[below(targets.size())];
            if (!claim(src, s_.csgs[t].name)) continue;
            r.source = {NodeKind::csg, src};
            r.target = {NodeKind::csg, t};
          } else {
            const auto src = below(s_.esgs.size());
            const auto t = below(s_.esgs.size());
            if (src == t) continue;
            // Every CSG holding the source gains a ref particle.
            std::vector<std::size_t> sites;
            for (const auto& e : s_.containments)
              if (e.child == NodeRef{NodeKind::esg, src} && !e.is_reference)
                sites.push_back(e.parent);
            bool free = true;
            for (auto site : sites) free = free && !content_[site].count(s_.esgs[t].name);
            if (!free) continue;
            for (auto site : sites) content_[site].insert(s_.esgs[t].name);
            r.source = {NodeKind::esg, src};
            r.target = {NodeKind::esg, t};
          }
          s_.references.push_back(r);
        }
      }

      std::mt19937_64 rng_;
      std::size_t n_;
      SchemaGraph s_;
      std::vector<std::set<std::string>> content_;
    };

  } // namespace

  SchemaGraph
  random_schema(std::uint64_t seed, std::size_t budget) {
    if (budget < 1) throw Error("invalid-budget", "random_schema needs at least one CSG");
    return SchemaBuilder(seed, budget).build();
  }

} // namespace goossdm
