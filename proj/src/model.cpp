#include <goossdm/model.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <set>

namespace goossdm {

  namespace {

    constexpr std::array<std::string_view, 6> participation_names = {
        "1:1", "0:1", "1:M", "0:M", "0:X", "1:X"};

  } // namespace

  std::string
  render(const Diagnostic& d) {
    std::string out = d.span.file.empty() ? "<input>" : d.span.file;
    out += ":" + std::to_string(d.span.start.line) + ":" +
           std::to_string(d.span.start.column) + ": " +
           severity_name(d.severity) + "[" + d.code + "]: " + d.message;
    return out;
  }

  std::string_view
  to_string(Participation p) {
    return participation_names[static_cast<std::size_t>(p)];
  }

  std::optional<Participation>
  parse_participation(std::string_view text) {
    for (std::size_t i = 0; i < participation_names.size(); ++i) {
      if (participation_names[i] == text) return static_cast<Participation>(i);
    }
    return std::nullopt;
  }

  std::string
  to_string(const ConstraintTuple& t) {
    return "<" + std::string(to_string(t.p)) + "," + (t.ordered ? "1" : "0") +
           ">";
  }

  std::string_view
  to_string(NodeKind k) {
    switch (k) {
    case NodeKind::esg: return "ESG";
    case NodeKind::csg: return "CSG";
    case NodeKind::annotation: return "Annotation";
    }
    return "?";
  }

  void
  SchemaGraph::check(NodeRef ref) const {
    if (!contains(ref)) {
      throw Error("unknown-node", "node reference " +
                                      std::string(to_string(ref.kind)) + "#" +
                                      std::to_string(ref.index) +
                                      " does not resolve");
    }
  }

  bool
  SchemaGraph::contains(NodeRef ref) const {
    switch (ref.kind) {
    case NodeKind::esg: return ref.index < esgs.size();
    case NodeKind::csg: return ref.index < csgs.size();
    case NodeKind::annotation: return ref.index < annotations.size();
    }
    return false;
  }

  std::optional<NodeRef>
  SchemaGraph::find(std::string_view node_name) const {
    for (std::size_t i = 0; i < esgs.size(); ++i)
      if (esgs[i].name == node_name) return NodeRef{NodeKind::esg, i};
    for (std::size_t i = 0; i < csgs.size(); ++i)
      if (csgs[i].name == node_name) return NodeRef{NodeKind::csg, i};
    for (std::size_t i = 0; i < annotations.size(); ++i)
      if (annotations[i].name == node_name)
        return NodeRef{NodeKind::annotation, i};
    return std::nullopt;
  }

  std::optional<std::size_t>
  SchemaGraph::find_csg(std::string_view csg_name) const {
    for (std::size_t i = 0; i < csgs.size(); ++i)
      if (csgs[i].name == csg_name) return i;
    return std::nullopt;
  }

  const std::string&
  SchemaGraph::name_of(NodeRef ref) const {
    check(ref);
    switch (ref.kind) {
    case NodeKind::esg: return esgs[ref.index].name;
    case NodeKind::csg: return csgs[ref.index].name;
    case NodeKind::annotation: return annotations[ref.index].name;
    }
    return name;
  }

  int
  SchemaGraph::layer_of(NodeRef ref) const {
    check(ref);
    return ref.kind == NodeKind::csg ? csgs[ref.index].layer : 0;
  }

  std::vector<std::size_t>
  SchemaGraph::roots_of() const {
    if (csgs.empty()) throw Error("empty-schema", "schema has no CSG");
    int top = 0;
    for (const auto& c : csgs) top = std::max(top, c.layer);
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < csgs.size(); ++i)
      if (csgs[i].layer == top) roots.push_back(i);
    return roots;
  }

  std::vector<const ContainmentEdge*>
  SchemaGraph::members_of(std::size_t csg) const {
    check({NodeKind::csg, csg});
    std::vector<const ContainmentEdge*> out;
    for (const auto& e : containments)
      if (e.parent == csg) out.push_back(&e);
    std::stable_sort(out.begin(), out.end(),
                     [](const ContainmentEdge* a, const ContainmentEdge* b) {
                       return a->position < b->position;
                     });
    return out;
  }

  std::size_t
  SchemaGraph::containment_parent_count(std::size_t esg) const {
    check({NodeKind::esg, esg});
    std::set<std::size_t> parents;
    for (const auto& e : containments)
      if (e.child == NodeRef{NodeKind::esg, esg} && !e.is_reference)
        parents.insert(e.parent);
    return parents.size();
  }

  std::vector<std::vector<const ContainmentEdge*>>
  SchemaGraph::exclusive_groups(std::size_t csg) const {
    return exclusive_runs(members_of(csg), [](const ContainmentEdge* e) {
      return e->constraint;
    });
  }

  std::size_t
  SchemaGraph::association_parent(const AssociationEdge& edge) const {
    const int l = layer_of({NodeKind::csg, edge.left});
    const int r = layer_of({NodeKind::csg, edge.right});
    return l > r ? edge.left : edge.right;
  }

  ConnectorLayout
  SchemaGraph::connector_layout(const AssociationConnector& conn) const {
    if (conn.members.empty())
      throw Error("empty-connector", "connector " + conn.name +
                                         " has no members");
    std::size_t root_pos = 0;
    for (std::size_t i = 0; i < conn.members.size(); ++i) {
      const int li = layer_of({NodeKind::csg, conn.members[i].csg});
      const int lr = layer_of({NodeKind::csg, conn.members[root_pos].csg});
      if (li >= lr) root_pos = i;
    }
    ConnectorLayout layout;
    layout.root = conn.members[root_pos].csg;
    if (conn.context)
      layout.context = NestedPartner{conn.context->csg, conn.context->constraint};

    // Nesting walks outward from the root-side member: with the root written
    // rightmost this is right-to-left order. Equal distances favour the
    // right-hand member.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < conn.members.size(); ++i)
      if (i != root_pos) order.push_back(i);
    auto key = [&](std::size_t i) {
      const auto dist = i > root_pos ? i - root_pos : root_pos - i;
      return std::pair{dist, i > root_pos ? 0 : 1};
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return key(a) < key(b);
                     });
    for (auto i : order)
      layout.participants.push_back(
          {conn.members[i].csg, conn.members[i].constraint});
    return layout;
  }

  std::vector<std::size_t>
  SchemaGraph::bases_of(std::size_t csg) const {
    std::vector<std::size_t> out;
    for (const auto& l : links)
      if (l.derived == csg) out.push_back(l.base);
    return out;
  }

  bool
  SchemaGraph::is_link_base(std::size_t csg) const {
    return std::any_of(links.begin(), links.end(),
                       [&](const LinkEdge& l) { return l.base == csg; });
  }

} // namespace goossdm
