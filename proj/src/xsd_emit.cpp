#include <goossdm/xml.hpp>
#include <goossdm/xsd.hpp>

#include <set>

namespace goossdm::xsd {

  std::string
  to_string(const Occurs& o) {
    return "(" + std::to_string(o.min) + "," +
           (o.is_unbounded() ? std::string("unbounded") : std::to_string(o.max)) + ")";
  }

  std::string_view
  to_string(CompositorKind k) {
    return k == CompositorKind::sequence ? "sequence" : "all";
  }

  const ComplexType*
  Document::find_type(std::string_view name) const {
    for (const auto& t : types)
      if (t.name && *t.name == name) return &t;
    return nullptr;
  }

  const Element*
  Document::find_element(std::string_view name) const {
    for (const auto& e : elements)
      if (e.name == name) return &e;
    return nullptr;
  }

  namespace {

    class InvariantChecker {
    public:
      explicit InvariantChecker(const Document& doc) : doc_(doc) {}

      std::vector<std::string>
      run() {
        std::set<std::string> names;
        for (const auto& t : doc_.types) {
          if (!t.name || t.name->empty())
            problems_.push_back("global complexType without a name");
          else if (!names.insert(*t.name).second)
            problems_.push_back("duplicate complexType '" + *t.name + "'");
          complex_type(t);
        }
        names.clear();
        for (const auto& e : doc_.elements) {
          if (e.ref) problems_.push_back("global element cannot be a ref");
          if (!e.occurs.is_default())
            problems_.push_back("global element '" + e.name + "' carries occurs");
          if (!names.insert(e.name).second)
            problems_.push_back("duplicate global element '" + e.name + "'");
          element(e);
        }
        return std::move(problems_);
      }

    private:
      void
      occurs(const Occurs& o, const std::string& where) {
        if (o.max == 0 || o.min > o.max)
          problems_.push_back("invalid occurs " + to_string(o) + " on " + where);
      }

      void
      element(const Element& e) {
        const std::string where = "element '" + (e.ref ? *e.ref : e.name) + "'";
        occurs(e.occurs, where);
        const int set = int(e.type_name.has_value()) + int(e.ref.has_value()) +
                        int(e.complex_type.has_value());
        if (set > 1) problems_.push_back(where + " mixes type, ref and inline content");
        if (e.ref) {
          if (!doc_.find_element(*e.ref))
            problems_.push_back("unresolved ref '" + *e.ref + "'");
        } else if (e.name.empty()) {
          problems_.push_back("element without a name");
        }
        if (e.type_name && *e.type_name != id_type && !doc_.find_type(*e.type_name))
          problems_.push_back("unresolved type '" + *e.type_name + "'");
        if (e.complex_type) {
          if (e.complex_type->name)
            problems_.push_back("anonymous complexType of " + where + " has a name");
          complex_type(*e.complex_type);
        }
      }

      void
      complex_type(const ComplexType& t) {
        if (auto* g = std::get_if<Group>(&t.content)) {
          group(*g);
        } else if (auto* x = std::get_if<Extension>(&t.content)) {
          if (!doc_.find_type(x->base))
            problems_.push_back("unresolved extension base '" + x->base + "'");
          if (x->added) group(*x->added);
        }
      }

      void
      group(const Group& g) {
        occurs(occurs_of(g), "compositor");
        const bool is_all = std::holds_alternative<Compositor>(g) &&
                            std::get<Compositor>(g).kind == CompositorKind::all;
        for (const auto& p : children_of(g)) {
          if (auto* e = std::get_if<Element>(&p.node)) {
            if (is_all && e->occurs.max > 1)
              problems_.push_back("xs:all child '" + e->name + "' repeats");
            element(*e);
          } else if (auto* c = std::get_if<Compositor>(&p.node)) {
            group(*c);
          } else {
            group(std::get<Choice>(p.node));
          }
        }
      }

      const Document& doc_;
      std::vector<std::string> problems_;
    };

    struct Writer {
      std::string out;
      int depth = 0;

      void
      indent() {
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
      }

      static std::string
      attr(std::string_view key, std::string_view value) {
        return " " + std::string(key) + "=\"" + xml::escape(value, true) + "\"";
      }

      static std::string
      occurs_attrs(const Occurs& o) {
        std::string s;
        if (o.min != 1) s += attr("minOccurs", std::to_string(o.min));
        if (o.max != 1)
          s += attr("maxOccurs", o.is_unbounded() ? std::string("unbounded")
                                                  : std::to_string(o.max));
        return s;
      }

      void
      open(const std::string& tag, const std::string& attrs, bool empty) {
        indent();
        out += "<" + tag + attrs + (empty ? " />\n" : ">\n");
        if (!empty) ++depth;
      }

      void
      close(const std::string& tag) {
        --depth;
        indent();
        out += "</" + tag + ">\n";
      }

      void
      element(const Element& e) {
        std::string attrs;
        if (!e.name.empty()) attrs += attr("name", e.name);
        if (e.type_name) attrs += attr("type", *e.type_name);
        if (e.ref) attrs += attr("ref", *e.ref);
        attrs += occurs_attrs(e.occurs);
        if (!e.complex_type) {
          open("xs:element", attrs, true);
          return;
        }
        open("xs:element", attrs, false);
        complex_type(*e.complex_type);
        close("xs:element");
      }

      void
      complex_type(const ComplexType& t) {
        std::string attrs;
        if (t.name) attrs += attr("name", *t.name);
        if (t.mixed) attrs += attr("mixed", "true");
        if (std::holds_alternative<std::monostate>(t.content)) {
          open("xs:complexType", attrs, true);
          return;
        }
        open("xs:complexType", attrs, false);
        if (auto* g = std::get_if<Group>(&t.content)) {
          group(*g);
        } else {
          const auto& x = std::get<Extension>(t.content);
          open("xs:complexContent", "", false);
          if (x.added) {
            open("xs:extension", attr("base", x.base), false);
            group(*x.added);
            close("xs:extension");
          } else {
            open("xs:extension", attr("base", x.base), true);
          }
          close("xs:complexContent");
        }
        close("xs:complexType");
      }

      void
      group(const Group& g) {
        std::string tag = "xs:choice";
        if (auto* c = std::get_if<Compositor>(&g))
          tag = c->kind == CompositorKind::sequence ? "xs:sequence" : "xs:all";
        const auto& children = children_of(g);
        const std::string attrs = occurs_attrs(occurs_of(g));
        if (children.empty()) {
          open(tag, attrs, true);
          return;
        }
        open(tag, attrs, false);
        for (const auto& p : children) particle(p);
        close(tag);
      }

      void
      particle(const Particle& p) {
        if (auto* e = std::get_if<Element>(&p.node))
          element(*e);
        else if (auto* c = std::get_if<Compositor>(&p.node))
          group(*c);
        else
          group(std::get<Choice>(p.node));
      }
    };

  } // namespace

  std::vector<std::string>
  check_invariants(const Document& doc) {
    return InvariantChecker(doc).run();
  }

  std::string
  emit(const Document& doc) {
    const auto problems = check_invariants(doc);
    if (!problems.empty()) throw Error("unresolved-ref", "cannot emit XSD: " + problems.front());
    Writer w;
    const std::string root_attrs = Writer::attr("xmlns:xs", namespace_uri);
    if (doc.types.empty() && doc.elements.empty()) {
      w.open("xs:schema", root_attrs, true);
      return w.out;
    }
    w.open("xs:schema", root_attrs, false);
    for (const auto& t : doc.types) w.complex_type(t);
    for (const auto& e : doc.elements) w.element(e);
    w.close("xs:schema");
    return w.out;
  }

} // namespace goossdm::xsd
