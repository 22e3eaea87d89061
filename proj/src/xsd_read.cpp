#include <goossdm/xml.hpp>
#include <goossdm/xsd.hpp>

#include <charconv>
#include <initializer_list>

namespace goossdm::xsd {

  namespace {

    // Thrown inside the reader and turned into a single E402.
    struct Unsupported {
      std::string message;
      std::size_t line;
    };

    [[noreturn]] void
    reject(const xml::Element& e, const std::string& message) {
      throw Unsupported{message, e.line};
    }

    void
    only_attributes(const xml::Element& e, std::initializer_list<std::string_view> allowed) {
      for (const auto& [k, v] : e.attributes) {
        bool ok = false;
        for (auto a : allowed) ok = ok || k == a;
        if (!ok) reject(e, "unsupported attribute '" + k + "' on " + e.name);
      }
    }

    void
    no_text(const xml::Element& e) {
      if (e.has_significant_text()) reject(e, "unexpected character content in " + e.name);
    }

    std::uint32_t
    parse_count(const xml::Element& e, const std::string& value, bool allow_unbounded) {
      if (allow_unbounded && value == "unbounded") return Occurs::unbounded;
      std::uint32_t n = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || ptr != value.data() + value.size() || value.empty() ||
          n == Occurs::unbounded)
        reject(e, "invalid occurrence value '" + value + "'");
      return n;
    }

    Occurs
    read_occurs(const xml::Element& e) {
      Occurs o;
      if (auto* v = e.attribute("minOccurs")) o.min = parse_count(e, *v, false);
      if (auto* v = e.attribute("maxOccurs")) o.max = parse_count(e, *v, true);
      return o;
    }

    Group
    read_group(const xml::Element& e);

    Element
    read_element(const xml::Element& e, bool global);

    Particle
    read_particle(const xml::Element& e) {
      if (e.name == "xs:element") return Particle{read_element(e, false)};
      return to_particle(read_group(e));
    }

    Group
    read_group(const xml::Element& e) {
      only_attributes(e, {"minOccurs", "maxOccurs"});
      no_text(e);
      std::vector<Particle> children;
      for (const auto& c : e.children) {
        if (c.name != "xs:element" && c.name != "xs:sequence" && c.name != "xs:all" &&
            c.name != "xs:choice")
          reject(c, "unsupported particle " + c.name);
        children.push_back(read_particle(c));
      }
      const Occurs occurs = read_occurs(e);
      if (e.name == "xs:choice") return Choice{occurs, std::move(children)};
      if (e.name == "xs:sequence")
        return Compositor{CompositorKind::sequence, occurs, std::move(children)};
      if (e.name == "xs:all") return Compositor{CompositorKind::all, occurs, std::move(children)};
      reject(e, "expected a model group, found " + e.name);
    }

    bool
    is_group(const xml::Element& e) {
      return e.name == "xs:sequence" || e.name == "xs:all" || e.name == "xs:choice";
    }

    ComplexType
    read_complex_type(const xml::Element& e, bool global) {
      if (global)
        only_attributes(e, {"name", "mixed"});
      else
        only_attributes(e, {"mixed"});
      no_text(e);
      ComplexType t;
      if (auto* n = e.attribute("name")) t.name = *n;
      if (global && !t.name) reject(e, "global complexType without a name");
      if (auto* m = e.attribute("mixed")) {
        if (*m == "true" || *m == "1")
          t.mixed = true;
        else if (*m != "false" && *m != "0")
          reject(e, "invalid mixed value '" + *m + "'");
      }
      if (e.children.size() > 1) reject(e, "complexType with more than one content child");
      if (e.children.empty()) return t;
      const auto& c = e.children.front();
      if (is_group(c)) {
        t.content = read_group(c);
      } else if (c.name == "xs:complexContent") {
        only_attributes(c, {});
        no_text(c);
        if (c.children.size() != 1 || c.children.front().name != "xs:extension")
          reject(c, "complexContent must hold exactly one xs:extension");
        const auto& x = c.children.front();
        only_attributes(x, {"base"});
        no_text(x);
        Extension ext;
        if (auto* b = x.attribute("base"))
          ext.base = *b;
        else
          reject(x, "xs:extension without a base");
        if (x.children.size() > 1) reject(x, "xs:extension with more than one group");
        if (x.children.size() == 1) {
          if (!is_group(x.children.front()))
            reject(x.children.front(), "unsupported construct " + x.children.front().name);
          ext.added = read_group(x.children.front());
        }
        t.content = std::move(ext);
      } else {
        reject(c, "unsupported construct " + c.name);
      }
      return t;
    }

    Element
    read_element(const xml::Element& e, bool global) {
      if (global)
        only_attributes(e, {"name", "type"});
      else
        only_attributes(e, {"name", "type", "ref", "minOccurs", "maxOccurs"});
      no_text(e);
      Element el;
      if (auto* n = e.attribute("name")) el.name = *n;
      if (auto* t = e.attribute("type")) el.type_name = *t;
      if (auto* r = e.attribute("ref")) el.ref = *r;
      if (el.ref && !el.name.empty()) reject(e, "element carries both name and ref");
      if (!el.ref && el.name.empty()) reject(e, "element without name or ref");
      el.occurs = read_occurs(e);
      if (e.children.size() > 1) reject(e, "element with more than one content child");
      if (e.children.size() == 1) {
        if (e.children.front().name != "xs:complexType")
          reject(e.children.front(), "unsupported construct " + e.children.front().name);
        el.complex_type = read_complex_type(e.children.front(), false);
      }
      return el;
    }

  } // namespace

  ReadResult
  read(std::string_view text, const std::string& file) {
    ReadResult result;
    auto parsed = xml::parse(text, file);
    if (!parsed.root) {
      result.diagnostics = std::move(parsed.diagnostics);
      return result;
    }
    const xml::Element& root = *parsed.root;
    try {
      if (root.name != "xs:schema") reject(root, "root element must be xs:schema");
      only_attributes(root, {"xmlns:xs"});
      auto* ns = root.attribute("xmlns:xs");
      if (!ns || *ns != namespace_uri) reject(root, "xs prefix must be bound to the XSD namespace");
      no_text(root);
      Document doc;
      for (const auto& c : root.children) {
        if (c.name == "xs:complexType")
          doc.types.push_back(read_complex_type(c, true));
        else if (c.name == "xs:element")
          doc.elements.push_back(read_element(c, true));
        else
          reject(c, "unsupported top-level construct " + c.name);
      }
      result.document = std::move(doc);
    } catch (const Unsupported& u) {
      const SourcePos pos{u.line == 0 ? 1 : u.line, 1};
      result.diagnostics.push_back(make_error("E402", "unsupported XSD: " + u.message, {file, pos, pos}));
    }
    return result;
  }

} // namespace goossdm::xsd
