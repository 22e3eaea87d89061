#include <goossdm/xml.hpp>

#include <expat.h>

#include <climits>
#include <memory>

namespace goossdm::xml {

  const std::string*
  Element::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }

  void
  Element::append_child(Element child) {
    children.push_back(std::move(child));
    texts.emplace_back();
  }

  void
  Element::append_text(std::string_view text) {
    texts.back() += text;
  }

  std::string
  Element::text() const {
    std::string out;
    for (const auto& t : texts) out += t;
    return out;
  }

  bool
  Element::has_significant_text() const {
    for (const auto& t : texts)
      if (!is_whitespace(t)) return true;
    return false;
  }

  bool
  is_whitespace(std::string_view text) {
    for (char c : text)
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return false;
    return true;
  }

  namespace {

    struct Builder {
      std::vector<Element> stack;
      std::optional<Element> root;
      XML_Parser parser = nullptr;
    };

    void XMLCALL
    on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
      auto* b = static_cast<Builder*>(data);
      Element e;
      e.name = name;
      e.line = XML_GetCurrentLineNumber(b->parser);
      for (std::size_t i = 0; attrs[i]; i += 2) e.attributes.emplace_back(attrs[i], attrs[i + 1]);
      b->stack.push_back(std::move(e));
    }

    void XMLCALL
    on_end(void* data, const XML_Char*) {
      auto* b = static_cast<Builder*>(data);
      Element e = std::move(b->stack.back());
      b->stack.pop_back();
      if (b->stack.empty())
        b->root = std::move(e);
      else
        b->stack.back().append_child(std::move(e));
    }

    void XMLCALL
    on_text(void* data, const XML_Char* s, int len) {
      auto* b = static_cast<Builder*>(data);
      if (!b->stack.empty())
        b->stack.back().append_text(std::string_view(s, static_cast<std::size_t>(len)));
    }

    struct ParserDeleter {
      void
      operator()(XML_ParserStruct* p) const {
        XML_ParserFree(p);
      }
    };

    void
    write(std::string& out, const Element& e, int depth) {
      const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
      out += indent;
      out += '<' + e.name;
      for (const auto& [k, v] : e.attributes) out += ' ' + k + "=\"" + escape(v, true) + '"';
      const bool inline_text = e.has_significant_text();
      if (e.children.empty() && !inline_text) {
        out += "/>\n";
        return;
      }
      out += '>';
      if (inline_text) {
        // Mixed or leaf content: no added whitespace.
        std::string body;
        for (std::size_t i = 0; i < e.children.size(); ++i) {
          body += escape(e.texts[i]);
          std::string child;
          write(child, e.children[i], 0);
          if (!child.empty() && child.back() == '\n') child.pop_back();
          body += child;
        }
        body += escape(e.texts.back());
        out += body;
      } else {
        out += '\n';
        for (const auto& c : e.children) write(out, c, depth + 1);
        out += indent;
      }
      out += "</" + e.name + ">\n";
    }

  } // namespace

  ParseResult
  parse(std::string_view text, const std::string& file) {
    ParseResult result;
    std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
    Builder builder;
    builder.parser = parser.get();
    XML_SetUserData(parser.get(), &builder);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);

    bool ok = text.size() <= static_cast<std::size_t>(INT_MAX);
    if (ok) {
      ok = XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()),
                     XML_TRUE) == XML_STATUS_OK;
    }
    if (!ok) {
      const SourcePos pos{XML_GetCurrentLineNumber(parser.get()),
                          XML_GetCurrentColumnNumber(parser.get()) + 1};
      result.diagnostics.push_back(make_error(
          "E401",
          std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
          {file, pos, pos}));
      return result;
    }
    result.root = std::move(builder.root);
    return result;
  }

  std::string
  escape(std::string_view text, bool attribute) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
      switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute)
          out += "&quot;";
        else
          out += c;
        break;
      default: out += c;
      }
    }
    return out;
  }

  std::string
  serialize(const Element& root) {
    std::string out;
    write(out, root, 0);
    return out;
  }

} // namespace goossdm::xml
