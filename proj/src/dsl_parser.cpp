#include <goossdm/dsl.hpp>

#include <array>
#include <cctype>
#include <charconv>

namespace goossdm::dsl {

  namespace {

    enum class Tok {
      ident,
      integer,
      lbrace,
      rbrace,
      semi,
      lt,
      gt,
      comma,
      colon,
      at,
      dashdash,
      arrow,
      invalid,
      eof,
    };

    struct Token {
      Tok kind = Tok::eof;
      std::string text;
      SourceSpan span;
    };

    constexpr std::array<std::string_view, 13> keywords = {
        "schema",  "esg",       "annotation", "csg",     "group",
        "contains", "det",      "ref",        "associate", "connector",
        "member",  "context",   "link"};

    std::string
    printable(std::string_view raw) {
      static constexpr char hex[] = "0123456789abcdef";
      std::string out = "'";
      for (unsigned char c : raw) {
        if (c >= 0x20 && c < 0x7f && c != '\'') {
          out += static_cast<char>(c);
        } else {
          out += "\\x";
          out += hex[c >> 4];
          out += hex[c & 0xf];
        }
      }
      return out + "'";
    }

    std::string
    describe(const Token& t) {
      switch (t.kind) {
      case Tok::eof: return "end of input";
      case Tok::invalid: return "invalid character";
      default: return "'" + t.text + "'";
      }
    }

    class Lexer {
    public:
      Lexer(std::string_view src, const std::string& file)
          : src_(src), file_(file) {}

      std::vector<Token>
      run() {
        std::vector<Token> out;
        for (;;) {
          skip_trivia();
          if (i_ >= src_.size()) {
            Token t;
            t.kind = Tok::eof;
            t.span = {file_, pos_, pos_};
            out.push_back(std::move(t));
            return out;
          }
          out.push_back(next());
        }
      }

    private:
      void
      advance() {
        if (src_[i_] == '\n') {
          ++pos_.line;
          pos_.column = 1;
        } else {
          ++pos_.column;
        }
        ++i_;
      }

      void
      skip_trivia() {
        while (i_ < src_.size()) {
          const char c = src_[i_];
          if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
          } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
            while (i_ < src_.size() && src_[i_] != '\n') advance();
          } else {
            return;
          }
        }
      }

      static bool
      ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
      }

      static bool
      ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
      }

      Token
      next() {
        Token t;
        const SourcePos start = pos_;
        SourcePos last = pos_;
        const std::size_t begin = i_;
        auto take = [&] {
          last = pos_;
          advance();
        };
        const char c = src_[i_];
        if (ident_start(c)) {
          while (i_ < src_.size() && ident_char(src_[i_])) take();
          t.kind = Tok::ident;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
          while (i_ < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[i_])))
            take();
          t.kind = Tok::integer;
        } else {
          take();
          switch (c) {
          case '{': t.kind = Tok::lbrace; break;
          case '}': t.kind = Tok::rbrace; break;
          case ';': t.kind = Tok::semi; break;
          case '<': t.kind = Tok::lt; break;
          case '>': t.kind = Tok::gt; break;
          case ',': t.kind = Tok::comma; break;
          case ':': t.kind = Tok::colon; break;
          case '@': t.kind = Tok::at; break;
          case '-':
            if (i_ < src_.size() && (src_[i_] == '-' || src_[i_] == '>')) {
              t.kind = src_[i_] == '-' ? Tok::dashdash : Tok::arrow;
              take();
            } else {
              t.kind = Tok::invalid;
            }
            break;
          default: t.kind = Tok::invalid; break;
          }
        }
        t.text = std::string(src_.substr(begin, i_ - begin));
        t.span = {file_, start, last};
        return t;
      }

      std::string_view src_;
      const std::string& file_;
      std::size_t i_ = 0;
      SourcePos pos_;
    };

    SourceSpan
    join(const SourceSpan& a, const SourceSpan& b) {
      return {a.file, a.start, b.end};
    }

    class Parser {
    public:
      Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
          : toks_(std::move(tokens)), diags_(diags) {}

      SyntaxTree
      parse_schema() {
        SyntaxTree tree;
        tree.span = peek().span;
        if (!expect_keyword("schema")) {
          synchronize();
          return tree;
        }
        if (auto id = expect_ident("schema name")) tree.name = *id;
        if (!expect(Tok::lbrace, "'{'")) return tree;
        while (peek().kind != Tok::rbrace && peek().kind != Tok::eof) {
          const std::size_t before = i_;
          parse_item(tree);
          if (i_ == before) bump();
        }
        const Token& close = peek();
        expect(Tok::rbrace, "'}'");
        tree.span = join(tree.span, close.span);
        if (peek().kind != Tok::eof) unexpected(peek(), "end of input");
        return tree;
      }

    private:
      const Token&
      peek(std::size_t ahead = 0) const {
        const std::size_t j = std::min(i_ + ahead, toks_.size() - 1);
        return toks_[j];
      }

      const Token&
      bump() {
        const Token& t = toks_[i_];
        if (i_ + 1 < toks_.size()) ++i_;
        return t;
      }

      bool
      at_keyword(std::string_view kw) const {
        return peek().kind == Tok::ident && peek().text == kw;
      }

      void
      unexpected(const Token& t, const std::string& wanted) {
        diags_.push_back(make_error(
            "E101", "unexpected " + describe(t) + ", expected " + wanted,
            t.span));
        failed_ = true;
      }

      bool
      expect(Tok kind, const std::string& wanted) {
        if (peek().kind == kind) {
          bump();
          return true;
        }
        unexpected(peek(), wanted);
        return false;
      }

      bool
      expect_keyword(std::string_view kw) {
        if (at_keyword(kw)) {
          bump();
          return true;
        }
        unexpected(peek(), "'" + std::string(kw) + "'");
        return false;
      }

      std::optional<Ident>
      expect_ident(const std::string& what) {
        const Token& t = peek();
        if (t.kind == Tok::ident && !is_keyword(t.text)) {
          bump();
          return Ident{t.text, t.span};
        }
        unexpected(t, what);
        return std::nullopt;
      }

      // Skips to the end of the current declaration: a ';' at depth zero, a
      // block opened while skipping, or the '}' that closes the enclosing
      // block (left in place).
      void
      synchronize() {
        int depth = 0;
        while (peek().kind != Tok::eof) {
          const Tok k = peek().kind;
          if (k == Tok::lbrace) {
            ++depth;
          } else if (k == Tok::rbrace) {
            if (depth == 0) return;
            if (--depth == 0) {
              bump();
              return;
            }
          } else if (k == Tok::semi && depth == 0) {
            bump();
            return;
          }
          bump();
        }
      }

      std::optional<TupleSyntax>
      parse_tuple() {
        const Token& open = bump(); // '<'
        TupleSyntax tuple;
        bool valid = true;

        const Token& first = peek();
        if (first.kind != Tok::integer && first.kind != Tok::ident) {
          diags_.push_back(make_error(
              "E102", "invalid participation value " + describe(first),
              first.span));
          failed_ = true;
          return std::nullopt;
        }
        std::string text = bump().text;
        SourceSpan pspan = first.span;
        if (peek().kind == Tok::colon) {
          text += bump().text;
          if (peek().kind == Tok::integer || peek().kind == Tok::ident) {
            pspan = join(pspan, peek().span);
            text += bump().text;
          }
        }
        if (auto p = parse_participation(text)) {
          tuple.value.p = *p;
        } else {
          diags_.push_back(make_error(
              "E102",
              "invalid participation value '" + text +
                  "' (expected one of 1:1, 0:1, 1:M, 0:M, 0:X, 1:X)",
              pspan));
          failed_ = true;
          valid = false;
        }
        if (!expect(Tok::comma, "','")) return std::nullopt;
        const Token& theta = peek();
        if (theta.kind == Tok::integer && (theta.text == "0" || theta.text == "1")) {
          tuple.value.ordered = theta.text == "1";
          bump();
        } else if (theta.kind == Tok::integer || theta.kind == Tok::ident) {
          diags_.push_back(make_error(
              "E103", "invalid ordering value '" + theta.text +
                          "' (expected 0 or 1)",
              theta.span));
          failed_ = true;
          valid = false;
          bump();
        } else {
          unexpected(theta, "ordering value 0 or 1");
          return std::nullopt;
        }
        const Token& close = peek();
        if (!expect(Tok::gt, "'>'")) return std::nullopt;
        tuple.span = join(open.span, close.span);
        if (!valid) return std::nullopt;
        return tuple;
      }

      std::optional<TupleSyntax>
      optional_tuple() {
        if (peek().kind == Tok::lt) return parse_tuple();
        return std::nullopt;
      }

      // Runs `body`; on failure resynchronizes and drops the declaration.
      template <typename F>
      void
      guarded(F body) {
        failed_ = false;
        body();
        if (failed_) synchronize();
      }

      void
      parse_item(SyntaxTree& tree) {
        const Token& start = peek();
        if (start.kind != Tok::ident) {
          unexpected(start, "a declaration");
          synchronize();
          return;
        }
        const std::string kw = start.text;
        if (kw == "esg" || kw == "annotation") {
          guarded([&] {
            bump();
            auto id = expect_ident(kw + " name");
            if (!id) return;
            const Token& end = peek();
            if (!expect(Tok::semi, "';'")) return;
            const SourceSpan span = join(start.span, end.span);
            if (kw == "esg")
              tree.items.emplace_back(EsgDecl{*id, span});
            else
              tree.items.emplace_back(AnnotationDecl{*id, span});
          });
        } else if (kw == "csg") {
          parse_csg(tree);
        } else if (kw == "associate") {
          guarded([&] {
            bump();
            AssociateDecl a;
            auto l = expect_ident("CSG name");
            if (!l) return;
            if (!expect(Tok::dashdash, "'--'")) return;
            auto r = expect_ident("CSG name");
            if (!r) return;
            a.left = *l;
            a.right = *r;
            a.tuple = optional_tuple();
            if (failed_) return;
            const Token& end = peek();
            if (!expect(Tok::semi, "';'")) return;
            a.span = join(start.span, end.span);
            tree.items.emplace_back(std::move(a));
          });
        } else if (kw == "connector") {
          parse_connector(tree);
        } else if (kw == "link" || kw == "ref") {
          guarded([&] {
            bump();
            auto a = expect_ident("name");
            if (!a) return;
            if (!expect(Tok::arrow, "'->'")) return;
            auto b = expect_ident("name");
            if (!b) return;
            const Token& end = peek();
            if (!expect(Tok::semi, "';'")) return;
            const SourceSpan span = join(start.span, end.span);
            if (kw == "link")
              tree.items.emplace_back(LinkDecl{*a, *b, span});
            else
              tree.items.emplace_back(RefDecl{*a, *b, span});
          });
        } else {
          unexpected(start, "a declaration");
          synchronize();
        }
      }

      void
      parse_csg(SyntaxTree& tree) {
        const Token& start = peek();
        CsgDecl csg;
        bool header_ok = false;
        guarded([&] {
          bump();
          auto id = expect_ident("CSG name");
          if (!id) return;
          csg.name = *id;
          if (!expect(Tok::at, "'@layer'")) return;
          if (!at_keyword("layer")) {
            unexpected(peek(), "'layer'");
            return;
          }
          bump();
          const Token& num = peek();
          if (num.kind != Tok::integer) {
            unexpected(num, "layer number");
            return;
          }
          long value = 0;
          auto [ptr, ec] = std::from_chars(
              num.text.data(), num.text.data() + num.text.size(), value);
          if (ec != std::errc() || value > 1'000'000) {
            diags_.push_back(
                make_error("E101", "layer number out of range", num.span));
            failed_ = true;
            return;
          }
          csg.layer = value;
          csg.layer_span = num.span;
          bump();
          if (at_keyword("group")) {
            bump();
            if (peek().kind != Tok::lt) {
              unexpected(peek(), "'<'");
              return;
            }
            csg.group = parse_tuple();
            if (failed_) return;
          }
          if (!expect(Tok::lbrace, "'{'")) return;
          header_ok = true;
        });
        if (!header_ok) return;

        while (peek().kind != Tok::rbrace && peek().kind != Tok::eof) {
          const std::size_t before = i_;
          const Token& mstart = peek();
          guarded([&] {
            if (!expect_keyword("contains")) return;
            MemberDecl m;
            if (at_keyword("det")) {
              bump();
              m.determinant = true;
            }
            if (at_keyword("ref")) {
              bump();
              m.reference = true;
            }
            auto id = expect_ident("member name");
            if (!id) return;
            m.name = *id;
            m.tuple = optional_tuple();
            if (failed_) return;
            const Token& end = peek();
            if (!expect(Tok::semi, "';'")) return;
            m.span = join(mstart.span, end.span);
            csg.members.push_back(std::move(m));
          });
          if (i_ == before) bump();
        }
        const Token& close = peek();
        if (close.kind != Tok::rbrace) {
          unexpected(close, "'}'");
          return;
        }
        bump();
        csg.span = join(start.span, close.span);
        tree.items.emplace_back(std::move(csg));
      }

      void
      parse_connector(SyntaxTree& tree) {
        const Token& start = peek();
        ConnectorDecl conn;
        bool header_ok = false;
        guarded([&] {
          bump();
          auto id = expect_ident("connector name");
          if (!id) return;
          conn.name = *id;
          if (!expect(Tok::lbrace, "'{'")) return;
          header_ok = true;
        });
        if (!header_ok) return;
        while (peek().kind != Tok::rbrace && peek().kind != Tok::eof) {
          const std::size_t before = i_;
          const Token& estart = peek();
          guarded([&] {
            ConnectorEntry e;
            if (at_keyword("member")) {
              e.role = ConnectorRole::member;
            } else if (at_keyword("context")) {
              e.role = ConnectorRole::context;
            } else {
              unexpected(estart, "'member' or 'context'");
              return;
            }
            bump();
            auto name = expect_ident("CSG name");
            if (!name) return;
            e.name = *name;
            e.tuple = optional_tuple();
            if (failed_) return;
            const Token& end = peek();
            if (!expect(Tok::semi, "';'")) return;
            e.span = join(estart.span, end.span);
            conn.entries.push_back(std::move(e));
          });
          if (i_ == before) bump();
        }
        const Token& close = peek();
        if (close.kind != Tok::rbrace) {
          unexpected(close, "'}'");
          return;
        }
        bump();
        conn.span = join(start.span, close.span);
        tree.items.emplace_back(std::move(conn));
      }

      std::vector<Token> toks_;
      std::vector<Diagnostic>& diags_;
      std::size_t i_ = 0;
      bool failed_ = false;
    };

  } // namespace

  bool
  is_keyword(std::string_view word) {
    for (auto kw : keywords)
      if (kw == word) return true;
    return false;
  }

  ParseResult
  parse(std::string_view source, std::string file) {
    ParseResult result;
    Lexer lexer(source, file);
    auto tokens = lexer.run();
    for (const auto& t : tokens) {
      if (t.kind == Tok::invalid)
        result.diagnostics.push_back(make_error(
            "E101", "unexpected character " + printable(t.text), t.span));
    }
    std::erase_if(tokens, [](const Token& t) { return t.kind == Tok::invalid; });
    Parser parser(std::move(tokens), result.diagnostics);
    result.tree = parser.parse_schema();
    return result;
  }

} // namespace goossdm::dsl
