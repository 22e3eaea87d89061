#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace goossdm {

  /// 1-based line/column position in a source text.
  struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;

    friend auto operator<=>(const SourcePos&, const SourcePos&) = default;
  };

  struct SourceSpan {
    std::string file;
    SourcePos start;
    SourcePos end;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
  };

  enum class Severity { error, warning };

  /// A coded finding. Codes are `Ennn` for errors and `Wnnn` for warnings.
  struct Diagnostic {
    std::string code;
    Severity severity = Severity::error;
    std::string message;
    SourceSpan span;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
  };

  inline Diagnostic
  make_error(std::string code, std::string message, SourceSpan span = {}) {
    return {std::move(code), Severity::error, std::move(message),
            std::move(span)};
  }

  inline Diagnostic
  make_warning(std::string code, std::string message, SourceSpan span = {}) {
    return {std::move(code), Severity::warning, std::move(message),
            std::move(span)};
  }

  inline bool
  has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
      return d.severity == Severity::error;
    });
  }

  inline const char*
  severity_name(Severity s) {
    return s == Severity::error ? "error" : "warning";
  }

  /// `file:line:col: severity[code]: message`
  std::string
  render(const Diagnostic& d);

  /// Thrown when an API precondition is violated (unknown node, unknown
  /// diagnostic code, malformed document handed to the emitter).
  class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string&
    code() const noexcept {
      return code_;
    }

  private:
    std::string code_;
  };

} // namespace goossdm
