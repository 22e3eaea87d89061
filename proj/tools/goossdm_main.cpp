// goossdm: compile, check, correspond, generate, validate, fmt.
//
// Exit status: 0 success, 1 errors or failed rows, 2 usage or I/O errors.

#include <goossdm/correspondence.hpp>
#include <goossdm/dsl.hpp>
#include <goossdm/instance.hpp>
#include <goossdm/report.hpp>
#include <goossdm/transformer.hpp>
#include <goossdm/validator.hpp>
#include <goossdm/xml.hpp>
#include <goossdm/xsd.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

  using namespace goossdm;

  constexpr int exit_ok = 0;
  constexpr int exit_fail = 1;
  constexpr int exit_usage = 2;

  struct IoError {
    Diagnostic diagnostic;
  };

  std::string
  read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError{make_error("E201", "cannot read '" + path + "'", {path, {}, {}})};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void
  write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
      throw IoError{make_error("E201", "cannot write '" + path + "'", {path, {}, {}})};
  }

  struct Output {
    bool json = false;

    void
    diagnostics(const std::vector<Diagnostic>& diags) const {
      if (json) {
        std::cout << diagnostics_json(diags).dump(2) << "\n";
        return;
      }
      for (const auto& d : diags) std::cerr << render(d) << "\n";
    }
  };

  std::optional<SchemaGraph>
  load_schema(const std::string& path, std::vector<Diagnostic>& diags) {
    auto lowered = dsl::compile_source(read_file(path), path);
    diags = lowered.diagnostics;
    if (!lowered.schema || has_errors(diags)) return std::nullopt;
    auto report = validate(*lowered.schema);
    for (auto& d : report.diagnostics) {
      if (d.span.file.empty()) d.span.file = path;
      diags.push_back(d);
    }
    if (!report.ok) return std::nullopt;
    return lowered.schema;
  }

  std::optional<xsd::Document>
  load_xsd(const std::string& path, std::vector<Diagnostic>& diags) {
    auto r = xsd::read(read_file(path), path);
    diags = r.diagnostics;
    return r.document;
  }

} // namespace

int
main(int argc, char** argv) {
  CLI::App app{"Conceptual schema to XML Schema compiler"};
  app.require_subcommand(1);
  Output out;
  std::string format = "text";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  std::string input, output, plan_path, xsd_path, xml_path, dir;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::uint32_t max_repeat = 3;
  bool check_only = false;

  auto* compile = app.add_subcommand("compile", "Compile a schema to XSD");
  compile->add_option("input", input, "Schema file")->required();
  compile->add_option("-o,--output", output, "XSD output file");
  compile->add_option("--emit-plan", plan_path, "Write the nesting plan as JSON");
  add_format(compile);

  auto* check = app.add_subcommand("check", "Parse and validate a schema");
  check->add_option("input", input, "Schema file")->required();
  add_format(check);

  auto* correspond = app.add_subcommand("correspond", "Check schema/XSD correspondence");
  correspond->add_option("schema", input, "Schema file")->required();
  correspond->add_option("xsd", xsd_path, "XSD file")->required();
  add_format(correspond);

  auto* generate_cmd = app.add_subcommand("generate", "Generate instance documents");
  generate_cmd->add_option("xsd", xsd_path, "XSD file")->required();
  generate_cmd->add_option("--seed", seed, "Seed of the first document");
  generate_cmd->add_option("--count", count, "Number of documents");
  generate_cmd->add_option("--max-repeat", max_repeat, "Cap for unbounded occurs")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_option("-o,--output", dir, "Output directory")->required();
  add_format(generate_cmd);

  auto* validate_cmd = app.add_subcommand("validate", "Validate an instance document");
  validate_cmd->add_option("xsd", xsd_path, "XSD file")->required();
  validate_cmd->add_option("xml", xml_path, "Instance file")->required();
  add_format(validate_cmd);

  auto* fmt = app.add_subcommand("fmt", "Print a schema in canonical layout");
  fmt->add_option("input", input, "Schema file")->required();
  fmt->add_flag("--check", check_only, "Exit 1 when the input is not canonical");
  fmt->add_option("-o,--output", output, "Output file");
  add_format(fmt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }
  out.json = format == "json";

  try {
    std::vector<Diagnostic> diags;

    if (*compile) {
      auto schema = load_schema(input, diags);
      if (!schema) {
        out.diagnostics(diags);
        return exit_fail;
      }
      auto result = transform(*schema);
      diags.insert(diags.end(), result.diagnostics.begin(), result.diagnostics.end());
      if (!result.document) {
        out.diagnostics(diags);
        return exit_fail;
      }
      const std::string text = xsd::emit(*result.document);
      if (output.empty())
        std::cout << text;
      else
        write_file(output, text);
      if (!plan_path.empty()) write_file(plan_path, plan_json(*result.plan).dump(2) + "\n");
      if (out.json || !diags.empty()) out.diagnostics(diags);
      return exit_ok;
    }

    if (*check) {
      auto schema = load_schema(input, diags);
      out.diagnostics(diags);
      return schema ? exit_ok : exit_fail;
    }

    if (*correspond) {
      auto schema = load_schema(input, diags);
      if (!schema) {
        out.diagnostics(diags);
        return exit_fail;
      }
      const auto report = check_correspondence(*schema, std::string_view(read_file(xsd_path)));
      if (out.json)
        std::cout << rows_json(report).dump(2) << "\n";
      else
        std::cout << rows_table(report);
      return report.ok ? exit_ok : exit_fail;
    }

    if (*generate_cmd) {
      auto doc = load_xsd(xsd_path, diags);
      if (!doc) {
        out.diagnostics(diags);
        return exit_fail;
      }
      GenConfig cfg;
      cfg.seed = seed;
      cfg.count = count;
      cfg.max_repeat = max_repeat;
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec)
        throw IoError{make_error("E201", "cannot create directory '" + dir + "'", {dir, {}, {}})};
      nlohmann::json files = nlohmann::json::array();
      const auto docs = generate(*doc, cfg);
      for (std::size_t i = 0; i < docs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "instance_%03zu.xml", i);
        const auto path = (std::filesystem::path(dir) / name).string();
        write_file(path, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" + xml::serialize(docs[i]));
        files.push_back(path);
      }
      if (out.json)
        std::cout << files.dump(2) << "\n";
      else
        std::cout << "wrote " << docs.size() << " document(s) to " << dir << "\n";
      return exit_ok;
    }

    if (*validate_cmd) {
      auto doc = load_xsd(xsd_path, diags);
      if (!doc) {
        out.diagnostics(diags);
        return exit_fail;
      }
      auto parsed = xml::parse(read_file(xml_path), xml_path);
      if (!parsed.root) {
        out.diagnostics(parsed.diagnostics);
        return exit_fail;
      }
      const auto report = validate_instance(*doc, *parsed.root);
      if (out.json) {
        std::cout << conformance_json(report).dump(2) << "\n";
      } else {
        for (const auto& v : report.violations)
          std::cout << v.code << " " << v.path << ": " << v.message << "\n";
        std::cout << (report.ok ? "valid" : "invalid") << "\n";
      }
      return report.ok ? exit_ok : exit_fail;
    }

    if (*fmt) {
      const std::string source = read_file(input);
      auto parsed = dsl::parse(source, input);
      if (!parsed.ok()) {
        out.diagnostics(parsed.diagnostics);
        return exit_fail;
      }
      const std::string text = dsl::format(parsed.tree);
      if (check_only) {
        if (text == source) return exit_ok;
        if (out.json)
          std::cout << diagnostics_json({}).dump() << "\n";
        else
          std::cerr << input << ": not in canonical form\n";
        return exit_fail;
      }
      if (output.empty())
        std::cout << text;
      else
        write_file(output, text);
      return exit_ok;
    }
  } catch (const IoError& e) {
    out.diagnostics({e.diagnostic});
    return exit_usage;
  } catch (const goossdm::Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return exit_fail;
  }
  return exit_usage;
}
