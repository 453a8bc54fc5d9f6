// jetham: derive covariant Hamilton equations from a model file.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "jetham/document.hpp"
#include "jetham/model.hpp"
#include "jetham/run.hpp"

namespace {

enum Exit { ok = 0, usage = 1, derivation = 2, property = 3 };

struct ParseFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseFailure{"cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return ok;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "jetham: cannot write '" << out_path << "'\n";
    return usage;
  }
  return ok;
}

int run(const std::string& model_path, const std::string& format_name, const std::string& out_path, bool check_only) {
  using namespace jetham;
  auto format = cli::parse_format(format_name);
  if (!format) {
    std::cerr << "jetham: unknown format '" << format_name << "' (text, latex or json)\n";
    return usage;
  }
  cli::ModelFile model;
  try {
    model = cli::parse_model(read_file(model_path));
  } catch (const ParseFailure& e) {
    std::cerr << "jetham: " << e.message << "\n";
    return usage;
  } catch (const ParseError& e) {
    std::cerr << model_path << ":" << e.what() << "\n";
    return usage;
  } catch (const Error& e) {
    std::cerr << model_path << ": " << e.what() << "\n";
    return derivation;
  }
  cli::OutputDocument doc;
  try {
    doc = check_only ? cli::run_checks(model) : cli::run_tasks(model);
  } catch (const Error& e) {
    std::cerr << "jetham: " << e.what() << "\n";
    return derivation;
  }
  if (int rc = write_output(cli::emit(doc, *format), out_path); rc != ok) return rc;
  return doc.all_checks_hold() ? ok : property;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariant Hamiltonian field equations on composite bundles"};
  app.require_subcommand(1);

  std::string model_path;
  std::string format = "text";
  std::string out_path;

  auto* derive = app.add_subcommand("derive", "Run the tasks of a model file");
  derive->add_option("model", model_path, "Model file")->required();
  derive->add_option("--format", format, "text, latex or json");
  derive->add_option("--out", out_path, "Write the output here instead of stdout");

  auto* check = app.add_subcommand("check", "Run every property check the model supports");
  check->add_option("model", model_path, "Model file")->required();
  check->add_option("--format", format, "text, latex or json");
  check->add_option("--out", out_path, "Write the output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }
  return run(model_path, format, out_path, check->parsed());
}
