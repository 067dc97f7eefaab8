#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "motzeta/error.hpp"
#include "motzeta/report.hpp"
#include "motzeta/taskfile.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact motivic zeta / arc-counting engine"};
  app.require_subcommand(1);

  std::string run_path;
  std::string fmt = "text";
  long long budget = motzeta::Budget::kDefaultCap;
  long long seed = -1;
  long coeff_cap = 30;
  CLI::App* run = app.add_subcommand("run", "execute a task file and print the report");
  run->add_option("taskfile", run_path, "task file path")->required();
  run->add_option("--format", fmt, "report format")
      ->check(CLI::IsMember({"text", "structured"}));
  run->add_option("--budget", budget, "enumeration budget (candidate evaluations)")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "override the file-level seed")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--coeff-cap", coeff_cap, "coefficient extraction cap")
      ->check(CLI::PositiveNumber);

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "parse and validate a task file");
  check->add_option("taskfile", check_path, "task file path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::string text;
      if (!read_file(run_path, text)) {
        std::cerr << "error: cannot read '" << run_path << "'\n";
        return 2;
      }
      motzeta::TaskFile file = motzeta::parse_taskfile(text);
      motzeta::RunOptions opt;
      opt.budget_cap = motzeta::Int(static_cast<long>(budget));
      if (seed >= 0) opt.seed = static_cast<unsigned long>(seed);
      opt.coeff_cap = coeff_cap;
      motzeta::Report rep = motzeta::run_taskfile(file, opt);
      std::cout << motzeta::render_report(rep,
                                          fmt == "text"
                                              ? motzeta::ReportFormat::Text
                                              : motzeta::ReportFormat::Structured);
      return rep.all_ok() ? 0 : 1;
    }
    std::string text;
    if (!read_file(check_path, text)) {
      std::cerr << "error: cannot read '" << check_path << "'\n";
      return 2;
    }
    motzeta::TaskFile file = motzeta::parse_taskfile(text);
    std::cout << "ok: " << file.entries.size() << " task(s)\n";
    return 0;
  } catch (const motzeta::EngineError& e) {
    std::cerr << motzeta::error_code_name(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
}
