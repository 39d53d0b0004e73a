// spantrace: check instance files and fuzz the trace identities.
// Exit codes: 0 pass, 1 verification failure, 2 input or flag error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "spantrace/suite.hpp"

using namespace spantrace;

namespace {

std::string slurp(const std::string& path) {
  if (path.empty() || path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path);
  if (!in) throw ParseError("/", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int finish(const Report& r, const std::string& format) {
  std::cout << emit_report(r, format);
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification harness for traces of cohomological correspondences over finite sets"};
  app.require_subcommand(1);

  std::string file, format = "text";
  const std::vector<std::string> formats{"text", "json"};

  auto* check = app.add_subcommand("check", "Validate a file and run every check that applies");
  check->add_option("file", file, "Instance file")->required();
  check->add_option("--format", format)->check(CLI::IsMember(formats));

  auto* tr = app.add_subcommand("trace", "Print traces, pairings and characteristic classes of a file");
  tr->add_option("file", file, "Instance file")->required();

  auto* lv = app.add_subcommand("lv", "Check the pushforward identity on the diagram of a file");
  lv->add_option("file", file, "Instance file")->required();
  lv->add_option("--format", format)->check(CLI::IsMember(formats));

  SuiteFlags flags;
  std::optional<std::int64_t> modulus;
  auto* fuzz = app.add_subcommand("fuzz", "Run a suite on seeded random instances");
  fuzz->add_option("--suite", flags.suite)->required()->check(CLI::IsMember(suite_names()));
  fuzz->add_option("--seed", flags.seed);
  fuzz->add_option("--count", flags.count);
  fuzz->add_option("--max-set", flags.params.max_set)->check(CLI::PositiveNumber);
  fuzz->add_option("--max-rank", flags.params.max_rank);
  fuzz->add_option("--deg-min", flags.params.deg_min);
  fuzz->add_option("--deg-max", flags.params.deg_max);
  fuzz->add_option("--modulus", modulus, "0 for the integers; default alternates 0 and 7");
  fuzz->add_option("--format", format)->check(CLI::IsMember(formats));
  fuzz->add_flag("--serial", flags.serial, "Use the serial reference loop");

  std::uint64_t gen_seed = 0;
  GenParams gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a seeded random instance");
  generate_cmd->add_option("--seed", gen_seed);
  generate_cmd->add_option("--max-set", gen.max_set)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--max-rank", gen.max_rank);
  generate_cmd->add_option("--deg-min", gen.deg_min);
  generate_cmd->add_option("--deg-max", gen.deg_max);
  generate_cmd->add_option("--modulus", gen.modulus);

  std::string report_file;
  auto* report = app.add_subcommand("report", "Re-render a json report (file or stdin)");
  report->add_option("--format", format)->check(CLI::IsMember(formats));
  report->add_option("file", report_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return finish(check_file(load_instance(file)), format);
    if (*tr) {
      std::cout << emit_traces(load_instance(file));
      return 0;
    }
    if (*lv) {
      const auto t0 = std::chrono::steady_clock::now();
      const Instance inst = load_instance(file);
      if (!inst.lv) throw ParseError("/lv", "missing");
      Report r;
      r.suite = "lv";
      r.count = 1;
      r.modulus = inst.ring.modulus();
      r.checks = run_checks("lv", inst);
      r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return finish(r, format);
    }
    if (*fuzz) {
      flags.modulus = modulus;
      return finish(run_suite(flags), format);
    }
    if (*generate_cmd) {
      check_params(gen);
      std::cout << emit_instance(generate(gen_seed, gen));
      return 0;
    }
    if (*report) return finish(parse_report(slurp(report_file)), format);
  } catch (const ParseError& e) {
    std::cerr << "error at " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
