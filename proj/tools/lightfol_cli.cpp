// lightfol: run geometric identity checks on scenario files.
//
//   lightfol check <file> [--only NAME...] [--format text|jsonl] [--seed U64] [--samples N]
//   lightfol scenario new fol45 --n N --s S
//
// Exit status: 0 when every check passes, 1 when some check fails, 2 when the
// scenario cannot be loaded or the arguments are invalid.

#include <iostream>

#include "CLI11.hpp"
#include "lightfol/checks.hpp"
#include "lightfol/report.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kLoadError = 2;

int run_check(const std::string& path, const std::vector<std::string>& only, bool only_given,
              const std::string& format, std::optional<std::uint64_t> seed, std::optional<int> samples) {
  lightfol::ScenarioFile scn;
  try {
    scn = lightfol::load_scenario(path);
  } catch (const lightfol::Error& e) {
    std::cerr << "lightfol: " << path << ": " << e.what() << '\n';
    return kLoadError;
  }
  const auto fmt = lightfol::parse_format(format);
  std::optional<std::vector<std::string>> filter;
  if (only_given) filter = only;
  const lightfol::Report rep = lightfol::run_checks(scn, filter, seed, samples);
  lightfol::emit_report(rep, fmt, std::cout);
  std::cout.flush();
  return rep.pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for tangentially lightlike foliations"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "Run the checks of a scenario file");
  std::string path, format = "text";
  std::vector<std::string> only;
  std::uint64_t seed = 0;
  int samples = 0;
  check->add_option("file", path, "Scenario file")->required();
  auto* only_opt = check->add_option("--only", only, "Run only the named checks")->expected(0, -1);
  check->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "jsonl"}));
  auto* seed_opt = check->add_option("--seed", seed, "Override the sampling seed");
  auto* samples_opt = check->add_option("--samples", samples, "Override the sample count")->check(CLI::PositiveNumber);

  auto* scenario = app.add_subcommand("scenario", "Scenario utilities");
  scenario->require_subcommand(1);
  auto* fresh = scenario->add_subcommand("new", "Print a built-in scenario");
  std::string builtin;
  int n = 3, s = 1;
  fresh->add_option("name", builtin, "Built-in scenario")->required()->check(CLI::IsMember({"fol45"}));
  fresh->add_option("--n", n, "Dimension")->required();
  fresh->add_option("--s", s, "Index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kLoadError;
  }

  try {
    if (*check) {
      std::optional<std::uint64_t> sd;
      std::optional<int> sm;
      if (*seed_opt) sd = seed;
      if (*samples_opt) sm = samples;
      return run_check(path, only, only_opt->count() > 0, format, sd, sm);
    }
    std::cout << lightfol::fol45_scenario_text(n, s);
    return kPass;
  } catch (const lightfol::Error& e) {
    std::cerr << "lightfol: " << e.what() << '\n';
    return kLoadError;
  }
}
