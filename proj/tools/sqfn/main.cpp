#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "sqfn/errors.hpp"

namespace {

enum Exit { kOk = 0, kParameter = 2, kNumerical = 3, kIo = 4 };

struct Common {
  std::string config;
  std::string out = "out";
  int threads = 0;
  bool override_range = false;
  bool check_identity = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON run configuration");
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (overrides config)")->check(CLI::PositiveNumber);
  sub->add_flag("--override-range", c.override_range, "allow alpha outside the theorem range (recorded)");
  sub->add_flag("--check-identity", c.check_identity, "cross-check against the direct (I - A_t)^k pipeline");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ball-average square functions, Hardy-Sobolev norm surrogates and the kernel bound scan"};
  app.require_subcommand(1);
  Common common;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const sqfn::cli::Json&, const std::filesystem::path&);
  };
  const Entry entries[] = {
      {"gen", "generate a test field", sqfn::cli::run_gen},
      {"squarefn", "ball or binomial square function of a field", sqfn::cli::run_squarefn},
      {"equiv", "norm-equivalence report over a family of fields", sqfn::cli::run_equiv},
      {"lemma", "two-point kernel bound scan and gradient-integral checks", sqfn::cli::run_lemma},
  };
  for (const auto& e : entries) add_common(app.add_subcommand(e.name, e.help), common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParameter;
  }

  const Entry* chosen = nullptr;
  for (const auto& e : entries)
    if (app.got_subcommand(e.name)) chosen = &e;

  try {
    sqfn::cli::Overrides ov;
    if (common.threads > 0) ov.threads = common.threads;
    ov.override_range = common.override_range;
    ov.check_identity = common.check_identity;
    std::optional<std::filesystem::path> path;
    if (!common.config.empty()) path = common.config;
    const auto config = sqfn::cli::resolve_config(chosen->name, path, ov);
    return chosen->run(config, common.out);
  } catch (const sqfn::FieldIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const sqfn::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const sqfn::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
