#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "commands.hpp"
#include "equilab/error.hpp"

namespace {

using namespace equilab;
using namespace equilab::cli;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string format = "csv";
  std::string ode_suite = "lemma64";
  std::string lemma_suite = "all";
  std::vector<std::string> runs;
};

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("equilab");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("EQUILAB_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

void add_common(CLI::App* sub, Flags& f, bool config_required) {
  auto* c = sub->add_option("--config", f.config, "experiment config JSON");
  if (config_required) c->required();
  sub->add_option("--out", f.out, "output directory (default: out)");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--format", f.format, "summary printed on stdout")->check(CLI::IsMember({"csv", "json"}));
}

RunContext make_context(const Flags& f, const std::string& command, std::string& out_dir) {
  RunContext ctx;
  if (!f.config.empty()) {
    ctx.config = load_config(f.config);
    if (!ctx.config.is_object()) throw ValidationError("config: top level must be an object");
    ctx.config_dir = std::filesystem::path(f.config).parent_path();
    if (ctx.config_dir.empty()) ctx.config_dir = ".";
  }
  const json& c = ctx.config;
  if (c.contains("command") && (!c.at("command").is_string() || c.at("command").get<std::string>() != command))
    throw ValidationError("config: command field does not match subcommand '" + command + "'");
  ctx.seed = f.seed ? *f.seed : static_cast<std::uint64_t>(count_or(c, "seed", 1, "config"));
  ctx.jobs = f.jobs ? *f.jobs : static_cast<unsigned>(count_or(c, "jobs", 1, "config"));
  if (ctx.jobs == 0) throw ValidationError("config.jobs: must be positive");
  out_dir = !f.out.empty() ? f.out : string_or(c, "out", "out", "config");
  return ctx;
}

void report_error(const std::string& command, const char* what) {
  const std::string msg(what);
  if (msg.rfind(command + ":", 0) == 0) spdlog::error("{}", msg);
  else spdlog::error("{}: {}", command, msg);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"equilab: equidistribution experiments on tori and hyperbolic surfaces"};
  app.require_subcommand(1);
  Flags flags;

  struct Entry {
    const char* name;
    const char* help;
    bool config_required;
  };
  const Entry entries[] = {
      {"fourier-decay", "Fourier transform of a measure along a ray, with a log-log decay fit", true},
      {"torus-rate", "discrepancy of a dilated measure on a torus and its rate fit", true},
      {"ray-test", "decay of the Fourier transform along integral rays", true},
      {"lifted-circle", "discrepancy of the lifted circle on the 3-torus", true},
      {"hyperbolic-average", "averages of translated curves on a compact hyperbolic surface", true},
      {"ode-check", "closed-form ODE solutions against the Runge-Kutta oracle", false},
      {"lemma-check", "Lie-algebra identities and curve-derivative formulas", false},
      {"report", "summary of earlier run directories", false},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, flags, e.config_required);
    subs[e.name] = sub;
  }
  subs["ode-check"]->add_option("--suite", flags.ode_suite, "property suite (lemma64)");
  subs["lemma-check"]->add_option("--suite", flags.lemma_suite, "lie, lemma61, lemma62 or all");
  subs["report"]->add_option("runs", flags.runs, "run directories containing fit.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    std::string out_dir;
    const RunContext ctx = make_context(flags, command, out_dir);
    Artifacts a;
    if (command == "fourier-decay") a = fourier_decay(ctx);
    else if (command == "torus-rate") a = torus_rate(ctx);
    else if (command == "ray-test") a = ray_test(ctx);
    else if (command == "lifted-circle") a = lifted_circle(ctx);
    else if (command == "hyperbolic-average") a = hyperbolic_average(ctx);
    else if (command == "ode-check") a = ode_check(ctx, flags.ode_suite);
    else if (command == "lemma-check") a = lemma_check(ctx, flags.lemma_suite);
    else a = report(std::vector<std::filesystem::path>(flags.runs.begin(), flags.runs.end()));

    write_artifacts(out_dir, a);
    std::cout << (flags.format == "json" ? a.fit.dump(2) + "\n" : a.results.csv());
    if (a.fit.contains("failed") && a.fit.at("failed").get<std::size_t>() > 0) {
      spdlog::error("{}: {} of {} checks failed", command, a.fit.at("failed").get<std::size_t>(),
                    a.fit.at("failed").get<std::size_t>() + a.fit.at("passed").get<std::size_t>());
      return 3;
    }
    return 0;
  } catch (const ValidationError& e) {
    report_error(command, e.what());
    return 2;
  } catch (const json::exception& e) {
    spdlog::error("{}: malformed config: {}", command, e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(command, e.what());
    return 3;
  }
}
