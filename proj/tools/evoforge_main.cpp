#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "evoforge/config.hpp"

namespace {

int cmd_run(const std::string& path, const std::optional<std::string>& out,
            const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& trials) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file '" << path << "'\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();

  evoforge::RunConfig cfg;
  try {
    cfg = evoforge::parse_config(text.str());
    if (out) cfg.out_dir = *out;
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    evoforge::validate(cfg);
  } catch (const evoforge::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
  return evoforge::run(cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evoforge: evolvability experiments on monotone DNFs"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--trials", trials, "number of trials");

  auto* perf = app.add_subcommand("perf", "performance of r against f");
  evoforge::PerfQuery q;
  std::string conv = "signed";
  bool exact = false;
  std::optional<std::uint64_t> samples;
  perf->add_option("--r", q.r, "hypothesis, e.g. x1|x2")->required();
  perf->add_option("--f", q.f, "target, e.g. x1&x2 | x3")->required();
  perf->add_option("--n", q.n, "dimension")->required();
  perf->add_option("--conv", conv, "signed or binary")->check(CLI::IsMember({"signed", "binary"}));
  auto* exact_flag = perf->add_flag("--exact", exact, "enumerate the cube (default)");
  perf->add_option("--samples", samples, "sample count")->excludes(exact_flag);
  perf->add_option("--seed", q.seed, "sample seed");

  auto* list = app.add_subcommand("list", "list experiments");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, out_dir, seed, trials);

  if (perf->parsed()) {
    try {
      q.conv = evoforge::parse_convention(conv);
      q.samples = samples;
      std::cout << evoforge::perf_query(q) << '\n';
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }

  if (list->parsed()) {
    for (const auto& e : evoforge::list_experiments()) {
      std::cout << e.name << "  " << e.description << '\n';
    }
    return 0;
  }
  return 2;
}
