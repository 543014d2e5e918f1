// rank16: reproducible experiments on the 16-rank of class groups of Q(sqrt(-p)).
//
//   rank16 verify-theorem1 --limit 2000000 --format csv
//   rank16 density --limit 100000000 [--a0 1 --q1 16 --c0 0 --q2 4] --mode lattice
//   rank16 unit --p 41
//
// Exit status: 0 success, 2 refusal (precondition or budget), 1 internal error.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rank16/experiments.hpp"

namespace {

constexpr int kExitRefused = 2;
constexpr int kExitInternal = 1;

struct RunConfig {
  std::string command;
  rank16::u64 limit = 0;
  std::optional<rank16::u64> a0, c0;
  rank16::u64 q1 = 16;
  rank16::u64 q2 = 4;
  std::optional<rank16::u64> p;
  std::string output;
  rank16::OutputFormat format = rank16::OutputFormat::text;
  rank16::CountMode mode = rank16::CountMode::lattice;
  unsigned threads = 1;
};

template <typename Report>
void emit(std::ostream& os, const Report& report, rank16::OutputFormat format) {
  switch (format) {
    case rank16::OutputFormat::csv: rank16::write_csv(os, report); break;
    case rank16::OutputFormat::json: os << rank16::to_json(report).dump(2) << '\n'; break;
    case rank16::OutputFormat::text: rank16::write_text(os, report); break;
  }
}

template <typename Report>
void deliver(const RunConfig& cfg, const Report& report) {
  if (cfg.output.empty() || cfg.output == "-") {
    emit(std::cout, report, cfg.format);
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + cfg.output);
  emit(file, report, cfg.format);
}

int run(const RunConfig& cfg) {
  if (cfg.command == "verify-theorem1") {
    deliver(cfg, rank16::verify_theorem1(cfg.limit, cfg.threads));
  } else if (cfg.command == "density") {
    if (cfg.limit < 3) throw rank16::precondition_error("density: --limit must be at least 3");
    std::optional<rank16::CongruencePair> pair;
    if (cfg.a0 || cfg.c0) {
      if (!cfg.a0 || !cfg.c0) throw rank16::precondition_error("density: give both --a0 and --c0, or neither");
      pair = rank16::CongruencePair{*cfg.a0, cfg.q1, *cfg.c0, cfg.q2};
      if (!pair->well_formed()) {
        throw rank16::precondition_error("density: need 0 <= a0 < q1 and 0 <= c0 < q2 with q1, q2 >= 1");
      }
    }
    deliver(cfg, rank16::density_report(cfg.limit, pair, cfg.mode, cfg.threads));
  } else if (cfg.command == "unit") {
    deliver(cfg, rank16::unit_report(*cfg.p));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on 2-power divisibility of class numbers h(-4p)"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, rank16::OutputFormat> formats{
      {"csv", rank16::OutputFormat::csv}, {"json", rank16::OutputFormat::json}, {"text", rank16::OutputFormat::text}};
  const std::map<std::string, rank16::CountMode> modes{{"lattice", rank16::CountMode::lattice},
                                                       {"distinct", rank16::CountMode::distinct}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format: csv, json or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--out", cfg.output, "Write the report to PATH instead of stdout");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
  };

  auto* verify = app.add_subcommand("verify-theorem1", "Compare the congruence cases, the 2-adic test and v2(h)");
  verify->add_option("--limit", cfg.limit, "Largest p = a^2 + c^4 to examine")->required();
  add_common(verify);

  auto* density = app.add_subcommand("density", "Count primes a^2 + c^4 <= X in congruence classes");
  density->add_option("--limit", cfg.limit, "X")->required();
  density->add_option("--a0", cfg.a0, "Residue of a");
  density->add_option("--q1", cfg.q1, "Modulus for a")->capture_default_str();
  density->add_option("--c0", cfg.c0, "Residue of c");
  density->add_option("--q2", cfg.q2, "Modulus for c")->capture_default_str();
  density->add_option("--mode", cfg.mode, "lattice or distinct")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  add_common(density);

  auto* unit = app.add_subcommand("unit", "Fundamental unit of Q(sqrt(p)) and the mod-16 criteria");
  unit->add_option("--p", cfg.p, "Prime p = 1 mod 8")->required();
  add_common(unit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    return run(cfg);
  } catch (const rank16::precondition_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}
