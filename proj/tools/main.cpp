#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

namespace cli = urlweaver::cli;

int main(int argc, char** argv) {
  CLI::App app{"urlweaver: static and dynamic web-request analysis"};
  app.require_subcommand(1);

  cli::RunConfig config;
  config.out_dir = cli::default_out_dir();
  std::string format = "both";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--cap", config.cap, "Maximum patterns enumerated per automaton")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--loop-once-exact", config.loop_once_exact,
                  "Traverse loop bodies exactly once instead of zero or one times");
    sub->add_flag("--holes-may-be-empty", config.holes_may_be_empty,
                  "Let placeholders match empty text when matching URLs");
    sub->add_option("--ads", config.ads, "Hosts-style ad list")->check(CLI::ExistingFile);
    sub->add_option("--out", config.out_dir, "Output directory (default: $URLWEAVER_OUT)");
    sub->add_option("--format", format, "Exports to write")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "Extract URL patterns from SIR files");
  auto* constants = app.add_subcommand("constants", "Constant-extraction baseline over SIR files");
  auto* dynstats = app.add_subcommand("dynstats", "Statistics over captured request logs");
  auto* compare = app.add_subcommand("compare", "Compare static patterns with observed requests");
  auto* macro = app.add_subcommand("macro", "Corpus-level domain statistics");

  for (auto* sub : {analyze, constants, macro}) {
    common(sub);
    sub->add_option("files", config.inputs, "SIR files, one per application")
        ->required()
        ->check(CLI::ExistingFile);
  }
  common(dynstats);
  dynstats->add_option("logs", config.inputs, "JSON-lines request logs")
      ->required()
      ->check(CLI::ExistingFile);
  common(compare);
  compare->add_option("--log", config.logs, "JSON-lines request log (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("files", config.inputs, "SIR files named after their application")
      ->required()
      ->check(CLI::ExistingFile);
  macro->add_option("--top", config.top, "Rows in the top-domain table");

  CLI11_PARSE(app, argc, argv);

  config.format = format == "json"  ? cli::EmitFormat::Json
                  : format == "csv" ? cli::EmitFormat::Csv
                                    : cli::EmitFormat::Both;

  if (analyze->parsed()) return cli::cmd_analyze(config, std::cerr);
  if (constants->parsed()) return cli::cmd_constants(config, std::cerr);
  if (dynstats->parsed()) return cli::cmd_dynstats(config, std::cerr);
  if (compare->parsed()) return cli::cmd_compare(config, std::cerr);
  return cli::cmd_macro(config, std::cerr);
}
