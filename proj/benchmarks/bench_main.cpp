#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "generator.hpp"
#include "urlweaver/analysis.hpp"
#include "urlweaver/compare.hpp"
#include "urlweaver/components.hpp"
#include "urlweaver/dynlog.hpp"
#include "urlweaver/sir.hpp"

using namespace urlweaver;

namespace {

std::string program_text(std::size_t methods) {
  std::mt19937_64 rng(10);
  testing::GenParams gp;
  gp.loops = true;
  gp.top_level = 40;
  gp.max_appends = 60;
  gp.max_branches = 8;
  return testing::random_program(rng, methods, gp);
}

void BM_ParseProgram(benchmark::State& state) {
  const auto src = program_text(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sir::parse_program(src));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_ParseProgram)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AnalyzeProgram(benchmark::State& state) {
  const auto prog = sir::parse_program(program_text(static_cast<std::size_t>(state.range(0))));
  std::size_t patterns = 0;
  for (auto _ : state) {
    auto an = urlmodel::analyze_program(prog);
    patterns = an.patterns.size();
    benchmark::DoNotOptimize(an);
  }
  state.counters["patterns"] = static_cast<double>(patterns);
}
BENCHMARK(BM_AnalyzeProgram)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

// a chain of two-way forks: 2^k sequences
strana::StringAutomaton fork_chain(std::size_t k) {
  strana::StringAutomaton a;
  strana::StateId s = a.add_state();
  a.add_edge(0, EdgeLabel::lit("https://a.example.com/"), s);
  for (std::size_t i = 0; i < k; ++i) {
    auto t = a.add_state();
    a.add_edge(s, EdgeLabel::lit("p" + std::to_string(i) + "/"), t);
    a.add_edge(s, EdgeLabel::hole("v" + std::to_string(i)), t);
    s = t;
  }
  a.add_exit(s);
  return a;
}

void BM_LanguageOf(benchmark::State& state) {
  const auto a = fork_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(strana::language_of(a, 1u << 20));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(BM_LanguageOf)->Arg(8)->Arg(12)->Arg(16);

void BM_PatternsOf(benchmark::State& state) {
  const auto a = fork_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(urlmodel::patterns_of(a, 1u << 20));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(BM_PatternsOf)->Arg(8)->Arg(12);

void BM_Decompose(benchmark::State& state) {
  const auto ps = urlmodel::patterns_of(fork_chain(static_cast<std::size_t>(state.range(0))), 1u << 20);
  for (auto _ : state) benchmark::DoNotOptimize(urlmodel::decompose(ps.patterns));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ps.patterns.size()));
}
BENCHMARK(BM_Decompose)->Arg(8)->Arg(12);

void BM_CompareComponents(benchmark::State& state) {
  const auto ps = urlmodel::patterns_of(fork_chain(12), 1u << 20).patterns;
  const std::vector<urlmodel::UrlPattern> half(ps.begin(), ps.begin() + static_cast<std::ptrdiff_t>(ps.size() / 2));
  const auto d = urlmodel::decompose(ps), s = urlmodel::decompose(half);
  for (auto _ : state) benchmark::DoNotOptimize(compare::compare_components(d, s));
}
BENCHMARK(BM_CompareComponents);

void BM_MatchUrl(benchmark::State& state) {
  const auto p = urlmodel::parse_pattern_text("https://weather.example.com/v1/[ ]/x[ ]y?time=[ ]&city=[ ]");
  const auto u = urlmodel::parse_pattern_text("https://weather.example.com/v1/abc/xzzy?city=Paris&time=today");
  for (auto _ : state) benchmark::DoNotOptimize(compare::match_url(u, p));
}
BENCHMARK(BM_MatchUrl);

void BM_SummarizeLog(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> types = {"image/png", "application/json", "text/html", "font/woff2", "x/y"};
  std::vector<dynlog::RequestRecord> records(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    r.url = "https://h" + std::to_string(rng() % 50) + ".ads.example/p" + std::to_string(rng() % 1000);
    r.method = rng() % 10 ? "GET" : "POST";
    r.status = 200 + static_cast<int>(rng() % 300);
    r.content_type = types[rng() % types.size()];
    r.timestamp = static_cast<double>(i) * 0.01;
    r.app = "app";
  }
  const dynlog::AdList ads({"ads.example", "doubleclick.net"});
  for (auto _ : state) benchmark::DoNotOptimize(dynlog::summarize(records, ads));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SummarizeLog)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
