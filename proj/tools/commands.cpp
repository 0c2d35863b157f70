#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "urlweaver/analysis.hpp"
#include "urlweaver/compare.hpp"
#include "urlweaver/components.hpp"
#include "urlweaver/dynlog.hpp"
#include "urlweaver/error.hpp"
#include "urlweaver/sir.hpp"

namespace urlweaver::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

void validate(const RunConfig& config) {
  if (config.inputs.empty() && config.logs.empty()) throw ConfigError("no input files given");
  if (config.cap < 1) throw ConfigError("--cap must be at least 1");
  if (config.jobs < 1) throw ConfigError("--jobs must be at least 1");
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("URLWEAVER_OUT"); env && *env) return env;
  return "urlweaver-out";
}

std::string unit_name(const fs::path& file) { return file.stem().string(); }

namespace {

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, std::size_t jobs, F&& fn) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = fn(i);
  };
  const std::size_t extra = std::min(jobs, n) > 0 ? std::min(jobs, n) - 1 : 0;
  std::vector<std::thread> threads;
  threads.reserve(extra);
  for (std::size_t t = 0; t < extra; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return out;
}

std::string read_text(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
}

// Unit names derived from file stems, made unique in input order.
std::vector<std::string> unique_units(const std::vector<fs::path>& files) {
  std::vector<std::string> names;
  std::map<std::string, int> seen;
  for (const auto& f : files) {
    std::string base = unit_name(f);
    int n = ++seen[base];
    names.push_back(n == 1 ? base : base + "-" + std::to_string(n));
  }
  return names;
}

urlmodel::AnalysisOptions analysis_options(const RunConfig& c) {
  urlmodel::AnalysisOptions o;
  o.cap = c.cap;
  o.build.loops = c.loop_once_exact ? strana::LoopSemantics::ExactlyOne
                                    : strana::LoopSemantics::ZeroOrOne;
  return o;
}

struct StaticUnit {
  std::string unit;
  fs::path file;
  bool ok = false;
  std::string error;
  std::size_t methods = 0;
  urlmodel::ProgramAnalysis analysis;
};

std::vector<StaticUnit> analyze_files(const RunConfig& c, const std::vector<fs::path>& files) {
  const auto names = unique_units(files);
  const auto opts = analysis_options(c);
  return parallel_map<StaticUnit>(files.size(), c.jobs, [&](std::size_t i) {
    StaticUnit u;
    u.unit = names[i];
    u.file = files[i];
    try {
      auto prog = sir::parse_program(read_text(files[i]), u.unit);
      u.methods = prog.methods.size();
      u.analysis = urlmodel::analyze_program(prog, opts);
      u.ok = true;
    } catch (const std::exception& e) {
      u.error = e.what();
    }
    return u;
  });
}

void report_failures(const std::vector<StaticUnit>& units, std::ostream& log) {
  for (const auto& u : units)
    if (!u.ok) log << "skipping " << u.file.string() << ": " << u.error << '\n';
}

ojson sets_counts(const urlmodel::ComponentSets& s) {
  ojson j;
  j["domains"] = s.domains.size();
  j["path_pairs"] = s.path_pairs.size();
  j["key_triples"] = s.key_triples.size();
  j["value_tuples"] = s.value_tuples.size();
  return j;
}

std::string jsonl(const std::vector<urlmodel::PatternRecord>& records) {
  std::string out;
  for (const auto& r : records) out += urlmodel::pattern_report_line(r) + "\n";
  return out;
}

void write_sets(const RunConfig& c, const fs::path& dir, const urlmodel::ComponentSets& sets) {
  if (!c.emit_csv()) return;
  fs::create_directories(dir);
  urlmodel::write_component_csvs(sets, dir);
}

int guarded(std::ostream& log, const RunConfig& c, const std::function<void()>& body) {
  try {
    validate(c);
    body();
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_analyze(const RunConfig& config, std::ostream& log) {
  return guarded(log, config, [&] {
    auto units = analyze_files(config, config.inputs);
    report_failures(units, log);
    const fs::path out = config.out_dir;
    fs::create_directories(out);

    urlmodel::ComponentSets aggregate;
    std::string all;  // aggregate patterns.jsonl, units in input order
    std::size_t pattern_total = 0;
    ojson summary;
    auto& jr = summary["units"] = ojson::array();
    std::size_t failed = 0;
    for (const auto& u : units) {
      ojson ju;
      ju["unit"] = u.unit;
      ju["file"] = u.file.string();
      ju["ok"] = u.ok;
      if (!u.ok) {
        ++failed;
        ju["error"] = u.error;
        jr.push_back(std::move(ju));
        continue;
      }
      const auto sets = u.analysis.components();
      aggregate.merge(sets);
      pattern_total += u.analysis.patterns.size();
      ju["methods"] = u.methods;
      ju["sinks"] = u.analysis.sinks.size();
      ju["patterns"] = u.analysis.patterns.size();
      ju["filtered_out"] = u.analysis.filtered_out;
      ju["discarded"] = u.analysis.discarded;
      ju["truncated"] = u.analysis.truncated;
      ju["components"] = sets_counts(sets);
      jr.push_back(std::move(ju));

      const fs::path dir = out / "units" / u.unit;
      write_sets(config, dir, sets);
      if (config.emit_json()) {
        const std::string lines = jsonl(u.analysis.patterns);
        write_text(dir / "patterns.jsonl", lines);
        all += lines;
        std::string automata = "[";
        for (std::size_t i = 0; i < u.analysis.sinks.size(); ++i) {
          const auto& s = u.analysis.sinks[i];
          ojson head;
          head["method"] = s.method;
          head["site"] = s.site;
          head["kind"] = urlmodel::sink_kind_name(s.kind);
          std::string h = head.dump();
          h.pop_back();  // splice the automaton object in verbatim
          automata += (i ? ",\n" : "\n") + h + ",\"automaton\":" + strana::to_json(s.automaton) + "}";
        }
        automata += u.analysis.sinks.empty() ? "]\n" : "\n]\n";
        write_text(dir / "automata.json", automata);
      }
    }
    summary["totals"] = {{"units", units.size()},
                         {"failed", failed},
                         {"patterns", pattern_total},
                         {"components", sets_counts(aggregate)}};
    write_sets(config, out, aggregate);
    if (config.emit_json()) {
      write_text(out / "patterns.jsonl", all);
      write_text(out / "analyze.json", summary.dump(2) + "\n");
    }
  });
}

int cmd_constants(const RunConfig& config, std::ostream& log) {
  return guarded(log, config, [&] {
    const auto names = unique_units(config.inputs);
    struct Unit {
      bool ok = false;
      std::string error;
      urlmodel::ConstantSet constants;
    };
    auto units = parallel_map<Unit>(config.inputs.size(), config.jobs, [&](std::size_t i) {
      Unit u;
      try {
        u.constants = urlmodel::extract_constants(sir::parse_program(read_text(config.inputs[i]), names[i]));
        u.ok = true;
      } catch (const std::exception& e) {
        u.error = e.what();
      }
      return u;
    });

    const fs::path out = config.out_dir;
    fs::create_directories(out);
    urlmodel::ComponentSets aggregate;
    std::vector<urlmodel::PatternRecord> all;
    ojson summary;
    auto& jr = summary["units"] = ojson::array();
    std::size_t failed = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      const auto& u = units[i];
      ojson ju;
      ju["unit"] = names[i];
      ju["file"] = config.inputs[i].string();
      ju["ok"] = u.ok;
      if (!u.ok) {
        log << "skipping " << config.inputs[i].string() << ": " << u.error << '\n';
        ++failed;
        ju["error"] = u.error;
        jr.push_back(std::move(ju));
        continue;
      }
      std::vector<urlmodel::PatternRecord> records;
      urlmodel::ComponentSets sets;
      for (const auto& k : u.constants.constants) {
        records.push_back({k.method, k.site, urlmodel::SinkKind::Literal, k.pattern});
        sets.add(k.pattern);
      }
      aggregate.merge(sets);
      all.insert(all.end(), records.begin(), records.end());
      ju["constants"] = records.size();
      ju["discarded"] = u.constants.discarded;
      ju["components"] = sets_counts(sets);
      jr.push_back(std::move(ju));
      const fs::path dir = out / "units" / names[i];
      write_sets(config, dir, sets);
      if (config.emit_json()) write_text(dir / "constants.jsonl", jsonl(records));
    }
    summary["totals"] = {{"units", units.size()},
                         {"failed", failed},
                         {"constants", all.size()},
                         {"components", sets_counts(aggregate)}};
    write_sets(config, out, aggregate);
    if (config.emit_json()) {
      write_text(out / "constants.jsonl", jsonl(all));
      write_text(out / "constants.json", summary.dump(2) + "\n");
    }
  });
}

namespace {

struct LoadedLogs {
  std::vector<dynlog::RequestRecord> records;
  std::vector<std::pair<std::string, dynlog::IngestError>> errors;
  std::vector<std::pair<std::string, std::string>> unreadable;
};

LoadedLogs load_logs(const std::vector<fs::path>& files, std::ostream& log) {
  LoadedLogs out;
  for (const auto& f : files) {
    try {
      auto l = dynlog::load_log(f);
      out.records.insert(out.records.end(), std::make_move_iterator(l.records.begin()),
                         std::make_move_iterator(l.records.end()));
      for (auto& e : l.errors) out.errors.emplace_back(f.string(), std::move(e));
    } catch (const std::exception& e) {
      log << "skipping " << f.string() << ": " << e.what() << '\n';
      out.unreadable.emplace_back(f.string(), e.what());
    }
  }
  return out;
}

}  // namespace

int cmd_dynstats(const RunConfig& config, std::ostream& log) {
  return guarded(log, config, [&] {
    auto files = config.inputs;
    files.insert(files.end(), config.logs.begin(), config.logs.end());
    auto logs = load_logs(files, log);
    const dynlog::AdList ads = config.ads ? dynlog::AdList::load(*config.ads) : dynlog::AdList{};
    const auto summary = dynlog::summarize(logs.records, ads);

    const fs::path out = config.out_dir;
    fs::create_directories(out);
    if (config.emit_json()) write_text(out / "summary.json", dynlog::summary_json(summary));
    if (config.emit_csv()) {
      write_text(out / "timeline.csv", dynlog::timeline_csv(summary));
      std::string errs = "file,line,message\n";
      for (const auto& [file, e] : logs.errors)
        errs += urlmodel::csv_field(file) + "," + std::to_string(e.line) + "," +
                urlmodel::csv_field(e.message) + "\n";
      for (const auto& [file, why] : logs.unreadable)
        errs += urlmodel::csv_field(file) + ",0," + urlmodel::csv_field(why) + "\n";
      write_text(out / "ingest_errors.csv", errs);
    }
    if (!logs.errors.empty()) log << logs.errors.size() << " malformed log lines skipped\n";
  });
}

int cmd_compare(const RunConfig& config, std::ostream& log) {
  return guarded(log, config, [&] {
    if (config.inputs.empty()) throw ConfigError("compare needs at least one SIR file");
    if (config.logs.empty()) throw ConfigError("compare needs at least one --log file");
    auto units = analyze_files(config, config.inputs);
    report_failures(units, log);
    auto logs = load_logs(config.logs, log);

    std::map<std::string, const StaticUnit*> by_unit;
    for (const auto& u : units) by_unit[u.unit] = &u;
    std::map<std::string, std::vector<const dynlog::RequestRecord*>> by_app;
    for (const auto& r : logs.records) by_app[r.app].push_back(&r);
    std::set<std::string> names;
    for (const auto& [n, _] : by_unit) names.insert(n);
    for (const auto& [n, _] : by_app) names.insert(n);

    const compare::MatchOptions mopts{config.holes_may_be_empty};
    urlmodel::ComponentSets d_all, s_all;
    std::size_t urls_total = 0, urls_matched = 0, urls_unparseable = 0;
    ojson jr = ojson::array();
    std::string csv = "unit";
    for (auto l : compare::kLevels)
      for (const char* part : {"d_only", "both", "s_only"})
        csv += "," + std::string(compare::level_name(l)) + "_" + part;
    csv += ",urls,matched_urls,unparseable_urls\n";

    for (const auto& name : names) {
      ojson ju;
      ju["unit"] = name;
      auto su = by_unit.find(name);
      auto da = by_app.find(name);
      std::string reason;
      if (su == by_unit.end())
        reason = "no static result";
      else if (!su->second->ok)
        reason = "static analysis failed: " + su->second->error;
      else if (da == by_app.end())
        reason = "no dynamic result";
      if (!reason.empty()) {
        // a failure on either side excludes the unit from both
        ju["included"] = false;
        ju["reason"] = reason;
        jr.push_back(std::move(ju));
        continue;
      }

      const auto s_sets = su->second->analysis.components();
      std::vector<compare::PatternMatcher> matchers;
      for (const auto& p : su->second->analysis.patterns) matchers.emplace_back(p.pattern, mopts);

      urlmodel::ComponentSets d_sets;
      std::set<std::string> urls;
      for (const auto* r : da->second) urls.insert(r->url);
      std::size_t matched = 0, unparseable = 0;
      for (const auto& url : urls) {
        try {
          auto p = urlmodel::parse_pattern({EdgeLabel::lit(url)});
          d_sets.add(p);
          if (std::any_of(matchers.begin(), matchers.end(),
                          [&](const compare::PatternMatcher& m) { return m.matches(p); }))
            ++matched;
        } catch (const Unparseable&) {
          ++unparseable;
        }
      }
      urls_total += urls.size();
      urls_matched += matched;
      urls_unparseable += unparseable;
      d_all.merge(d_sets);
      s_all.merge(s_sets);

      const auto rep = compare::compare_components(d_sets, s_sets);
      ju["included"] = true;
      ojson counts;
      csv += urlmodel::csv_field(name);
      for (auto l : compare::kLevels) {
        const auto& lc = rep.at(l);
        counts[std::string(compare::level_name(l))] = {
            {"d_only", lc.d_only.size()}, {"both", lc.both.size()}, {"s_only", lc.s_only.size()}};
        csv += "," + std::to_string(lc.d_only.size()) + "," + std::to_string(lc.both.size()) + "," +
               std::to_string(lc.s_only.size());
      }
      csv += "," + std::to_string(urls.size()) + "," + std::to_string(matched) + "," +
             std::to_string(unparseable) + "\n";
      ju["counts"] = std::move(counts);
      ju["urls"] = urls.size();
      ju["matched_urls"] = matched;
      ju["unparseable_urls"] = unparseable;
      jr.push_back(std::move(ju));
    }

    const auto aggregate = compare::compare_components(d_all, s_all);
    ojson doc = ojson::parse(compare::report_json(aggregate));
    doc["units"] = std::move(jr);
    doc["url_matching"] = {
        {"urls", urls_total}, {"matched", urls_matched}, {"unparseable", urls_unparseable}};

    const fs::path out = config.out_dir;
    fs::create_directories(out);
    if (config.emit_json()) write_text(out / "compare.json", doc.dump(2) + "\n");
    if (config.emit_csv()) write_text(out / "compare.csv", csv);
  });
}

int cmd_macro(const RunConfig& config, std::ostream& log) {
  return guarded(log, config, [&] {
    auto units = analyze_files(config, config.inputs);
    report_failures(units, log);

    std::map<std::string, std::set<std::string>> apps_of_domain;
    std::map<std::size_t, std::size_t> domains_hist;  // unique domains -> apps
    urlmodel::ComponentSets all;
    std::vector<std::pair<std::string, urlmodel::ValueTuple>> secrets;
    std::size_t analyzed = 0;
    for (const auto& u : units) {
      if (!u.ok) continue;
      ++analyzed;
      const auto sets = u.analysis.components();
      all.merge(sets);
      std::size_t n = 0;
      for (const auto& d : sets.domains) {
        if (d.find(kHoleText) != std::string::npos) continue;
        apps_of_domain[d].insert(u.unit);
        ++n;
      }
      ++domains_hist[n];
      for (const auto& vt : urlmodel::scan_secrets(sets)) secrets.emplace_back(u.unit, vt);
    }
    std::map<std::size_t, std::size_t> apps_hist;  // apps -> domains
    std::vector<std::pair<std::string, std::size_t>> ranking;
    for (const auto& [d, apps] : apps_of_domain) {
      ++apps_hist[apps.size()];
      ranking.emplace_back(d, apps.size());
    }
    std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranking.size() > config.top) ranking.resize(config.top);
    std::set<std::string> real_domains;
    for (const auto& [d, _] : apps_of_domain) real_domains.insert(d);
    const auto ips = urlmodel::classify_ip_domains(real_domains);

    const fs::path out = config.out_dir;
    fs::create_directories(out);
    if (config.emit_csv()) {
      std::string a = "domains,apps\n";
      for (const auto& [k, v] : domains_hist) a += std::to_string(k) + "," + std::to_string(v) + "\n";
      write_text(out / "domains_per_app.csv", a);
      std::string b = "apps,domains\n";
      for (const auto& [k, v] : apps_hist) b += std::to_string(k) + "," + std::to_string(v) + "\n";
      write_text(out / "apps_per_domain.csv", b);
      std::string t = "domain,apps\n";
      for (const auto& [d, n] : ranking) t += urlmodel::csv_field(d) + "," + std::to_string(n) + "\n";
      write_text(out / "top_domains.csv", t);
      std::string ip = "domain,apps\n";
      for (const auto& d : ips)
        ip += urlmodel::csv_field(d) + "," + std::to_string(apps_of_domain[d].size()) + "\n";
      write_text(out / "ip_domains.csv", ip);
      std::string s = "unit,domain,path,key,value\n";
      for (const auto& [unit, vt] : secrets) {
        s += urlmodel::csv_field(unit);
        for (const auto& f : vt) s += "," + urlmodel::csv_field(f);
        s += "\n";
      }
      write_text(out / "secrets.csv", s);
    }
    if (config.emit_json()) {
      ojson j;
      j["apps"] = analyzed;
      j["failed"] = units.size() - analyzed;
      j["domains"] = apps_of_domain.size();
      auto& h1 = j["domains_per_app"] = ojson::array();
      for (const auto& [k, v] : domains_hist) h1.push_back({{"domains", k}, {"apps", v}});
      auto& h2 = j["apps_per_domain"] = ojson::array();
      for (const auto& [k, v] : apps_hist) h2.push_back({{"apps", k}, {"domains", v}});
      auto& top = j["top_domains"] = ojson::array();
      for (const auto& [d, n] : ranking) top.push_back({{"domain", d}, {"apps", n}});
      j["ip_domains"] = ips;
      auto& sj = j["secrets"] = ojson::array();
      for (const auto& [unit, vt] : secrets)
        sj.push_back({{"unit", unit}, {"domain", vt[0]}, {"path", vt[1]}, {"key", vt[2]}, {"value", vt[3]}});
      write_text(out / "macro.json", j.dump(2) + "\n");
    }
  });
}

}  // namespace urlweaver::cli
