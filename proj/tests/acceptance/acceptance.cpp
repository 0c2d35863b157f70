// One line per acceptance criterion, PASS or FAIL. Exit status is the number
// of failed criteria.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "generator.hpp"
#include "oracle.hpp"
#include "urlweaver/analysis.hpp"
#include "urlweaver/compare.hpp"
#include "urlweaver/components.hpp"
#include "urlweaver/error.hpp"
#include "urlweaver/strana.hpp"

namespace fs = std::filesystem;
using namespace urlweaver;
using urlmodel::ComponentSets;
using urlmodel::SinkKind;
using urlmodel::UrlPattern;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
  bool ok = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_secs(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << "s";
  return o.str();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("urlweaver_acc_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::set<std::string> csv_rows(const fs::path& csv) {
  auto ls = lines_of(slurp(csv));
  if (ls.empty()) throw std::runtime_error("missing " + csv.string());
  return {ls.begin() + 1, ls.end()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return files;
}

cli::RunConfig config_for(std::vector<fs::path> inputs, fs::path out) {
  cli::RunConfig c;
  c.inputs = std::move(inputs);
  c.out_dir = std::move(out);
  return c;
}

const fs::path kFixtures = URLWEAVER_FIXTURE_DIR;

// The acceptance corpus: 100 multi-method programs, loops allowed, each host
// literal followed by a path or query start.
const std::vector<std::string>& corpus() {
  static const std::vector<std::string> programs = [] {
    std::mt19937_64 rng(4242);
    testing::GenParams gp;
    gp.loops = true;
    gp.url_shaped = true;
    std::vector<std::string> out;
    for (int i = 0; i < 100; ++i) out.push_back(testing::random_program(rng, 1 + rng() % 5, gp));
    return out;
  }();
  return programs;
}

std::vector<fs::path> write_corpus(const fs::path& dir, std::size_t n) {
  std::vector<fs::path> files;
  for (std::size_t i = 0; i < n; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "app%03zu.sir", i);
    files.push_back(dir / name);
    spit(files.back(), corpus().at(i));
  }
  return files;
}

std::set<TokenSeq> language(const strana::StringAutomaton& a) {
  auto l = language_of(a, 1'000'000);
  if (l.truncated) throw std::runtime_error("language truncated");
  return {l.sequences.begin(), l.sequences.end()};
}

std::map<strana::SiteId, std::set<TokenSeq>> languages(const std::string& src) {
  auto m = sir::parse_program(src).methods.at(0);
  std::map<strana::SiteId, std::set<TokenSeq>> out;
  for (const auto& [site, a] : strana::build_automata(m, strana::analyze_aliases(m))) out[site] = language(a);
  return out;
}

std::string pattern_key(const UrlPattern& p) {
  std::string k = p.render();
  for (const auto& h : p.holes()) k += "|" + h;
  return k;
}

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::string flat(const TokenSeq& t) {
  std::string s;
  for (const auto& tok : t)
    if (!tok.is_hole()) s += tok.text;
  return s;
}

// ---------------------------------------------------------------------------

Result weather_end_to_end() {
  auto t0 = Clock::now();
  const std::string expected_json =
      R"j({"entry":0,"exits":[7],"edges":[{"from":0,"to":1,"lit":"https://weather.example.com"},)j"
      R"j({"from":1,"to":2,"lit":"?"},{"from":2,"to":3,"lit":"time="},{"from":3,"to":4,"lit":"today"},)j"
      R"j({"from":3,"to":4,"hole":"this.time"},{"from":4,"to":5,"lit":"&"},{"from":5,"to":6,"lit":"city="},)j"
      R"j({"from":6,"to":7,"hole":"getCity()"}]})j";
  const std::set<std::string> want = {"https://weather.example.com?time=today&city=[ ]",
                                      "https://weather.example.com?time=[ ]&city=[ ]"};

  auto prog = sir::parse_program(slurp(kFixtures / "weather.sir"), "weather");
  auto an = urlmodel::analyze_program(prog);
  std::vector<const strana::StringAutomaton*> builders;
  for (const auto& s : an.sinks)
    if (s.kind == SinkKind::Builder) builders.push_back(&s.automaton);
  if (builders.size() != 1) return {false, std::to_string(builders.size()) + " builder automata"};
  const auto& a = *builders[0];
  std::size_t forks = 0, max_out = 0;
  for (const auto& out : a.adjacency()) {
    forks += out.size() > 1;
    max_out = std::max(max_out, out.size());
  }
  bool shape = a.state_count() == 8 && a.edges().size() == 8 && forks == 1 && max_out == 2 &&
               strana::to_json(a) == expected_json;

  std::set<std::string> got;
  for (const auto& r : an.patterns) got.insert(r.pattern.render());
  bool patterns = an.patterns.size() == 2 && got == want;

  TempDir t("weather");
  std::ostringstream log;
  bool cli_ok = cli::cmd_analyze(config_for({kFixtures / "weather.sir"}, t.path), log) == 0;
  std::set<std::string> exported;
  auto ls = lines_of(slurp(t.path / "patterns.jsonl"));
  for (const auto& l : ls) exported.insert(nlohmann::json::parse(l).at("pattern").get<std::string>());
  cli_ok = cli_ok && ls.size() == 2 && exported == want;

  double secs = seconds_since(t0);
  std::ostringstream d;
  d << a.state_count() << " states, " << a.edges().size() << " edges, " << forks << " fork; "
    << an.patterns.size() << " patterns, exported " << ls.size() << "; " << fmt_secs(secs);
  return {shape && patterns && cli_ok && secs < 1.0, d.str()};
}

Result component_counts() {
  std::vector<UrlPattern> ps = {
      urlmodel::parse_pattern_text("http://example.com/api/info?user=bar&limit=12"),
      urlmodel::parse_pattern_text("http://example.com/[ ]?show=[ ]"),
      urlmodel::parse_pattern_text("http://example.com/api/list?sort=[ ]"),
  };
  auto s = urlmodel::decompose(ps);
  std::ostringstream d;
  d << s.domains.size() << "/" << s.path_pairs.size() << "/" << s.key_triples.size() << "/"
    << s.value_tuples.size();
  return {s.domains.size() == 1 && s.path_pairs.size() == 3 && s.key_triples.size() == 4 &&
              s.value_tuples.size() == 4,
          d.str()};
}

Result oracle_equivalence() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  testing::GenParams gp;  // loop-free, <= 12 branches, <= 30 appends
  urlmodel::AnalysisOptions opt;
  opt.cap = 1u << 22;
  std::size_t mismatches = 0, compared = 0, max_branches = 0;
  std::string first_bad;
  for (int i = 0; i < 500; ++i) {
    auto src = testing::random_method(rng, "m", gp);
    auto prog = sir::parse_program(src);
    const auto& m = prog.methods.at(0);
    max_branches = std::max(max_branches, testing::branch_count(m));

    std::map<sir::InstrId, std::set<std::string>> want, got;
    for (const auto& [site, seqs] : testing::brute_force_strings(m))
      for (const auto& seq : seqs) {
        try {
          want[site].insert(pattern_key(urlmodel::parse_pattern(seq)));
        } catch (const Unparseable&) {
        }
      }
    std::erase_if(want, [](const auto& kv) { return kv.second.empty(); });

    auto an = urlmodel::analyze_program(prog, opt);
    for (const auto& r : an.patterns)
      if (r.kind == SinkKind::Builder) got[r.site].insert(pattern_key(r.pattern));
    for (const auto& [site, keys] : want) compared += keys.size();
    if (got != want || an.truncated != 0) {
      if (mismatches++ == 0) first_bad = src;
    }
  }
  double secs = seconds_since(t0);
  if (mismatches) std::cerr << "oracle mismatch on:\n" << first_bad;
  std::ostringstream d;
  d << "500 methods, " << compared << " patterns, " << mismatches << " mismatches, max " << max_branches
    << " branches; " << fmt_secs(secs);
  return {mismatches == 0 && max_branches <= 12 && secs < 60.0, d.str()};
}

bool starts_with_url(const std::string& s) {
  std::string low(s.substr(0, 8));
  std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
  return low.rfind("http://", 0) == 0 || low.rfind("https://", 0) == 0;
}

// an append that comes after a URL literal append in preorder
bool has_append_after_url_literal(const sir::MethodIR& m) {
  bool seen = false, found = false;
  sir::for_each_instruction(m.body, [&](const sir::Instruction& ins) {
    const auto* a = std::get_if<sir::Append>(&ins.op);
    if (!a) return;
    if (seen) found = true;
    const auto* lit = std::get_if<sir::Literal>(&a->value);
    if (lit && starts_with_url(lit->text)) seen = true;
  });
  return found;
}

template <class T>
bool strict_superset(const std::set<T>& big, const std::set<T>& small) {
  return big.size() > small.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Result superset_law() {
  std::size_t included = 0, eligible = 0, strict = 0;
  for (const auto& src : corpus()) {
    auto prog = sir::parse_program(src);
    auto s = urlmodel::analyze_program(prog).components();
    std::vector<UrlPattern> cps;
    for (const auto& c : urlmodel::extract_constants(prog).constants) cps.push_back(c.pattern);
    auto c = urlmodel::decompose(cps);
    included += urlmodel::includes(s, c);
    bool e = std::any_of(prog.methods.begin(), prog.methods.end(), has_append_after_url_literal);
    eligible += e;
    if (e && (strict_superset(s.path_pairs, c.path_pairs) || strict_superset(s.key_triples, c.key_triples) ||
              strict_superset(s.value_tuples, c.value_tuples)))
      ++strict;
  }

  // the same law on the exported aggregate tables
  TempDir t("superset");
  auto files = write_corpus(t.path / "in", corpus().size());
  std::ostringstream log;
  bool ran = cli::cmd_analyze(config_for(files, t.path / "s"), log) == 0 &&
             cli::cmd_constants(config_for(files, t.path / "c"), log) == 0;
  std::size_t tables = 0;
  for (const char* f : {"domains.csv", "path_pairs.csv", "key_triples.csv", "value_tuples.csv"}) {
    auto srows = csv_rows(t.path / "s" / f), crows = csv_rows(t.path / "c" / f);
    tables += std::includes(srows.begin(), srows.end(), crows.begin(), crows.end());
  }

  std::ostringstream d;
  d << included << "/100 included, strict on " << strict << "/" << eligible << " eligible, " << tables
    << "/4 exported levels included";
  return {ran && included == 100 && strict == eligible && eligible > 0 && tables == 4, d.str()};
}

Result path_insensitivity() {
  auto prog = sir::parse_program(slurp(kFixtures / "two_ifs.sir"));
  auto an = urlmodel::analyze_program(prog);
  // the request string is the builder; its host literal also seeds a sink of
  // its own because "/" is a path no builder pattern has
  std::set<std::string> distinct;
  std::size_t builder = 0, seeded = 0;
  for (const auto& r : an.patterns) {
    if (r.kind == SinkKind::Builder) {
      ++builder;
      distinct.insert(r.pattern.render());
    } else {
      ++seeded;
    }
  }
  return {builder == 4 && distinct.size() == 4 && seeded <= 1,
          std::to_string(builder) + " builder patterns, " + std::to_string(distinct.size()) + " distinct, " +
              std::to_string(seeded) + " seeded literal"};
}

Result loop_bound() {
  const std::string marker = "zq9zq";
  std::vector<std::string> methods = {slurp(kFixtures / "weather.sir")};
  std::mt19937_64 rng(66);
  testing::GenParams gp;
  gp.max_appends = 14;
  gp.max_branches = 4;
  for (int i = 0; i < 60; ++i) methods.push_back(testing::random_method(rng, "m", gp));

  std::size_t wrapped = 0, bad_union = 0, bad_marker = 0;
  for (const auto& src : methods) {
    auto ls = lines_of(src);
    auto join = [&](std::size_t skip, const std::string& with) {
      std::string out;
      for (std::size_t k = 0; k < ls.size(); ++k) {
        if (k != skip) out += ls[k] + "\n";
        else if (!with.empty()) out += with + "\n";
      }
      return out;
    };
    auto base = languages(src);
    for (std::size_t i = 0; i < ls.size(); ++i) {
      auto start = ls[i].find_first_not_of(' ');
      if (start == std::string::npos || ls[i].compare(start, 7, "append ") != 0) continue;
      std::string stmt = ls[i].substr(start);
      std::string target = stmt.substr(7, stmt.find(' ', 7) - 7);
      ++wrapped;

      auto looped = languages(join(i, "loop { " + stmt + " }"));
      auto without = languages(join(i, ""));
      for (auto& [site, l] : without) l.insert(base.at(site).begin(), base.at(site).end());
      if (looped != without) ++bad_union;

      std::string mark = "append " + target + " \"" + marker + "\"";
      auto mlooped_src = join(i, "loop { " + mark + " }");
      bool seen0 = false, seen1 = false, twice = false;
      for (const auto& [site, l] : languages(mlooped_src))
        for (const auto& seq : l) {
          auto n = occurrences(flat(seq), marker);
          seen0 = seen0 || n == 0;
          seen1 = seen1 || n == 1;
          twice = twice || n > 1;
        }
      for (const auto& r : urlmodel::analyze_program(sir::parse_program(mlooped_src)).patterns)
        twice = twice || occurrences(r.pattern.render(), marker) > 1;
      if (twice || !seen0 || !seen1) ++bad_marker;
    }
  }
  std::ostringstream d;
  d << wrapped << " appends wrapped, " << bad_union << " union failures, " << bad_marker << " marker failures";
  return {wrapped > 100 && bad_union == 0 && bad_marker == 0, d.str()};
}

// hand-built host extraction and suffix test
std::string oracle_host(std::string url) {
  auto scheme = url.find("://");
  if (scheme != std::string::npos) url = url.substr(scheme + 3);
  url = url.substr(0, url.find_first_of("/?#"));
  if (auto at = url.rfind('@'); at != std::string::npos) url = url.substr(at + 1);
  url = url.substr(0, url.find(':'));
  std::transform(url.begin(), url.end(), url.begin(), [](unsigned char c) { return std::tolower(c); });
  return url;
}

bool oracle_is_ad(const std::string& url, const std::vector<std::string>& list) {
  auto h = oracle_host(url);
  for (const auto& d : list)
    if (h == d || (h.size() > d.size() && h.ends_with("." + d))) return true;
  return false;
}

// index into the summary's content_types array
std::size_t oracle_category(const std::optional<std::string>& ct) {
  static const std::vector<std::regex> table = [] {
    std::vector<std::regex> out;
    for (const char* re : {"^image", "html", "javascript", "json", "octet|stream", "css", "cache",
                           "(application|text)/.*xml", "^video", "font|ttf", "zip", "plain", "^audio", "thrift"})
      out.emplace_back(re, std::regex::icase | std::regex::ECMAScript);
    return out;
  }();
  if (!ct) return table.size();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (std::regex_search(*ct, table[i])) return i;
  return table.size() + 1;
}

std::string build_log(std::mt19937_64& rng, const std::vector<std::string>& hosts,
                      std::vector<std::size_t>& categories, std::size_t& ads,
                      const std::vector<std::string>& ad_list) {
  const std::vector<std::optional<std::string>> types = {
      std::nullopt, "image/png", "IMAGE/JPEG", "text/html; charset=utf-8", "application/javascript",
      "application/json", "application/octet-stream", "text/css", "text/cache-manifest", "application/xml",
      "text/xml", "video/mp4", "font/woff2", "application/x-font-ttf", "application/zip", "text/plain",
      "audio/mpeg", "application/x-thrift", "application/x-protobuf", "multipart/form-data",
      "application/xhtml+xml", "image/svg+xml"};
  const std::vector<int> ok = {200, 201, 204, 301, 302, 304, 399};
  const std::vector<int> err = {100, 199, 400, 403, 404, 410, 500, 503};

  std::vector<std::string> method(1000, "POST");
  std::fill(method.begin(), method.begin() + 883, "GET");
  std::shuffle(method.begin(), method.end(), rng);
  // 0 success, 1 http error, 2 client disconnect, 3 server disconnect
  std::vector<int> outcome(1000, 1);
  std::fill(outcome.begin(), outcome.begin() + 500, 0);
  std::fill(outcome.begin() + 500, outcome.begin() + 620, 2);
  std::fill(outcome.begin() + 620, outcome.begin() + 700, 3);
  std::shuffle(outcome.begin(), outcome.end(), rng);

  categories.assign(16, 0);
  ads = 0;
  std::string out;
  for (std::size_t i = 0; i < 1000; ++i) {
    nlohmann::ordered_json j;
    std::string url = "https://" + hosts[rng() % hosts.size()] + "/r/" + std::to_string(rng() % 50);
    j["url"] = url;
    j["method"] = method[i];
    std::optional<std::string> ct;
    switch (outcome[i]) {
      case 0: j["status"] = ok[rng() % ok.size()]; j["outcome"] = "responded"; break;
      case 1: j["status"] = err[rng() % err.size()]; j["outcome"] = "responded"; break;
      case 2: j["outcome"] = "client_disconnect"; break;
      default: j["outcome"] = "server_disconnect";
    }
    if (outcome[i] <= 1) ct = types[rng() % types.size()];
    j["content_type"] = ct ? nlohmann::ordered_json(*ct) : nlohmann::ordered_json(nullptr);
    j["t"] = static_cast<double>(i) * 0.004;
    j["app"] = "app" + std::to_string(rng() % 7);
    out += j.dump() + "\n";
    ++categories[oracle_category(ct)];
    ads += oracle_is_ad(url, ad_list);
  }
  return out;
}

Result dynamic_stats() {
  TempDir t("dynstats");
  std::mt19937_64 rng(1000);
  const std::vector<std::string> ad_list = {"doubleclick.net", "adnxs.com", "ads.example"};
  const std::vector<std::string> hosts = {"ads.doubleclick.net", "doubleclick.net", "notdoubleclick.net",
                                          "x.y.adnxs.com", "adnxs.com.evil.org", "api.example.com",
                                          "cdn.example.net:8443", "user@ads.example", "Ads.Example",
                                          "example.ads", "10.1.2.3"};
  std::vector<std::size_t> want_categories;
  std::size_t want_ads = 0;
  spit(t.path / "capture.jsonl", build_log(rng, hosts, want_categories, want_ads, ad_list));
  spit(t.path / "ads.txt", "# hosts style\n0.0.0.0 doubleclick.net\nadnxs.com\n127.0.0.1 ads.example\n");

  auto t0 = Clock::now();
  auto c = config_for({t.path / "capture.jsonl"}, t.path / "out");
  c.ads = t.path / "ads.txt";
  std::ostringstream log;
  if (cli::cmd_dynstats(c, log) != 0) return {false, "dynstats failed: " + log.str()};
  double secs = seconds_since(t0);

  auto s = nlohmann::json::parse(slurp(t.path / "out" / "summary.json"));
  std::map<std::string, std::pair<std::size_t, double>> methods;
  for (const auto& m : s.at("methods"))
    methods[m.at("method").get<std::string>()] = {m.at("count").get<std::size_t>(), m.at("share").get<double>()};
  bool m_ok = methods.size() == 2 && methods["GET"] == std::pair<std::size_t, double>{883, 88.3} &&
              methods["POST"] == std::pair<std::size_t, double>{117, 11.7};
  const auto& success = s.at("outcomes").at("success");
  bool s_ok = success.at("count") == 500 && success.at("share").get<double>() == 50.0;

  std::vector<std::size_t> got_categories;
  std::size_t category_total = 0;
  for (const auto& row : s.at("content_types")) {
    got_categories.push_back(row.at("requests").get<std::size_t>());
    category_total += got_categories.back();
  }
  bool c_ok = category_total == 1000 && got_categories == want_categories;
  bool a_ok = s.at("ad_requests").get<std::size_t>() == want_ads && want_ads > 0 && want_ads < 1000;

  std::ostringstream d;
  d << "GET " << methods["GET"].second << "% POST " << methods["POST"].second << "%, success "
    << success.at("share").get<double>() << "%, categories sum " << category_total
    << (c_ok ? " (oracle agrees)" : " (oracle differs)") << ", ads " << s.at("ad_requests") << " vs oracle "
    << want_ads << "; " << fmt_secs(secs);
  return {s.at("total") == 1000 && m_ok && s_ok && c_ok && a_ok && secs < 5.0, d.str()};
}

ComponentSets random_sets(std::mt19937_64& rng) {
  ComponentSets s;
  auto pick = [&](int n) { return std::string(1, static_cast<char>('a' + rng() % n)); };
  std::size_t n = rng() % 101;
  for (std::size_t i = 0; i < n; ++i) s.domains.insert(pick(12) + pick(12) + ".com");
  n = rng() % 101;
  for (std::size_t i = 0; i < n; ++i) s.path_pairs.insert({pick(3) + ".com", "/" + pick(6) + pick(6)});
  n = rng() % 101;
  for (std::size_t i = 0; i < n; ++i) s.key_triples.insert({pick(3) + ".com", "/" + pick(4), pick(8) + pick(8)});
  n = rng() % 101;
  for (std::size_t i = 0; i < n; ++i)
    s.value_tuples.insert({pick(2) + ".com", "/" + pick(3), pick(4), pick(8) + pick(8)});
  return s;
}

Result comparison_partition() {
  std::mt19937_64 rng(89);
  std::size_t bad = 0, trials = 0;
  for (int i = 0; i < 500; ++i) {
    auto d = random_sets(rng), s = random_sets(rng);
    auto r = compare::compare_components(d, s);
    for (auto l : compare::kLevels) {
      ++trials;
      auto dr = compare::level_rows(d, l), sr = compare::level_rows(s, l);
      std::size_t d_only = 0, both = 0, s_only = 0;
      for (const auto& x : dr) (std::find(sr.begin(), sr.end(), x) != sr.end() ? both : d_only)++;
      for (const auto& y : sr) s_only += std::find(dr.begin(), dr.end(), y) == dr.end();
      const auto& lc = r.at(l);
      std::set<compare::Row> dd(lc.d_only.begin(), lc.d_only.end()), ss(lc.s_only.begin(), lc.s_only.end());
      dd.insert(lc.both.begin(), lc.both.end());
      ss.insert(lc.both.begin(), lc.both.end());
      bool ok = lc.d_only.size() == d_only && lc.both.size() == both && lc.s_only.size() == s_only &&
                dd == std::set<compare::Row>(dr.begin(), dr.end()) &&
                ss == std::set<compare::Row>(sr.begin(), sr.end());
      bad += !ok;
    }
  }
  return {bad == 0, std::to_string(trials) + " level partitions, " + std::to_string(bad) + " wrong"};
}

Result determinism() {
  TempDir t("determinism");
  auto files = write_corpus(t.path / "in", 40);
  files.push_back(kFixtures / "weather.sir");
  files.push_back(kFixtures / "two_ifs.sir");
  spit(t.path / "ads.txt", "doubleclick.net\n");
  const std::vector<std::string> names = {"analyze", "constants", "dynstats", "compare", "macro"};
  std::size_t identical = 0;
  for (std::size_t which = 0; which < names.size(); ++which) {
    auto run = [&](std::size_t jobs, const std::string& tag) {
      auto c = config_for(files, t.path / (names[which] + tag));
      c.jobs = jobs;
      c.logs = {kFixtures / "burst.jsonl"};
      c.ads = t.path / "ads.txt";
      std::ostringstream log;
      int rc = 0;
      switch (which) {
        case 0: rc = cli::cmd_analyze(c, log); break;
        case 1: rc = cli::cmd_constants(c, log); break;
        case 2:
          c.inputs = c.logs;
          rc = cli::cmd_dynstats(c, log);
          break;
        case 3: rc = cli::cmd_compare(c, log); break;
        default: rc = cli::cmd_macro(c, log);
      }
      if (rc != 0) throw std::runtime_error(names[which] + " failed: " + log.str());
      return snapshot(c.out_dir);
    };
    auto a = run(1, "_a"), b = run(1, "_b"), c = run(8, "_c");
    identical += !a.empty() && a == b && a == c;
  }
  return {identical == names.size(),
          std::to_string(identical) + "/5 subcommands byte-identical across jobs 1, 1, 8"};
}

Result engineering_budget() {
  TempDir t("budget");
  std::mt19937_64 rng(10);
  testing::GenParams gp;
  gp.loops = true;
  gp.top_level = 40;
  gp.max_appends = 60;
  gp.max_branches = 8;
  auto src = testing::random_program(rng, 1000, gp);
  spit(t.path / "big.sir", src);
  std::size_t instructions = 0, methods = 0;
  for (const auto& m : sir::parse_program(src).methods) {
    instructions += m.instruction_count;
    ++methods;
  }

  auto t0 = Clock::now();
  std::ostringstream log;
  int rc = cli::cmd_analyze(config_for({t.path / "big.sir"}, t.path / "out"), log);
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << methods << " methods, " << instructions << " instructions; " << fmt_secs(secs);
  return {rc == 0 && methods == 1000 && instructions >= 50'000 && secs < 10.0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"weather end-to-end", weather_end_to_end},
      {"component counts 1/3/4/4", component_counts},
      {"oracle equivalence", oracle_equivalence},
      {"superset law", superset_law},
      {"path insensitivity", path_insensitivity},
      {"loop bound", loop_bound},
      {"dynamic stats", dynamic_stats},
      {"comparison partition", comparison_partition},
      {"determinism", determinism},
      {"engineering budget", engineering_budget},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.ok;
    std::cout << (r.ok ? "PASS " : "FAIL ") << name << ": " << r.detail << std::endl;
  }
  return failed;
}
