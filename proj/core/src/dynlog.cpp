#include "urlweaver/dynlog.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace urlweaver::dynlog {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

RequestRecord record_from(const nlohmann::json& j) {
  auto fail = [](const std::string& why) { return std::invalid_argument(why); };
  if (!j.is_object()) throw fail("line is not a JSON object");
  auto required_string = [&](const char* key) {
    if (!j.contains(key)) throw fail(std::string("missing \"") + key + "\"");
    if (!j[key].is_string()) throw fail(std::string("\"") + key + "\" must be a string");
    return j[key].get<std::string>();
  };
  auto present = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };

  RequestRecord r;
  r.url = required_string("url");
  r.method = required_string("method");
  const std::string outcome = required_string("outcome");
  if (outcome == "responded")
    r.outcome = Outcome::Responded;
  else if (outcome == "client_disconnect")
    r.outcome = Outcome::ClientDisconnect;
  else if (outcome == "server_disconnect")
    r.outcome = Outcome::ServerDisconnect;
  else
    throw fail("unknown outcome \"" + outcome + "\"");

  if (present("status")) {
    if (!j["status"].is_number_integer()) throw fail("\"status\" must be an integer or null");
    if (r.outcome != Outcome::Responded) throw fail("\"status\" given for a disconnected request");
    r.status = j["status"].get<int>();
  } else if (r.outcome == Outcome::Responded) {
    throw fail("responded request without \"status\"");
  }

  if (present("content_type")) {
    if (!j["content_type"].is_string()) throw fail("\"content_type\" must be a string or null");
    r.content_type = j["content_type"].get<std::string>();
  }
  if (!j.contains("t") || !j["t"].is_number()) throw fail("\"t\" must be a number");
  r.timestamp = j["t"].get<double>();
  if (!(r.timestamp >= 0.0) || !std::isfinite(r.timestamp)) throw fail("\"t\" must be >= 0");
  if (present("bytes")) {
    if (!j["bytes"].is_number_unsigned()) throw fail("\"bytes\" must be a non-negative integer");
    r.response_bytes = j["bytes"].get<std::uint64_t>();
  }
  if (present("app")) {
    if (!j["app"].is_string()) throw fail("\"app\" must be a string");
    r.app = j["app"].get<std::string>();
  }
  return r;
}

}  // namespace

LoadedLog parse_log(std::string_view text) {
  LoadedLog log;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    try {
      log.records.push_back(record_from(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      log.errors.push_back({line_no, e.what()});
    } catch (const std::invalid_argument& e) {
      log.errors.push_back({line_no, e.what()});
    }
    if (end == text.size()) break;
  }
  return log;
}

LoadedLog load_log(const std::filesystem::path& path) { return parse_log(read_file(path)); }

std::string_view success_class_name(SuccessClass c) {
  switch (c) {
    case SuccessClass::Success: return "success";
    case SuccessClass::HttpError: return "http_error";
    case SuccessClass::ClientDisconnect: return "client_disconnect";
    case SuccessClass::ServerDisconnect: return "server_disconnect";
  }
  return "success";
}

SuccessClass classify_success(const RequestRecord& r) {
  switch (r.outcome) {
    case Outcome::ClientDisconnect: return SuccessClass::ClientDisconnect;
    case Outcome::ServerDisconnect: return SuccessClass::ServerDisconnect;
    case Outcome::Responded: break;
  }
  if (r.status && *r.status >= 200 && *r.status <= 399) return SuccessClass::Success;
  return SuccessClass::HttpError;
}

namespace {

struct CategoryDef {
  ContentCategory category;
  std::string_view name;
  std::string_view regex;
};

constexpr std::array<CategoryDef, kContentCategoryCount> kCategories{{
    {ContentCategory::Image, "Image", "^image"},
    {ContentCategory::Html, "HTML", "html"},
    {ContentCategory::JavaScript, "JavaScript", "javascript"},
    {ContentCategory::Json, "JSON", "json"},
    {ContentCategory::Stream, "Stream", "octet|stream"},
    {ContentCategory::Css, "CSS", "css"},
    {ContentCategory::Cache, "Cache", "cache"},
    {ContentCategory::Xml, "Xml", "(application|text)/.*xml"},
    {ContentCategory::Video, "Video", "^video"},
    {ContentCategory::Font, "Font", "font|ttf"},
    {ContentCategory::Zip, "Zip", "zip"},
    {ContentCategory::Plain, "Plain text", "plain"},
    {ContentCategory::Audio, "Audio", "^audio"},
    {ContentCategory::Thrift, "Thrift", "thrift"},
    {ContentCategory::None, "None", ""},
    {ContentCategory::Uncategorized, "Uncategorized", ""},
}};

constexpr std::size_t kMatchedCategories = 14;

const std::vector<std::regex>& compiled() {
  static const std::vector<std::regex> res = [] {
    std::vector<std::regex> v;
    for (std::size_t i = 0; i < kMatchedCategories; ++i)
      v.emplace_back(std::string(kCategories[i].regex),
                     std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    return v;
  }();
  return res;
}

}  // namespace

std::string_view category_name(ContentCategory c) {
  return kCategories[static_cast<std::size_t>(c)].name;
}
std::string_view category_regex(ContentCategory c) {
  return kCategories[static_cast<std::size_t>(c)].regex;
}

ContentCategory categorize_content(const std::optional<std::string>& content_type) {
  if (!content_type) return ContentCategory::None;
  const auto& res = compiled();
  for (std::size_t i = 0; i < res.size(); ++i)
    if (std::regex_search(*content_type, res[i])) return kCategories[i].category;
  return ContentCategory::Uncategorized;
}

std::string host_of(std::string_view url) {
  auto scheme = url.find("://");
  if (scheme == std::string_view::npos) return {};
  std::string_view rest = url.substr(scheme + 3);
  rest = rest.substr(0, rest.find_first_of("/?#"));
  if (auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
  if (!rest.empty() && rest.front() == '[') {
    auto close = rest.find(']');
    return lower(rest.substr(0, close == std::string_view::npos ? rest.size() : close + 1));
  }
  rest = rest.substr(0, rest.find(':'));
  std::string host = lower(rest);
  while (!host.empty() && host.back() == '.') host.pop_back();
  return host;
}

AdList AdList::parse(std::string_view text) {
  std::set<std::string> domains;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.empty()) continue;
    // "0.0.0.0 host [host...]" or a bare "host"
    bool address_first =
        cols.size() > 1 && cols[0].find_first_not_of("0123456789.:abcdefABCDEF") == std::string::npos;
    for (std::size_t i = address_first ? 1 : 0; i < cols.size(); ++i) {
      std::string d = lower(cols[i]);
      while (!d.empty() && d.back() == '.') d.pop_back();
      if (!d.empty() && d != "localhost") domains.insert(d);
    }
  }
  return AdList(std::move(domains));
}

AdList AdList::load(const std::filesystem::path& path) { return parse(read_file(path)); }

bool AdList::matches_host(std::string_view host) const {
  if (host.empty() || domains_.empty()) return false;
  std::string h = lower(host);
  std::string_view rest = h;
  while (true) {
    if (domains_.count(std::string(rest))) return true;
    auto dot = rest.find('.');
    if (dot == std::string_view::npos) return false;
    rest = rest.substr(dot + 1);
  }
}

double share(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0.0;
  return std::round(1000.0 * static_cast<double>(part) / static_cast<double>(whole)) / 10.0;
}

LogSummary summarize(const std::vector<RequestRecord>& records, const AdList& ads) {
  LogSummary s;
  std::set<std::string_view> urls;
  for (const auto& r : records) {
    ++s.total;
    urls.insert(r.url);
    ++s.methods[r.method];
    const SuccessClass sc = classify_success(r);
    ++s.outcomes[static_cast<std::size_t>(sc)];
    const bool ad = ads.is_ad(r.url);
    if (ad) ++s.ad_requests;
    auto& row = s.categories[static_cast<std::size_t>(categorize_content(r.content_type))];
    ++row.requests;
    if (ad && sc == SuccessClass::Success) ++row.ad_requests;
    ++s.per_second[static_cast<std::int64_t>(std::floor(r.timestamp))];
    ++s.per_domain[host_of(r.url)];
    ++s.per_app[r.app];
  }
  s.unique_urls = urls.size();
  return s;
}

std::string summary_json(const LogSummary& s) {
  nlohmann::ordered_json j;
  j["total"] = s.total;
  j["unique_urls"] = s.unique_urls;
  auto& methods = j["methods"] = nlohmann::ordered_json::array();
  for (const auto& [m, n] : s.methods)
    methods.push_back({{"method", m}, {"count", n}, {"share", share(n, s.total)}});
  auto& outcomes = j["outcomes"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < s.outcomes.size(); ++i)
    outcomes[std::string(success_class_name(static_cast<SuccessClass>(i)))] = {
        {"count", s.outcomes[i]}, {"share", share(s.outcomes[i], s.total)}};
  std::size_t ad_success = 0;
  auto& cats = j["content_types"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < kContentCategoryCount; ++i) {
    const auto& row = s.categories[i];
    ad_success += row.ad_requests;
    cats.push_back({{"category", kCategories[i].name},
                    {"regex", kCategories[i].regex},
                    {"requests", row.requests},
                    {"share", share(row.requests, s.total)},
                    {"ad_requests", row.ad_requests},
                    {"ad_share", share(row.ad_requests, row.requests)}});
  }
  j["ad_requests"] = s.ad_requests;
  j["ad_share"] = share(s.ad_requests, s.total);
  j["ad_successful_requests"] = ad_success;
  auto& domains = j["domains"] = nlohmann::ordered_json::array();
  for (const auto& [d, n] : s.per_domain) domains.push_back({{"domain", d}, {"requests", n}});
  auto& apps = j["apps"] = nlohmann::ordered_json::array();
  for (const auto& [a, n] : s.per_app) apps.push_back({{"app", a}, {"requests", n}});
  return j.dump(2) + "\n";
}

std::string timeline_csv(const LogSummary& s) {
  std::string out = "second,count\n";
  for (const auto& [sec, n] : s.per_second) out += std::to_string(sec) + "," + std::to_string(n) + "\n";
  return out;
}

}  // namespace urlweaver::dynlog
