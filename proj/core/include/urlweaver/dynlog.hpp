#pragma once

// Captured request logs: ingestion, classification and summary statistics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace urlweaver::dynlog {

enum class Outcome { Responded, ClientDisconnect, ServerDisconnect };

struct RequestRecord {
  std::string url;
  std::string method;
  std::optional<int> status;  // present iff outcome == Responded
  Outcome outcome = Outcome::Responded;
  std::optional<std::string> content_type;
  double timestamp = 0.0;  // seconds since capture start
  std::optional<std::uint64_t> response_bytes;
  std::string app;
};

struct IngestError {
  std::size_t line = 0;
  std::string message;
};

struct LoadedLog {
  std::vector<RequestRecord> records;
  std::vector<IngestError> errors;
};

/// Parses JSON-lines text; malformed lines are reported, not fatal.
LoadedLog parse_log(std::string_view text);
/// Throws std::runtime_error if the file cannot be read.
LoadedLog load_log(const std::filesystem::path& path);

enum class SuccessClass { Success, HttpError, ClientDisconnect, ServerDisconnect };
std::string_view success_class_name(SuccessClass c);

/// Success iff a response arrived with 200 <= status <= 399.
SuccessClass classify_success(const RequestRecord& r);

/// Content-type categories in matching order, followed by None (no header)
/// and Uncategorized (no match).
enum class ContentCategory {
  Image,
  Html,
  JavaScript,
  Json,
  Stream,
  Css,
  Cache,
  Xml,
  Video,
  Font,
  Zip,
  Plain,
  Audio,
  Thrift,
  None,
  Uncategorized,
};
inline constexpr std::size_t kContentCategoryCount = 16;

std::string_view category_name(ContentCategory c);
/// The regular expression of a matched category (empty for None/Uncategorized).
std::string_view category_regex(ContentCategory c);

/// First matching expression wins; matching is case-insensitive over the
/// whole header value.
ContentCategory categorize_content(const std::optional<std::string>& content_type);

/// Lower-cased host of an absolute URL, without userinfo or port; empty
/// when the URL has no authority.
std::string host_of(std::string_view url);

/// Hosts-style list: one domain per line, '#' comments, and an optional
/// leading address column ("0.0.0.0 ads.example").
class AdList {
 public:
  AdList() = default;
  explicit AdList(std::set<std::string> domains) : domains_(std::move(domains)) {}

  static AdList parse(std::string_view text);
  static AdList load(const std::filesystem::path& path);

  /// Host equals a listed domain or is a subdomain of one.
  bool matches_host(std::string_view host) const;
  bool is_ad(std::string_view url) const { return matches_host(host_of(url)); }

  const std::set<std::string>& domains() const noexcept { return domains_; }

 private:
  std::set<std::string> domains_;
};

struct CategoryRow {
  std::size_t requests = 0;
  std::size_t ad_requests = 0;  // ad-classified successful requests
};

struct LogSummary {
  std::size_t total = 0;
  std::size_t unique_urls = 0;
  std::map<std::string, std::size_t> methods;
  std::array<std::size_t, 4> outcomes{};  // indexed by SuccessClass
  std::array<CategoryRow, kContentCategoryCount> categories{};
  std::size_t ad_requests = 0;  // all ad-classified requests
  std::map<std::int64_t, std::size_t> per_second;
  std::map<std::string, std::size_t> per_domain;
  std::map<std::string, std::size_t> per_app;

  std::size_t count(SuccessClass c) const { return outcomes[static_cast<std::size_t>(c)]; }
  const CategoryRow& row(ContentCategory c) const { return categories[static_cast<std::size_t>(c)]; }
};

/// Percentage rounded to one decimal place; 0 when `whole` is 0.
double share(std::size_t part, std::size_t whole);

LogSummary summarize(const std::vector<RequestRecord>& records, const AdList& ads = {});

/// Summary as a JSON document (percentages with one decimal).
std::string summary_json(const LogSummary& s);
/// "second,count" rows in ascending order, with a header.
std::string timeline_csv(const LogSummary& s);

}  // namespace urlweaver::dynlog
