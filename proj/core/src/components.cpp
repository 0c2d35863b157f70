#include "urlweaver/components.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace urlweaver::urlmodel {

namespace {

std::string path_key(const UrlPattern& p) {
  std::string out;
  for (const auto& seg : p.path) {
    out += '/';
    out += render(seg);
  }
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

void ComponentSets::add(const UrlPattern& p) {
  const std::string domain = lower(render(p.domain));
  const std::string path = path_key(p);
  domains.insert(domain);
  path_pairs.insert({domain, path});
  for (const auto& q : p.query) {
    const std::string key = render(q.key);
    key_triples.insert({domain, path, key});
    value_tuples.insert({domain, path, key, render(q.value)});
  }
}

void ComponentSets::merge(const ComponentSets& other) {
  domains.insert(other.domains.begin(), other.domains.end());
  path_pairs.insert(other.path_pairs.begin(), other.path_pairs.end());
  key_triples.insert(other.key_triples.begin(), other.key_triples.end());
  value_tuples.insert(other.value_tuples.begin(), other.value_tuples.end());
}

bool ComponentSets::projections_consistent() const {
  for (const auto& pp : path_pairs)
    if (!domains.count(pp[0])) return false;
  for (const auto& kt : key_triples)
    if (!path_pairs.count({kt[0], kt[1]})) return false;
  for (const auto& vt : value_tuples)
    if (!key_triples.count({vt[0], vt[1], vt[2]})) return false;
  return true;
}

ComponentSets decompose(const std::vector<UrlPattern>& patterns) {
  ComponentSets sets;
  for (const auto& p : patterns) sets.add(p);
  return sets;
}

bool includes(const ComponentSets& super, const ComponentSets& sub) {
  auto inc = [](const auto& a, const auto& b) {
    return std::includes(a.begin(), a.end(), b.begin(), b.end());
  };
  return inc(super.domains, sub.domains) && inc(super.path_pairs, sub.path_pairs) &&
         inc(super.key_triples, sub.key_triples) && inc(super.value_tuples, sub.value_tuples);
}

std::vector<ValueTuple> scan_secrets(const ComponentSets& sets) {
  std::vector<ValueTuple> flagged;
  for (const auto& vt : sets.value_tuples) {
    const std::string key = lower(vt[2]);
    if (key.find("secret") != std::string::npos || key.find("key") != std::string::npos)
      flagged.push_back(vt);
  }
  return flagged;
}

bool is_ipv4_domain(const std::string& domain) {
  std::string_view host = domain;
  if (auto colon = host.find(':'); colon != std::string_view::npos) host = host.substr(0, colon);
  int octets = 0;
  std::size_t i = 0;
  while (true) {
    std::size_t start = i;
    int value = 0;
    while (i < host.size() && std::isdigit(static_cast<unsigned char>(host[i])) && i - start < 4)
      value = value * 10 + (host[i++] - '0');
    const std::size_t len = i - start;
    if (len == 0 || len > 3 || value > 255) return false;
    ++octets;
    if (i == host.size()) break;
    if (host[i] != '.' || octets == 4) return false;
    ++i;
  }
  return octets == 4;
}

std::set<std::string> classify_ip_domains(const std::set<std::string>& domains) {
  std::set<std::string> out;
  for (const auto& d : domains)
    if (is_ipv4_domain(d)) out.insert(d);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

template <std::size_t N>
void write_rows(const std::filesystem::path& file, const std::array<const char*, N>& header,
                const std::set<std::array<std::string, N>>& rows) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  for (std::size_t i = 0; i < N; ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < N; ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

}  // namespace

void write_component_csvs(const ComponentSets& sets, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::set<std::array<std::string, 1>> domains;
  for (const auto& d : sets.domains) domains.insert({d});
  write_rows<1>(dir / "domains.csv", {"domain"}, domains);
  write_rows<2>(dir / "path_pairs.csv", {"domain", "path"}, sets.path_pairs);
  write_rows<3>(dir / "key_triples.csv", {"domain", "path", "key"}, sets.key_triples);
  write_rows<4>(dir / "value_tuples.csv", {"domain", "path", "key", "value"}, sets.value_tuples);
}

}  // namespace urlweaver::urlmodel
