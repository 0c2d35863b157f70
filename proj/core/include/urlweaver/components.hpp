#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "urlweaver/url.hpp"

namespace urlweaver::urlmodel {

using PathPair = std::array<std::string, 2>;
using KeyTriple = std::array<std::string, 3>;
using ValueTuple = std::array<std::string, 4>;

/// The four nested projections of a set of URLs. Every component is a
/// rendered key in which holes read "[ ]"; domains are lower-case.
struct ComponentSets {
  std::set<std::string> domains;
  std::set<PathPair> path_pairs;
  std::set<KeyTriple> key_triples;
  std::set<ValueTuple> value_tuples;

  void add(const UrlPattern& p);
  void merge(const ComponentSets& other);

  /// Each tuple's prefix appears one level up.
  bool projections_consistent() const;

  bool operator==(const ComponentSets&) const = default;
};

ComponentSets decompose(const std::vector<UrlPattern>& patterns);

/// True when every level of `sub` is included in the same level of `super`.
bool includes(const ComponentSets& super, const ComponentSets& sub);

/// Value tuples whose key contains "secret" or "key", case-insensitively.
std::vector<ValueTuple> scan_secrets(const ComponentSets& sets);

/// Dotted-quad IPv4 test with octets 0-255; a ":port" suffix is ignored.
bool is_ipv4_domain(const std::string& domain);
std::set<std::string> classify_ip_domains(const std::set<std::string>& domains);

/// RFC 4180 style field quoting.
std::string csv_field(const std::string& s);

/// Writes domains.csv, path_pairs.csv, key_triples.csv and value_tuples.csv
/// under `dir`, each with a header row and sorted rows.
void write_component_csvs(const ComponentSets& sets, const std::filesystem::path& dir);

}  // namespace urlweaver::urlmodel
