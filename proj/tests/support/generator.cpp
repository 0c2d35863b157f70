#include "generator.hpp"

#include <array>
#include <sstream>
#include <vector>

namespace urlweaver::testing {
namespace {

constexpr std::array kHosts = {"https://api.example.com", "http://cdn.example.net",
                               "https://weather.example.com", "http://10.0.0.7:8080",
                               "HTTPS://Shop.Example.org", "http://a.co"};
constexpr std::array kPieces = {"/api", "/v1", "/users", "/", "?", "&", "q=", "id=",
                                "x", "=", "lang=en", "&page=2", "/list", "?sort=", "clientsecret=abc"};
constexpr std::array kStarts = {"/", "/api", "/v1/", "?", "/users?"};
constexpr std::array kOpaque = {"@this.token", "@this.time", "call getCity()", "call userId()",
                                "@cfg.base.path"};

class Gen {
 public:
  Gen(std::mt19937_64& rng, const GenParams& p) : rng_(rng), p_(p) {}

  std::string method(const std::string& name) {
    out_.str({});
    out_ << "method " << name << "(p) {\n";
    line(1, "b = newbuilder");
    line(1, std::string("append b \"") + pick(kHosts) + "\"");
    ++appends_;
    if (p_.url_shaped) {
      line(1, std::string("append b \"") + pick(kStarts) + "\"");
      ++appends_;
    }
    if (p_.copies && coin(0.3)) {
      line(1, "c = copy b");
      alias_ = true;
    }
    block(1);
    line(1, "url = tostring b");
    line(1, "request url");
    out_ << "}\n";
    return out_.str();
  }

 private:
  template <class Pool>
  const char* pick(const Pool& pool) {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng_)];
  }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t upto(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng_); }

  void line(std::size_t depth, const std::string& s) {
    out_ << std::string(depth * 2, ' ') << s << '\n';
  }

  std::string target() { return alias_ && coin(0.5) ? "c" : "b"; }

  void statement(std::size_t depth) {
    double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < 0.18 && branches_ < p_.max_branches && depth <= p_.max_depth) {
      ++branches_;
      line(depth, "if (*) {");
      block(depth + 1);
      if (p_.else_arms && coin(0.7)) {
        line(depth, "} else {");
        block(depth + 1);
      }
      line(depth, "}");
    } else if (r < 0.24 && p_.loops && branches_ < p_.max_branches && depth <= p_.max_depth) {
      ++branches_;  // a loop forks like an if
      line(depth, "loop {");
      block(depth + 1);
      line(depth, "}");
    } else if (r < 0.32 && p_.formats) {
      std::string f = "f" + std::to_string(fresh_++);
      line(depth, f + " = format \"/item/%s?n=%d\" " + std::string(pick(kOpaque)) + " \"5\"");
      line(depth, "append " + target() + " " + f);
      ++appends_;
    } else if (r < 0.36 && p_.tostrings) {
      line(depth, "s" + std::to_string(fresh_++) + " = tostring " + target());
    } else if (r < 0.5) {
      line(depth, "append " + target() + " " + pick(kOpaque));
      ++appends_;
    } else if (r < 0.55) {
      line(depth, "append " + target() + " p");
      ++appends_;
    } else {
      line(depth, "append " + target() + " \"" + pick(kPieces) + "\"");
      ++appends_;
    }
  }

  void block(std::size_t depth) {
    std::size_t n = 1 + upto(depth == 1 ? p_.top_level : 3);
    for (std::size_t i = 0; i < n && appends_ < p_.max_appends; ++i) statement(depth);
  }

  std::mt19937_64& rng_;
  const GenParams& p_;
  std::ostringstream out_;
  std::size_t appends_ = 0;
  std::size_t branches_ = 0;
  std::size_t fresh_ = 0;
  bool alias_ = false;
};

}  // namespace

std::string random_method(std::mt19937_64& rng, const std::string& name, const GenParams& params) {
  return Gen(rng, params).method(name);
}

std::string random_program(std::mt19937_64& rng, std::size_t methods, const GenParams& params) {
  std::string out;
  for (std::size_t i = 0; i < methods; ++i) out += random_method(rng, "m" + std::to_string(i), params);
  return out;
}

}  // namespace urlweaver::testing
