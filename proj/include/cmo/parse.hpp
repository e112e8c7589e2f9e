#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cmo/orlicz.hpp"
#include "cmo/test_function.hpp"

namespace cmo {

namespace detail {

inline std::string strip_spaces(std::string_view in) {
  std::string out;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

inline double parse_number(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == nullptr || *end != '\0' || text.empty())
    throw GrammarError(where + ": bad number '" + text + "'");
  return v;
}

// "key1=v1,key2=v2" -> map; every key must come from `allowed`
inline std::map<std::string, double> parse_kv(const std::string& body,
                                              const std::vector<std::string>& allowed,
                                              const std::string& where) {
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = body.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw GrammarError(where + ": expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    bool ok = false;
    for (const auto& k : allowed) ok = ok || k == key;
    if (!ok) throw GrammarError(where + ": unknown key '" + key + "'");
    out[key] = parse_number(item.substr(eq + 1), where);
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

// Grammar: power:p=<v> | maxpow:p1=<v>,p2=<v> |
//          pwlog:p1=<v>,a=<v>,p2=<v>,b=<v>[,c=<v>] | conj(<spec>)
inline OrliczSpec parse_orlicz_spec(std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s.rfind("conj(", 0) == 0) {
    if (s.back() != ')')
      throw GrammarError("orlicz spec: conj(...) missing closing parenthesis");
    return conjugate(parse_orlicz_spec(s.substr(5, s.size() - 6)));
  }
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw GrammarError("orlicz spec: expected <kind>:<params>, got '" + s + "'");
  const std::string kind = s.substr(0, colon), body = s.substr(colon + 1);
  if (kind == "power") {
    const auto kv = detail::parse_kv(body, {"p"}, "power");
    if (!kv.count("p")) throw GrammarError("power: missing p");
    return OrliczSpec::power(kv.at("p"));
  }
  if (kind == "maxpow") {
    const auto kv = detail::parse_kv(body, {"p1", "p2"}, "maxpow");
    if (!kv.count("p1") || !kv.count("p2"))
      throw GrammarError("maxpow: needs p1 and p2");
    return OrliczSpec::max_power(kv.at("p1"), kv.at("p2"));
  }
  if (kind == "pwlog") {
    const auto kv = detail::parse_kv(body, {"p1", "a", "p2", "b", "c"}, "pwlog");
    if (!kv.count("p1") || !kv.count("a") || !kv.count("p2") || !kv.count("b"))
      throw GrammarError("pwlog: needs p1, a, p2, b");
    return OrliczSpec::inverse_power_log(kv.at("p1"), kv.at("a"), kv.at("p2"),
                                         kv.at("b"),
                                         kv.count("c") ? kv.at("c") : 1.0);
  }
  throw GrammarError("orlicz spec: unknown kind '" + kind + "'");
}

// Grammar: terms joined by '+', each [<scalar>*]atom with
//   atom := chi:t=<v> | chi:c=<x>,t=<v> | radpow:beta=<v>,t=<v>
inline TestFunction parse_test_function(std::string_view text, int n) {
  const std::string s = detail::strip_spaces(text);
  if (s.empty()) throw GrammarError("test function: empty spec");
  TestFunction::Builder builder(n);

  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // '+' splits terms unless it is part of an exponent like 1e+3
    if (s[i] == '+' && i > 0 && s[i - 1] != 'e' && s[i - 1] != 'E') {
      terms.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  terms.push_back(s.substr(start));

  for (const auto& term : terms) {
    if (term.empty()) throw GrammarError("test function: empty term");
    double coef = 1.0;
    std::string atom = term;
    const auto star = term.find('*');
    if (star != std::string::npos) {
      coef = detail::parse_number(term.substr(0, star), "test function scalar");
      atom = term.substr(star + 1);
    }
    const auto colon = atom.find(':');
    if (colon == std::string::npos)
      throw GrammarError("test function: expected <kind>:<params> in '" + atom + "'");
    const std::string kind = atom.substr(0, colon), body = atom.substr(colon + 1);
    if (kind == "chi") {
      const auto kv = detail::parse_kv(body, {"t", "c"}, "chi");
      if (!kv.count("t")) throw GrammarError("chi: missing t");
      if (kv.count("c"))
        builder.indicator(Ball::on_axis(kv.at("c"), kv.at("t"), n), coef);
      else
        builder.piece(0.0, kv.at("t"), coef);
    } else if (kind == "radpow") {
      const auto kv = detail::parse_kv(body, {"beta", "t"}, "radpow");
      if (!kv.count("beta") || !kv.count("t"))
        throw GrammarError("radpow: needs beta and t");
      builder.piece(0.0, kv.at("t"), coef, kv.at("beta"));
    } else {
      throw GrammarError("test function: unknown kind '" + kind + "'");
    }
  }
  return builder.build();
}

}  // namespace cmo
