#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "optseq/errors.hpp"
#include "optseq/space.hpp"

namespace optseq {

namespace {

[[noreturn]] void fail(const std::string& what, std::string_view token) {
  throw ParseError(what + ": '" + std::string(token) + "'", std::string(token));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits on `sep` outside parentheses.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth < 0) fail("unbalanced parenthesis", s);
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) fail("unbalanced parenthesis", s);
  out.push_back(trim(s.substr(start)));
  return out;
}

std::map<std::string, std::string_view, std::less<>> key_values(
    std::string_view body, std::initializer_list<std::string_view> allowed) {
  std::map<std::string, std::string_view, std::less<>> kv;
  for (auto item : split_top(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) fail("expected key=value", item);
    const auto key = trim(item.substr(0, eq));
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) fail("unknown key", key);
    if (!kv.emplace(std::string(key), trim(item.substr(eq + 1))).second)
      fail("duplicate key", key);
  }
  for (auto a : allowed)
    if (!kv.count(a)) fail("missing key", a);
  return kv;
}

// name(args) -> args; fails unless `s` has exactly that shape.
bool call_form(std::string_view s, std::string_view name, std::string_view& args) {
  if (s.size() < name.size() + 2 || s.substr(0, name.size()) != name ||
      s[name.size()] != '(' || s.back() != ')')
    return false;
  args = trim(s.substr(name.size() + 1, s.size() - name.size() - 2));
  return true;
}

WeightGenerator parse_weights(std::string_view s) {
  std::string_view args;
  if (s == "invlog") return WeightGenerator::inv_log();
  if (s == "const") return WeightGenerator::constant();
  if (call_form(s, "power", args)) return WeightGenerator::power_alpha(parse_number(args));
  if (call_form(s, "explicit", args)) {
    std::vector<double> w;
    for (auto t : split_top(args, ';')) w.push_back(parse_number(t));
    return WeightGenerator::explicit_weights(std::move(w));
  }
  fail("unknown weight generator", s);
}

OrliczGenerator parse_orlicz(std::string_view s) {
  std::string_view args;
  if (call_form(s, "powerlog", args)) {
    auto kv = key_values(args, {"p", "a"});
    return OrliczGenerator::power_log(parse_number(kv.at("p")), parse_number(kv.at("a")));
  }
  if (call_form(s, "power", args)) {
    auto kv = key_values(args, {"p"});
    return OrliczGenerator::power(parse_number(kv.at("p")));
  }
  if (call_form(s, "conjugate", args))
    return OrliczGenerator::conjugate_of(parse_orlicz(args));
  fail("unknown Orlicz function", s);
}

template <class F>
auto rethrow_as_parse(std::string_view token, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(e.what()) + ": '" + std::string(token) + "'",
                     std::string(token));
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InternalError("number formatting failed");
  return std::string(buf, end);
}

double parse_number(std::string_view token) {
  token = trim(token);
  if (token == "inf") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const char* first = token.data();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), x);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() ||
      !std::isfinite(x))
    fail("invalid number", token);
  return x;
}

SpaceDescriptor parse_space(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) fail("expected family:parameters", text);
  const auto family = trim(text.substr(0, colon));
  const auto body = trim(text.substr(colon + 1));
  return rethrow_as_parse(text, [&] {
    if (family == "lp") {
      auto kv = key_values(body, {"p"});
      return SpaceDescriptor::lp(parse_number(kv.at("p")));
    }
    if (family == "lpq") {
      auto kv = key_values(body, {"p", "q"});
      return SpaceDescriptor::lpq(parse_number(kv.at("p")), parse_number(kv.at("q")));
    }
    if (family == "lorentz") {
      auto kv = key_values(body, {"q", "w"});
      return SpaceDescriptor::lorentz(parse_number(kv.at("q")), parse_weights(kv.at("w")));
    }
    if (family == "orlicz") return SpaceDescriptor::orlicz(parse_orlicz(body));
    fail("unknown space family", family);
  });
}

std::string describe(const WeightGenerator& w) {
  switch (w.kind()) {
    case WeightGenerator::Kind::PowerAlpha:
      return "power(" + format_number(w.alpha()) + ")";
    case WeightGenerator::Kind::InvLog:
      return "invlog";
    case WeightGenerator::Kind::Constant:
      return "const";
    case WeightGenerator::Kind::Explicit: {
      std::string s = "explicit(";
      bool first = true;
      for (double x : w.explicit_values()) {
        if (!first) s += ';';
        s += format_number(x);
        first = false;
      }
      return s + ")";
    }
  }
  throw InternalError("unknown weight kind");
}

std::string describe(const OrliczGenerator& n) {
  switch (n.kind()) {
    case OrliczGenerator::Kind::Power:
      return "power(p=" + format_number(n.p()) + ")";
    case OrliczGenerator::Kind::PowerLog:
      return "powerlog(p=" + format_number(n.p()) + ",a=" + format_number(n.a()) + ")";
    case OrliczGenerator::Kind::Conjugate:
      return "conjugate(" + describe(n.base()) + ")";
  }
  throw InternalError("unknown orlicz kind");
}

std::string describe(const SpaceDescriptor& space) {
  switch (space.family()) {
    case SpaceDescriptor::Family::Lp:
      return "lp:p=" + format_number(space.p());
    case SpaceDescriptor::Family::Lpq:
      return "lpq:p=" + format_number(space.p()) + ",q=" + format_number(space.q());
    case SpaceDescriptor::Family::LorentzLambda:
      return "lorentz:q=" + format_number(space.q()) + ",w=" + describe(space.weights());
    case SpaceDescriptor::Family::Orlicz:
      return "orlicz:" + describe(space.orlicz_function());
  }
  throw InternalError("unknown space family");
}

}  // namespace optseq
