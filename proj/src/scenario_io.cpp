#include "recruit/scenario_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace recruit {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

const std::array<const char*, 17> kKnownKeys = {
    "delta",          "policy",          "muA",
    "muB",            "A.p0",            "A.v",
    "A.qH",           "A.qL",            "A.Pbar",
    "B.p0",           "B.v",             "B.qH",
    "B.qL",           "B.Pbar",          "tolerances.index_tol",
    "tolerances.horizon_cap",            "tolerances.prob_tol"};

bool known_key(const std::string& k) {
  for (const char* known : kKnownKeys)
    if (k == known) return true;
  return false;
}

[[noreturn]] void fail(const std::vector<std::string>& problems) {
  std::string what;
  for (const auto& p : problems) {
    if (!what.empty()) what += "; ";
    what += p;
  }
  throw ParseError(what);
}

double parse_double(const std::string& key, const std::string& value,
                    std::vector<std::string>& problems) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(x)) {
    problems.push_back(key + ": not a number: '" + value + "'");
    return 0.0;
  }
  return x;
}

std::string fmt_exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key)) {
      problems.push_back("unknown key '" + key + "'");
      continue;
    }
    if (kv.count(key)) {
      problems.push_back("duplicate key '" + key + "'");
      continue;
    }
    kv[key] = value;
  }
  if (!problems.empty()) fail(problems);
  return kv;
}

Scenario scenario_from_kv(const std::map<std::string, std::string>& kv) {
  std::vector<std::string> problems;
  for (const auto& [k, v] : kv)
    if (!known_key(k)) problems.push_back("unknown key '" + k + "'");

  // A missing whole block reads better as one message than five.
  for (const char* block : {"A", "B"}) {
    bool any = false;
    for (const auto& [k, v] : kv)
      if (k.rfind(std::string(block) + ".", 0) == 0) any = true;
    if (!any) problems.push_back(std::string("missing category ") + block);
  }
  if (!problems.empty()) fail(problems);

  Scenario s;
  auto get = [&](const std::string& key, bool required) -> const std::string* {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) problems.push_back("missing key '" + key + "'");
      return nullptr;
    }
    return &it->second;
  };
  auto get_double = [&](const std::string& key, double* dst, bool required) {
    if (const std::string* v = get(key, required))
      *dst = parse_double(key, *v, problems);
  };
  auto range = [&](const std::string& key, double x, double lo, double hi,
                   bool lo_open, bool hi_open, const char* desc) {
    const bool below = lo_open ? x <= lo : x < lo;
    const bool above = hi_open ? x >= hi : x > hi;
    if (below || above) problems.push_back(key + " out of " + desc);
  };

  get_double("delta", &s.delta, true);
  get_double("muA", &s.muA, true);
  get_double("muB", &s.muB, true);
  if (const std::string* v = get("policy", true)) {
    if (*v == "myopic")
      s.policy = PolicyKind::Myopic;
    else if (*v == "optimal")
      s.policy = PolicyKind::OptimalIndex;
    else
      problems.push_back("policy: expected 'myopic' or 'optimal', got '" + *v + "'");
  }
  for (Category c : {Category::A, Category::B}) {
    const std::string tag(1, category_letter(c));
    CategoryParams& cat = c == Category::A ? s.catA : s.catB;
    cat.label = c;
    get_double(tag + ".p0", &cat.p0, true);
    get_double(tag + ".v", &cat.v, true);
    get_double(tag + ".qH", &cat.qH, true);
    get_double(tag + ".qL", &cat.qL, true);
    get_double(tag + ".Pbar", &cat.Pbar, true);
  }
  get_double("tolerances.index_tol", &s.tolerances.index_tol, false);
  get_double("tolerances.prob_tol", &s.tolerances.prob_tol, false);
  if (const std::string* v = get("tolerances.horizon_cap", false)) {
    const double x = parse_double("tolerances.horizon_cap", *v, problems);
    if (x != std::floor(x) || x < 1 || x > 1e7)
      problems.push_back("tolerances.horizon_cap: expected a positive integer");
    else
      s.tolerances.horizon_cap = static_cast<int>(x);
  }
  if (!problems.empty()) fail(problems);

  range("delta", s.delta, 0, 1, true, true, "(0,1)");
  range("muA", s.muA, 0, 1, false, false, "[0,1]");
  range("muB", s.muB, 0, 1, false, false, "[0,1]");
  for (Category c : {Category::A, Category::B}) {
    const std::string tag(1, category_letter(c));
    const CategoryParams& cat = s.params(c);
    range(tag + ".p0", cat.p0, 0, 1, true, true, "(0,1)");
    if (!(cat.v > 0.0)) problems.push_back(tag + ".v out of (0,inf)");
    range(tag + ".qH", cat.qH, 0, 1, false, false, "[0,1]");
    range(tag + ".qL", cat.qL, 0, 1, false, false, "[0,1]");
    range(tag + ".Pbar", cat.Pbar, 0, 1, true, false, "(0,1]");
  }
  if (!(s.tolerances.index_tol > 0.0))
    problems.push_back("tolerances.index_tol out of (0,inf)");
  if (!(s.tolerances.prob_tol > 0.0))
    problems.push_back("tolerances.prob_tol out of (0,inf)");
  if (!problems.empty()) fail(problems);
  return s;
}

Scenario parse_scenario(const std::string& text) {
  return scenario_from_kv(parse_kv(text));
}

std::string serialize_scenario(const Scenario& s) {
  if (!s.initial_pool.empty())
    throw std::invalid_argument(
        "serialize_scenario: only default-pool scenarios are serializable");
  std::string out;
  out += "delta = " + fmt_exact(s.delta) + "\n";
  out += std::string("policy = ") +
         (s.policy == PolicyKind::Myopic ? "myopic" : "optimal") + "\n";
  out += "muA = " + fmt_exact(s.muA) + "\n";
  out += "muB = " + fmt_exact(s.muB) + "\n";
  for (Category c : {Category::A, Category::B}) {
    const std::string tag(1, category_letter(c));
    const CategoryParams& cat = s.params(c);
    out += tag + ".p0 = " + fmt_exact(cat.p0) + "\n";
    out += tag + ".v = " + fmt_exact(cat.v) + "\n";
    out += tag + ".qH = " + fmt_exact(cat.qH) + "\n";
    out += tag + ".qL = " + fmt_exact(cat.qL) + "\n";
    out += tag + ".Pbar = " + fmt_exact(cat.Pbar) + "\n";
  }
  out += "tolerances.index_tol = " + fmt_exact(s.tolerances.index_tol) + "\n";
  out += "tolerances.horizon_cap = " + std::to_string(s.tolerances.horizon_cap) + "\n";
  out += "tolerances.prob_tol = " + fmt_exact(s.tolerances.prob_tol) + "\n";
  return out;
}

void set_scenario_field(Scenario& s, const std::string& key, double value) {
  auto set_cat = [&](CategoryParams& cat, const std::string& field) {
    if (field == "p0")
      cat.p0 = value;
    else if (field == "v")
      cat.v = value;
    else if (field == "qH")
      cat.qH = value;
    else if (field == "qL")
      cat.qL = value;
    else if (field == "Pbar")
      cat.Pbar = value;
    else
      throw ParseError("unknown field '" + key + "'");
  };
  if (key == "delta")
    s.delta = value;
  else if (key == "muA")
    s.muA = value;
  else if (key == "muB")
    s.muB = value;
  else if (key == "tolerances.index_tol")
    s.tolerances.index_tol = value;
  else if (key == "tolerances.prob_tol")
    s.tolerances.prob_tol = value;
  else if (key == "tolerances.horizon_cap")
    s.tolerances.horizon_cap = static_cast<int>(value);
  else if (key.rfind("A.", 0) == 0)
    set_cat(s.catA, key.substr(2));
  else if (key.rfind("B.", 0) == 0)
    set_cat(s.catB, key.substr(2));
  else
    throw ParseError("unknown field '" + key + "'");
}

}  // namespace recruit
