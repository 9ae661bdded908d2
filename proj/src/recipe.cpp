#include "platoonlab/recipe.hpp"

#include <fstream>

#include "platoonlab/errors.hpp"

namespace platoonlab {

namespace {

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

const std::string* ExperimentRecipe::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

std::vector<ExperimentRecipe> parse_recipes(std::istream& is) {
  std::vector<ExperimentRecipe> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3)
        throw Error("recipe: malformed section header at line " + std::to_string(lineno));
      out.push_back({strip(s.substr(1, s.size() - 2)), {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw Error("recipe: expected key = value at line " + std::to_string(lineno));
    if (out.empty()) throw Error("recipe: entry before any [section] at line " + std::to_string(lineno));
    out.back().entries.emplace_back(strip(s.substr(0, eq)), strip(s.substr(eq + 1)));
  }
  return out;
}

std::vector<ExperimentRecipe> load_recipes(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open recipe file '" + path + "'");
  return parse_recipes(f);
}

void write_recipes(std::ostream& os, const std::vector<ExperimentRecipe>& recipes) {
  for (const auto& r : recipes) {
    os << '[' << r.name << "]\n";
    for (const auto& [k, v] : r.entries) os << k << " = " << v << '\n';
    os << '\n';
  }
}

}  // namespace platoonlab
