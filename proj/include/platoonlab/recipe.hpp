#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace platoonlab {

/// One named experiment: a `[name]` section of flat key = value entries,
/// kept in file order so recipes round-trip losslessly.
struct ExperimentRecipe {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
  bool operator==(const ExperimentRecipe&) const = default;
};

std::vector<ExperimentRecipe> parse_recipes(std::istream& is);

/// Reads a recipe file; throws Error naming the path when it cannot be opened.
std::vector<ExperimentRecipe> load_recipes(const std::string& path);

void write_recipes(std::ostream& os, const std::vector<ExperimentRecipe>& recipes);

}  // namespace platoonlab
