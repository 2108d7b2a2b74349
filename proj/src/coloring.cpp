#include "relrep/coloring.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace relrep {

int Coloring::class_of(int element) const {
  for (size_t t = 0; t < classes.size(); ++t)
    if (std::binary_search(classes[t].begin(), classes[t].end(), element))
      return static_cast<int>(t);
  return -1;
}

Coloring load_coloring_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open coloring file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("coloring file " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("group") || !j.contains("classes"))
    throw Error("coloring file " + path.string() + ": expected fields group, classes");

  Coloring c{parse_group_spec(j.at("group").get<std::string>()), {}, {}};
  const auto& classes = j.at("classes");
  if (!classes.is_object())
    throw Error("coloring file " + path.string() + ": classes must be an object");
  for (auto it = classes.begin(); it != classes.end(); ++it) {
    std::vector<int> elems;
    try {
      elems = it.value().get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error("coloring file " + path.string() + ": class '" + it.key() +
                  "': " + e.what());
    }
    for (int x : elems)
      if (x <= 0 || x >= c.group.order())
        throw Error("coloring file " + path.string() + ": class '" + it.key() +
                    "' holds element " + std::to_string(x) +
                    " outside 1.." + std::to_string(c.group.order() - 1));
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    c.atom_names.push_back(it.key());
    c.classes.push_back(std::move(elems));
  }
  if (c.atom_names.empty())
    throw Error("coloring file " + path.string() + ": no classes");
  return c;
}

void save_coloring_file(const Coloring& c, const std::filesystem::path& path) {
  nlohmann::json classes = nlohmann::json::object();
  for (size_t t = 0; t < c.atom_names.size(); ++t)
    classes[c.atom_names[t]] = c.classes[t];
  nlohmann::json j;
  j["group"] = c.group.spec();
  j["classes"] = classes;
  std::ofstream out(path);
  if (!out) throw Error("cannot write coloring file: " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace relrep
