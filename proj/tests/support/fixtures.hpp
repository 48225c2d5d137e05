#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "papar/spec.hpp"

namespace fixtures {

inline std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string path(const std::string& name) { return std::string(PAPAR_FIXTURES) + "/" + name + ".pv.json"; }
inline std::string text(const std::string& name) { return read(path(name)); }
inline papar::Spec spec(const std::string& name) { return papar::parse_spec(text(name)); }

inline const char* const kAll[] = {"bar_static",     "bar_extend",        "bar_placeholder", "pie_extend",
                                   "tree_cluster",   "tree_tidy",         "treemap_extend",  "bin_unnoticeable",
                                   "composite_overlay", "multiple_view",  "small_multiple"};

}  // namespace fixtures
