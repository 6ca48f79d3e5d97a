#pragma once

#include <string>

#include "sn/category.hpp"
#include "sn/io.hpp"

namespace sn::testing {

inline CategoryFile bundled_file(const std::string& name) {
  return load_category(std::string(SN_DATA_DIR) + "/" + name);
}
inline FusionData bundled(const std::string& name) { return bundled_file(name).data; }

inline const char* const kBundled[] = {"trivial.cat", "z2.cat", "semion.cat", "fib.cat", "ising.cat"};

}  // namespace sn::testing
