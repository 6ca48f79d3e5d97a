#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sn/category.hpp"
#include "sn/io.hpp"

using namespace sn;

namespace {
FusionData load(const std::string& name) { return load_category(std::string(SN_DATA_DIR) + "/" + name).data; }
const char* kAll[] = {"trivial.cat", "z2.cat", "semion.cat", "fib.cat", "ising.cat"};
}  // namespace

TEST_CASE("bundled categories validate") {
  for (const char* f : kAll) {
    auto rep = validate(load(f));
    for (const auto& r : rep.residuals) INFO(f << " " << r.name << " " << r.value);
    for (const auto& r : rep.residuals) {
      CAPTURE(f);
      CAPTURE(r.name);
      CHECK(r.value < 1e-9);
    }
  }
}

TEST_CASE("semion F data with trivial pivotal") {
  auto d = load("semion.cat");
  d.pivotal = {1.0, 1.0};
  auto rep = validate(d);
  MESSAGE("pentagon " << rep.get("pentagon") << " rotation " << rep.get("rotation"));
}

TEST_CASE("quantum dimensions") {
  Category fib(load("fib.cat"));
  CHECK(std::abs(quantum_dimension(fib, 1) - (1 + std::sqrt(5.0)) / 2) < 1e-9);
  for (const char* f : kAll) {
    Category c(load(f));
    for (int a = 0; a < c.rank(); ++a) {
      MESSAGE(f << " qdim " << a << " = " << quantum_dimension(c, a));
      for (int b = 0; b < c.rank(); ++b) {
        Scalar rhs = 0;
        for (int x = 0; x < c.rank(); ++x) rhs += double(c.n(a, b, x)) * quantum_dimension(c, x);
        CHECK(std::abs(quantum_dimension(c, a) * quantum_dimension(c, b) - rhs) < 1e-9);
      }
    }
  }
}
