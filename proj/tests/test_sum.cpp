#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sn/frobenius.hpp"
#include "support/common.hpp"

using namespace sn;
using namespace sn::testing;

namespace {

Obj random_obj(const Category& cat, std::mt19937& rng, std::size_t n) {
  Obj o;
  for (std::size_t k = 0; k < n; ++k) {
    Word w;
    const int len = static_cast<int>(rng() % 3);
    for (int l = 0; l < len; ++l) w.push_back(static_cast<int>(rng() % static_cast<unsigned>(cat.rank())));
    o.push_back(w);
  }
  return o;
}

}  // namespace

TEST_CASE("sum tensor agrees with summand-wise word tensor") {
  for (const char* f : kBundled) {
    Category cat(bundled(f));
    std::mt19937 rng(3);
    for (int t = 0; t < 6; ++t) {
      const Obj a = random_obj(cat, rng, 1 + rng() % 3), b = random_obj(cat, rng, 1 + rng() % 3);
      const Obj c = random_obj(cat, rng, 1 + rng() % 3), d = random_obj(cat, rng, 1 + rng() % 3);
      const SumMorphism x = random_sum_morphism(cat, a, b, rng()), y = random_sum_morphism(cat, c, d, rng());
      const SumMorphism z = sum_tensor(cat, x, y);
      double worst = 0;
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
          for (std::size_t k = 0; k < d.size(); ++k)
            for (std::size_t l = 0; l < c.size(); ++l) {
              const Morphism want = cat.tensor(x.part(cat, i, j), y.part(cat, k, l));
              worst = std::max(worst, (z.part(cat, i * d.size() + k, j * c.size() + l) - want).max_abs());
            }
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("interchange law and composition") {
  Category cat(bundled("fib.cat"));
  std::mt19937 rng(8);
  const Obj a = random_obj(cat, rng, 2), b = random_obj(cat, rng, 2), c = random_obj(cat, rng, 2);
  const Obj d = random_obj(cat, rng, 2), e = random_obj(cat, rng, 2), g = random_obj(cat, rng, 2);
  const SumMorphism f1 = random_sum_morphism(cat, a, b, 1), f2 = random_sum_morphism(cat, b, c, 2);
  const SumMorphism g1 = random_sum_morphism(cat, d, e, 3), g2 = random_sum_morphism(cat, e, g, 4);
  const SumMorphism lhs = sum_compose(cat, sum_tensor(cat, f2, g2), sum_tensor(cat, f1, g1));
  const SumMorphism rhs = sum_tensor(cat, sum_compose(cat, f2, f1), sum_compose(cat, g2, g1));
  CHECK((lhs - rhs).max_abs() < 1e-10 * (1 + lhs.max_abs()));
}

TEST_CASE("word dualities satisfy the zigzag identities") {
  for (const char* f : kBundled) {
    Category cat(bundled(f));
    std::mt19937 rng(5);
    for (int t = 0; t < 4; ++t) {
      const Obj x = random_obj(cat, rng, 2);
      const Obj xd = obj_dual(cat, x);
      const SumMorphism ix = sum_identity(cat, x), ixd = sum_identity(cat, xd);
      const SumMorphism z1 =
          sum_compose(cat, sum_tensor(cat, ix, ev_obj(cat, x)), sum_tensor(cat, coev_obj(cat, x), ix));
      CHECK((z1 - ix).max_abs() < 1e-10);
      const SumMorphism z2 =
          sum_compose(cat, sum_tensor(cat, ev_r_obj(cat, x), ix), sum_tensor(cat, ix, coev_r_obj(cat, x)));
      CHECK((z2 - ix).max_abs() < 1e-10);
      const SumMorphism z3 =
          sum_compose(cat, sum_tensor(cat, ev_obj(cat, x), ixd), sum_tensor(cat, ixd, coev_obj(cat, x)));
      CHECK((z3 - ixd).max_abs() < 1e-10);
    }
  }
}
