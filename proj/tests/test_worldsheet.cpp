#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sn/disk.hpp"
#include "sn/worldsheet.hpp"
#include "support/common.hpp"

using namespace sn;
using namespace sn::testing;

namespace {

struct Z2Setup {
  CategoryFile file = bundled_file("z2.cat");
  Category cat{file.data};
  AlgebraPtr a = parse_algebras(cat, file.algebras).at(0);
  AlgebraPtr one = trivial_algebra(cat);
};

// Vec_Z2 has trivial associators and one tree per word, so a sum morphism is
// an ordinary matrix between the summands.
Eigen::MatrixXcd dense(const Category& cat, const SumMorphism& m) {
  const auto rows = Eigen::Index(m.tgt.size()), cols = Eigen::Index(m.src.size());
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(rows, cols);
  for (int u = 0; u < cat.rank(); ++u) {
    const auto ot = summand_offsets(cat, m.tgt, u), os = summand_offsets(cat, m.src, u);
    for (std::size_t i = 0; i < m.tgt.size(); ++i)
      for (std::size_t j = 0; j < m.src.size(); ++j)
        if (ot[i + 1] > ot[i] && os[j + 1] > os[j])
          d(Eigen::Index(i), Eigen::Index(j)) = m.blocks[std::size_t(u)](Eigen::Index(ot[i]), Eigen::Index(os[j]));
  }
  return d;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  Eigen::MatrixXcd k(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) k.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return k;
}

Eigen::MatrixXcd eye(Eigen::Index n) { return Eigen::MatrixXcd::Identity(n, n); }

SumMorphism lax_of(const Category& cat, const Frontier& f) {
  return f.lines.empty() ? f.left->unit : composite(cat, f.lines).lax;
}
SumMorphism oplax_of(const Category& cat, const Frontier& f) {
  return f.lines.empty() ? f.left->counit : composite(cat, f.lines).oplax;
}
Bimodule composite_of(const Category& cat, const Frontier& f) {
  return f.lines.empty() ? regular_bimodule(cat, f.left) : composite(cat, f.lines).obj;
}

constexpr FrobeniusGraph kGraphs[] = {FrobeniusGraph::tree, FrobeniusGraph::dense, FrobeniusGraph::bubbles};

}  // namespace

TEST_CASE("world sheet validation") {
  Z2Setup s;
  const Bimodule x = random_bimodule(s.cat, s.a, s.one, 3);
  const Bimodule y = random_bimodule(s.cat, s.one, s.a, 4);
  WorldSheet w;
  w.left_phase = s.a;
  w.bottom = {x};
  CHECK(validate_world_sheet(s.cat, w).empty());
  w.bottom = {x, x};
  CHECK_THROWS_AS(frontiers(s.cat, w), WorldSheetError);
  w.bottom = {y};
  CHECK_FALSE(validate_world_sheet(s.cat, w).empty());
  w.bottom = {x};
  w.layers.push_back(Coupon{0, 1, {x}, sum_identity(s.cat, obj_tensor(y.object, y.object))});
  CHECK_FALSE(validate_world_sheet(s.cat, w).empty());
  w.layers.back().color = random_sum_morphism(s.cat, x.object, x.object, 5);
  CHECK(validate_world_sheet(s.cat, w).find("bimodule map") != std::string::npos);
  w.layers.back().color = average_map(s.cat, x, x, w.layers.back().color);
  CHECK(validate_world_sheet(s.cat, w).empty());
}

TEST_CASE("bare phases") {
  Z2Setup s;
  WorldSheet w;
  w.left_phase = s.one;
  CHECK(std::abs(sum_scalar(s.cat, correlator_disk(s.cat, w)) - 1.0) < 1e-12);
  w.left_phase = s.a;
  // a closed connected A-graph evaluates to dim A for every construction
  for (auto g : kGraphs) CHECK(std::abs(sum_scalar(s.cat, correlator_disk(s.cat, w, g)) - 2.0) < 1e-12);
  CHECK(std::abs(sum_scalar(s.cat, sum_compose(s.cat, s.a->counit, s.a->unit)) - 2.0) < 1e-12);
}

TEST_CASE("defect line against the trivial phase: contraction oracle") {
  Z2Setup s;
  for (unsigned seed = 1; seed <= 6; ++seed) {
    const Bimodule x = random_bimodule(s.cat, s.a, s.one, seed);
    const SumMorphism alpha = average_map(s.cat, x, x, random_sum_morphism(s.cat, x.object, x.object, seed + 50));
    WorldSheet w;
    w.left_phase = s.a;
    w.bottom = {x};
    w.layers.push_back(Coupon{0, 1, {x}, alpha});

    const auto nx = Eigen::Index(x.object.size());
    const Eigen::MatrixXcd eta = dense(s.cat, s.a->unit), eps = dense(s.cat, s.a->counit);
    const Eigen::MatrixXcd delta = dense(s.cat, s.a->comult), lam = dense(s.cat, x.act_l);
    const Eigen::MatrixXcd al = dense(s.cat, alpha);
    const Eigen::MatrixXcd touch = kron(eye(2), lam) * kron(delta, eye(nx));
    const Eigen::MatrixXcd raw = kron(eps, eye(nx)) * touch * kron(eye(2), al) * touch * touch * kron(eta, eye(nx));
    const Eigen::MatrixXcd avg = lam * kron(eye(2), raw) * kron(eye(2), lam) * kron(delta * eta, eye(nx));

    const CorrelatorReport r = correlator_report(s.cat, w);
    CHECK((dense(s.cat, r.raw) - raw).norm() < 1e-10);
    CHECK((dense(s.cat, r.value) - avg).norm() < 1e-10);
    CHECK((dense(s.cat, r.value) - al).norm() < 1e-10);
  }
}

TEST_CASE("field idempotent") {
  Z2Setup s;
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const WorldSheet w = random_world_sheet(s.cat, {s.one, s.a}, seed);
    const auto fs = frontiers(s.cat, w);
    const Frontier &b = fs.front(), &t = fs.back();
    const SumMorphism f = random_sum_morphism(s.cat, row_object(b.lines), row_object(t.lines), seed);
    const SumMorphism p = apply_field_idempotent(s.cat, b, t, f);
    CHECK((apply_field_idempotent(s.cat, b, t, p) - p).max_abs() < 1e-10);
    const SumMorphism oracle =
        sum_compose(s.cat, {oplax_of(s.cat, t),
                            average_map(s.cat, composite_of(s.cat, b), composite_of(s.cat, t),
                                        sum_compose(s.cat, {lax_of(s.cat, t), f, oplax_of(s.cat, b)})),
                            lax_of(s.cat, b)});
    CHECK((p - oracle).max_abs() < 1e-10);
    const CorrelatorReport r = correlator_report(s.cat, w, FrobeniusGraph::tree, true);
    CHECK(r.field_dim == bimodule_hom_dim(s.cat, composite_of(s.cat, b), composite_of(s.cat, t)));
  }
}

TEST_CASE("correlators factor through the Fr(C) value") {
  Z2Setup s;
  for (unsigned seed = 1; seed <= 12; ++seed) {
    const WorldSheet w = random_world_sheet(s.cat, {s.one, s.a}, seed);
    const auto fs = frontiers(s.cat, w);
    const SumMorphism psi = fr_evaluate(s.cat, w);
    const Bimodule kb = composite_of(s.cat, fs.front()), kt = composite_of(s.cat, fs.back());
    CHECK((average_map(s.cat, kb, kt, psi) - psi).max_abs() < 1e-10);
    const SumMorphism expect = sum_compose(s.cat, {oplax_of(s.cat, fs.back()), psi, lax_of(s.cat, fs.front())});
    for (auto g : kGraphs) {
      const CorrelatorReport r = correlator_report(s.cat, w, g);
      CHECK((r.value - expect).max_abs() < 1e-10);
      CHECK(r.raw_residual < 1e-10);
    }
  }
}

TEST_CASE("move-related world sheets") {
  Z2Setup s;
  for (unsigned seed = 1; seed <= 8; ++seed) {
    const WorldSheet w = random_world_sheet(s.cat, {s.one, s.a}, seed, {4, 3, 1});
    const UniversalReport same = universal_correlator_test(s.cat, w, w);
    CHECK(same.fr_equal);
    CHECK(same.cor_equal);
    const UniversalReport c = universal_correlator_test(s.cat, w, contract(s.cat, w, 1, 2), FrobeniusGraph::tree,
                                                        FrobeniusGraph::bubbles);
    CHECK(c.fr_equal);
    CHECK(c.cor_equal);
    const WorldSheet all = contract(s.cat, w, 0, w.layers.size() - 1);
    CHECK(all.layers.size() == 1);
    CHECK(universal_correlator_test(s.cat, w, all).cor_equal);
    for (std::size_t i = 0; i + 1 < w.layers.size(); ++i)
      if (const auto x = interchange(w, i)) {
        CHECK(validate_world_sheet(s.cat, *x).empty());
        CHECK(universal_correlator_test(s.cat, w, *x, FrobeniusGraph::dense, FrobeniusGraph::tree).cor_equal);
      }
    const UniversalReport neg = universal_correlator_test(s.cat, w, scale_layer(w, 0, 2.0));
    if (correlator_disk(s.cat, w).max_abs() > 1e-6) {
      CHECK_FALSE(neg.fr_equal);
      CHECK_FALSE(neg.cor_equal);
    }
    CHECK(neg.holds());
  }
  WorldSheet w = random_world_sheet(s.cat, {s.one, s.a}, 3);
  WorldSheet v = w;
  v.bottom.clear();
  v.layers.clear();
  CHECK_THROWS_AS(universal_correlator_test(s.cat, w, v), BoundaryError);
}

TEST_CASE("linearity in the vertex colors") {
  Z2Setup s;
  for (unsigned seed = 20; seed <= 25; ++seed) {
    const WorldSheet w = random_world_sheet(s.cat, {s.one, s.a}, seed);
    WorldSheet sum = w;
    const std::size_t i = seed % w.layers.size();
    WorldSheet other = w;
    other.layers[i].color = w.layers[i].color * Scalar(0.0, 1.5);
    sum.layers[i].color = w.layers[i].color + other.layers[i].color;
    const SumMorphism lhs = correlator_disk(s.cat, sum);
    const SumMorphism rhs = correlator_disk(s.cat, w) + correlator_disk(s.cat, other);
    CHECK((lhs - rhs).max_abs() < 1e-10);
  }
}

TEST_CASE("complementation") {
  Z2Setup s;
  const Bimodule m = random_bimodule(s.cat, s.one, s.a, 7);
  const Bimodule n = random_bimodule(s.cat, s.a, s.one, 8);
  WorldSheet w;
  w.left_phase = s.a;
  const ComplementedWorldSheet plain = complement(s.cat, w);
  CHECK(plain.transparent_cells == 0);

  w.left_physical = m;
  w.right_physical = n;
  CHECK(validate_world_sheet(s.cat, w).empty());
  const ComplementedWorldSheet mixed = complement(s.cat, w);
  CHECK(mixed.transparent_cells == 2);
  CHECK(mixed.euler_characteristic == 1);
  CHECK(mixed.boundary_components == 1);
  CHECK(mixed.net.sewing_only());
  CHECK(validate_world_sheet(s.cat, mixed.net).empty());
  CHECK(frontiers(s.cat, mixed.net).front().left == s.one);
  // physical sides pair the modules through the bulk phase
  const SumMorphism c = correlator_disk(s.cat, w);
  const Bimodule mn = composite(s.cat, {m, n}).obj;
  CHECK((c - sum_compose(s.cat, {composite(s.cat, {m, n}).oplax, fr_evaluate(s.cat, w), composite(s.cat, {m, n}).lax}))
            .max_abs() < 1e-10);
  CHECK(mn.left == s.one);

  WorldSheet disk;
  disk.left_phase = s.a;
  disk.circle = m;
  CHECK(validate_world_sheet(s.cat, disk).empty());
  const ComplementedWorldSheet annular = complement(s.cat, disk);
  CHECK(annular.annular_cell);
  CHECK(annular.transparent_cells == 1);
  CHECK(validate_world_sheet(s.cat, annular.net).empty());
  const Scalar z = sum_scalar(s.cat, correlator_disk(s.cat, disk));
  for (auto g : kGraphs) CHECK(std::abs(sum_scalar(s.cat, correlator_disk(s.cat, disk, g)) - z) < 1e-10);
  CHECK(std::abs(z) > 1e-6);
}

TEST_CASE("conjugation of Fr(C) nets") {
  Z2Setup s;
  const FrobFunctor ident(s.cat, FrobFunctor::Kind::identity);
  const FrobFunctor u(s.cat, FrobFunctor::Kind::forgetful, {regular_bimodule(s.cat, s.a)});
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const WorldSheet w = random_world_sheet(s.cat, {s.one, s.a}, seed, {2, 2, 1});
    const WorldSheet c = conjugate_stringnet(ident, w);
    for (std::size_t i = 0; i < w.layers.size(); ++i)
      CHECK((c.layers[i].color - w.layers[i].color).max_abs() < 1e-14);
    CHECK((fr_evaluate(s.cat, c) - fr_evaluate(s.cat, w)).max_abs() < 1e-10);
    CHECK_THROWS_AS(conjugate_stringnet(u, w), CapabilityError);

    const FrobeniusConjugate fu = frobenius_conjugate_stringnet(u, w);
    CHECK((fu.value - correlator_disk(s.cat, w)).max_abs() < 1e-10);
    const FrobeniusConjugate fi = frobenius_conjugate_stringnet(ident, w);
    CHECK((fi.value - fr_evaluate(s.cat, w)).max_abs() < 1e-10);
    CHECK(fi.dim == fu.dim);
  }
}

TEST_CASE("Frobenius-graph independence over bundled algebras") {
  std::size_t used = 0;
  for (const char* name : kBundled) {
    const Category cat(bundled(name));
    const AlgebraPtr a = group_algebra(cat);
    if (a->trivial() || !validate_frobenius(cat, *a).valid()) continue;
    ++used;
    const AlgebraPtr one = trivial_algebra(cat);
    for (unsigned seed = 1; seed <= 3; ++seed) {
      const WorldSheet w = random_world_sheet(cat, {one, a}, seed);
      const SumMorphism c = correlator_disk(cat, w);
      CHECK((correlator_disk(cat, w, FrobeniusGraph::dense) - c).max_abs() < 1e-10);
      CHECK((correlator_disk(cat, w, FrobeniusGraph::bubbles) - c).max_abs() < 1e-10);
    }
  }
  CHECK(used >= 2);
}
