// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "sn/disk.hpp"
#include "sn/stringnet.hpp"
#include "sn/worldsheet.hpp"
#include "support/common.hpp"
#include "support/stacking.hpp"

using namespace sn;
using namespace sn::testing;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// ---- independent oracles ----

std::vector<int> fuse_word(const FusionData& d, const Word& w) {
  std::vector<int> m(std::size_t(d.rank()), 0);
  m[std::size_t(d.unit)] = 1;
  for (int a : w) {
    std::vector<int> next(std::size_t(d.rank()), 0);
    for (int u = 0; u < d.rank(); ++u)
      for (int c = 0; c < d.rank(); ++c) next[std::size_t(c)] += m[std::size_t(u)] * d.n(u, a, c);
    m = next;
  }
  return m;
}

std::size_t hom_oracle(const FusionData& d, const Word& x, const Word& y) {
  const auto mx = fuse_word(d, x), my = fuse_word(d, y);
  std::size_t n = 0;
  for (int c = 0; c < d.rank(); ++c) n += std::size_t(mx[std::size_t(c)] * my[std::size_t(c)]);
  return n;
}

// Basis of the tube algebra: x, a, b with Hom(x a, b x).
std::size_t tube_dim_oracle(const FusionData& d) {
  std::size_t n = 0;
  for (int a = 0; a < d.rank(); ++a)
    for (int b = 0; b < d.rank(); ++b)
      for (int x = 0; x < d.rank(); ++x)
        for (int c = 0; c < d.rank(); ++c) n += std::size_t(d.n(x, a, c) * d.n(b, x, c));
  return n;
}

Word random_word(const Category& cat, std::mt19937_64& rng, int max_len) {
  Word w;
  const int len = std::uniform_int_distribution<int>(0, max_len)(rng);
  for (int i = 0; i < len; ++i) w.push_back(std::uniform_int_distribution<int>(0, cat.rank() - 1)(rng));
  return w;
}

Annulus random_annulus(const Category& cat, const Word& in, const Word& out, std::mt19937_64& rng) {
  Annulus a{in, out, {}};
  for (int x = 0; x < cat.rank(); ++x) {
    Word s{x}, t = out;
    s.insert(s.end(), in.begin(), in.end());
    t.push_back(x);
    if (cat.hom_dim(s, t)) a.terms.push_back({x, random_morphism(cat, s, t, rng)});
  }
  return a;
}

// ---- criteria ----

void pentagon(Outcome& o) {
  double worst = 0;
  for (const char* name : kBundled) {
    const ValidationReport r = validate(bundled(name));
    for (const auto& x : r.residuals) worst = std::max(worst, x.value);
    o.require(r.valid(), std::string(name) + " invalid");
  }
  FusionData bad = bundled("z2.cat");
  bad.F.at({1, 1, 1, 1, 0, 0}).data()[0] = -1.0;
  const ValidationReport r = validate(bad);
  double control = 0;
  for (const auto& x : r.residuals) control = std::max(control, x.value);
  o.detail << "bundled max residual " << sci(worst) << "; corrupted Z2 control max residual " << sci(control)
           << " (pentagon " << sci(r.get("pentagon")) << ")";
  o.require(worst < kTol, "bundled residual");
  o.require(control >= 1.0, "control residual below 1");
}

void loop_values(Outcome& o) {
  const Category fib(bundled("fib.cat"));
  DiskGraph g;
  g.circles.push_back({fib.data().label("t"), 1});
  const double err = std::abs(fib.as_scalar(evaluate_disk(fib, g)) - (1 + std::sqrt(5.0)) / 2);
  double qd = 0;
  for (const char* name : kBundled) {
    const Category cat(bundled(name));
    for (int a = 0; a < cat.rank(); ++a)
      for (int b = 0; b < cat.rank(); ++b) {
        Scalar s = 0;
        for (int c = 0; c < cat.rank(); ++c) s += double(cat.n(a, b, c)) * quantum_dimension(cat, c);
        qd = std::max(qd, std::abs(quantum_dimension(cat, a) * quantum_dimension(cat, b) - s));
      }
  }
  o.detail << "fib loop error " << sci(err) << "; qdim product residual " << sci(qd);
  o.require(err < kTol, "fib loop");
  o.require(qd < kTol, "qdim identity");
}

void coupon_rotation(Outcome& o) {
  double worst = 0;
  std::size_t total = 0;
  for (const char* name : kBundled) {
    const Category cat(bundled(name));
    std::mt19937_64 rng(101);
    std::size_t done = 0;
    while (done < 200) {
      SWord legs;
      const int n = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int j = 0; j < n; ++j) legs.push_back(random_slabel(cat, rng, true));
      if (cat.hom_dim({}, cat.objects(legs)) == 0) continue;
      const int m = std::uniform_int_distribution<int>(0, n)(rng);
      const int root = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const Polarization k0{0, root, m};
      const ColorSpace cs = color_space(cat, legs, k0);
      const Morphism c = random_morphism(cat, cs.source, cs.target, rng);
      Morphism x = c;
      Polarization k = k0;
      for (int step = 0; step < n; ++step) {
        const Polarization nk{0, (k.root + 1) % n, m};
        x = change_polarization(cat, legs, k, nk, x);
        k = nk;
      }
      worst = std::max(worst, (x - c).max_abs());
      // every polarization of the corolla in turn, then back
      Polarization q = k0;
      x = c;
      for (int r = 0; r < n; ++r)
        for (int mm = 0; mm <= n; ++mm) {
          const Polarization nk{0, r, mm};
          x = change_polarization(cat, legs, q, nk, x);
          q = nk;
        }
      x = change_polarization(cat, legs, q, k0, x);
      worst = std::max(worst, (x - c).max_abs());
      ++done;
    }
    total += done;
  }
  o.detail << total << " colors, cycle residual " << sci(worst);
  o.require(worst < kTol, "cycle residual");
}

void decomposition(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  std::size_t total = 0, max_vertices = 0;
  for (const char* name : kBundled) {
    const Category cat(bundled(name));
    std::mt19937_64 rng(202);
    for (int t = 0; t < 200; ++t) {
      const Stacked s = random_stacked(cat, rng, {4, 6, 3, 12});
      max_vertices = std::max(max_vertices, std::size_t(s.graph.num_vertices));
      const Morphism r = replay(cat, s.graph, decompose(s.graph));
      worst = std::max(worst, (r - s.value).max_abs());
      ++total;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << total << " graphs (<= " << max_vertices << " vertices), replay vs contraction " << sci(worst) << ", "
           << secs << " s";
  o.require(worst < kTol, "replay residual");
  o.require(max_vertices <= 4, "vertex bound");
  o.require(secs < 60, "runtime");
}

struct Z2 {
  CategoryFile file = bundled_file("z2.cat");
  Category cat{file.data};
  AlgebraPtr a = parse_algebras(cat, file.algebras).at(0);
  AlgebraPtr one = trivial_algebra(cat);
};

void naturality(Outcome& o) {
  Z2 s;
  const NaturalityReport r = conjugation_naturality_suite(FrobFunctor(s.cat, FrobFunctor::Kind::forgetful), s.a, 100, 1);
  o.detail << r.operadic << " operadic + " << r.partial_trace << " partial-trace instances, residuals "
           << sci(r.operadic_residual) << " / " << sci(r.trace_residual) << "; defect vs averaging idempotent "
           << sci(r.defect_residual) << " (|e - id| = " << sci(r.defect_norm) << ")";
  o.require(r.operadic + r.partial_trace == 100, "instance count");
  o.require(r.operadic_residual < kTol && r.trace_residual < kTol, "naturality residual");
  o.require(r.defect_residual < kTol, "defect");
  o.require(r.defect_norm > 1e-3, "defect is trivial");
}

void splitting(Outcome& o) {
  Z2 s;
  const FrobFunctor u(s.cat, FrobFunctor::Kind::forgetful);
  const std::vector<AlgebraPtr> phases{s.one, s.a};
  std::mt19937_64 rng(303);
  double split = 0, idem = 0, nontrivial = 0;
  for (unsigned k = 0; k < 50; ++k) {
    std::uniform_int_distribution<int> pick(0, 1);
    const AlgebraPtr p = phases[std::size_t(pick(rng))], q = s.a, r = phases[std::size_t(pick(rng))];
    const Bimodule x = random_bimodule(s.cat, p, q, 1000 + k), y = random_bimodule(s.cat, q, r, 2000 + k);
    const SumMorphism lax = u.lax({x, y}), oplax = u.oplax({x, y});
    const SumMorphism top = sum_compose(s.cat, lax, oplax);
    split = std::max(split, (top - sum_identity(s.cat, top.src)).max_abs());
    const SumMorphism e = sum_compose(s.cat, oplax, lax);
    idem = std::max(idem, (sum_compose(s.cat, e, e) - e).max_abs());
    nontrivial = std::max(nontrivial, (e - sum_identity(s.cat, e.src)).max_abs());
  }
  o.detail << "50 pairs, |U^(2) U_(2) - id| " << sci(split) << ", idempotence " << sci(idem);
  o.require(split < kTol, "split");
  o.require(idem < kTol, "idempotent");
  o.require(nontrivial > 1e-3, "composite is never a proper idempotent");
}

void tube(Outcome& o) {
  const std::pair<const char*, std::size_t> dims[] = {{"trivial.cat", 1}, {"z2.cat", 4}, {"fib.cat", 7}};
  double assoc = 0;
  for (const auto& [name, expect] : dims) {
    const Category cat(bundled(name));
    const TubeAlgebra t = tube_algebra(cat);
    o.detail << name << " dim " << t.dim() << "; ";
    o.require(t.dim() == expect && tube_dim_oracle(cat.data()) == expect, std::string(name) + " dimension");
    assoc = std::max(assoc, t.associativity_residual);
    const WedderburnReport w = karoubi_split(t);
    std::vector<int> b = w.block_dims;
    std::sort(b.begin(), b.end());
    int sq = 0;
    for (int d : b) sq += d * d;
    o.require(std::size_t(sq) == t.dim(), std::string(name) + " sum of squares");
    if (std::string(name) == "fib.cat") o.require(b == std::vector<int>{1, 1, 1, 2}, "fib blocks");
    if (std::string(name) == "z2.cat") o.require(b == std::vector<int>{1, 1, 1, 1}, "z2 blocks");
  }
  o.detail << "associativity " << sci(assoc);
  o.require(assoc < kTol, "associativity");
}

void interval(Outcome& o) {
  std::size_t total = 0, agree = 0;
  for (const char* name : kBundled) {
    const Category cat(bundled(name));
    std::mt19937_64 rng(404);
    for (int k = 0; k < 30; ++k) {
      SWord s, t;
      const int ls = std::uniform_int_distribution<int>(0, 3)(rng), lt = std::uniform_int_distribution<int>(0, 3)(rng);
      for (int i = 0; i < ls; ++i) s.push_back(random_slabel(cat, rng, true));
      for (int i = 0; i < lt; ++i) t.push_back(random_slabel(cat, rng, true));
      const IntervalHoms h = interval_cylinder_homs(cat, s, t);
      ++total;
      if (h.dim == hom_oracle(cat.data(), cat.objects(s), cat.objects(t)) && h.basis.size() == h.dim) ++agree;
    }
  }
  o.detail << agree << "/" << total << " boundary-data pairs agree";
  o.require(agree == total, "dimension mismatch");
}

void factorization(Outcome& o) {
  double dinat = 0;
  std::size_t instances = 0;
  for (const char* name : kBundled) {
    const Category cat(bundled(name));
    std::mt19937_64 rng(505);
    for (int k = 0; k < 10; ++k) {
      const Word a = random_word(cat, rng, 2), b = random_word(cat, rng, 2), d = random_word(cat, rng, 1);
      Word c;
      do c = random_word(cat, rng, 2);
      while (cat.hom_dim(b, c) == 0);
      const Annulus t1 = random_annulus(cat, a, b, rng), t2 = random_annulus(cat, c, d, rng);
      const Annulus f = annulus_from_disk(cat, random_morphism(cat, b, c, rng));
      // moving f across the sewing circle
      dinat = std::max(dinat, annulus_distance(cat, sew(cat, sew(cat, t2, f), t1), sew(cat, t2, sew(cat, f, t1))));
      if (cat.hom_dim({}, a)) {
        const Morphism st = random_morphism(cat, {}, a, rng);
        dinat = std::max(dinat, (sew(cat, sew(cat, f, t1), st) - sew(cat, f, sew(cat, t1, st))).max_abs());
      }
      ++instances;
    }
  }
  double coend = 0;
  std::size_t pairs = 0, glued = 0, thick = 0;
  for (const char* name : {"z2.cat", "semion.cat", "fib.cat", "ising.cat"}) {
    const Category cat(bundled(name));
    std::mt19937_64 rng(606);
    for (int k = 0; k < 3; ++k) {
      const Word p = random_word(cat, rng, 2), r = random_word(cat, rng, 1);
      const CoendReport plain = disk_coend(cat, p, r, plain_middles(cat, 2));
      const CoendReport th = disk_coend(cat, p, r, isotypic_middles(cat, 2));
      ++pairs;
      if (plain.quotient_dim == plain.glued_dim && plain.sewing_rank == plain.glued_dim) ++glued;
      if (th.quotient_dim == plain.quotient_dim) ++thick;
      coend = std::max({coend, plain.dinaturality_residual, th.dinaturality_residual});
    }
  }
  o.detail << instances << " annulus sewings, dinaturality " << sci(dinat) << "; coend = glued " << glued << "/"
           << pairs << ", thick = plain " << thick << "/" << pairs << ", coend dinaturality " << sci(coend);
  o.require(dinat < kTol && coend < kTol, "dinaturality");
  o.require(glued == pairs, "glued dimension");
  o.require(thick == pairs, "thickened coend");
}

void universal(Outcome& o) {
  Z2 s;
  constexpr FrobeniusGraph graphs[] = {FrobeniusGraph::tree, FrobeniusGraph::dense, FrobeniusGraph::bubbles};
  std::size_t pairs = 0, equal = 0, negatives = 0, negatives_differ = 0, cells = 0, independent = 0;
  double worst = 0, spread = 0;
  std::mt19937_64 rng(707);
  for (unsigned seed = 1; pairs < 50; ++seed) {
    const WorldSheet w = random_world_sheet(s.cat, {s.one, s.a}, seed, {4, 3, 1});
    std::vector<WorldSheet> related;
    const std::size_t n = w.layers.size();
    const std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t last = std::uniform_int_distribution<std::size_t>(first, n - 1)(rng);
    related.push_back(contract(s.cat, w, first, last));
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (auto x = interchange(w, i)) {
        related.push_back(*x);
        break;
      }
    for (const auto& v : related) {
      if (pairs == 50) break;
      const FrobeniusGraph g1 = graphs[pairs % 3], g2 = graphs[(pairs + 1) % 3];
      const UniversalReport r = universal_correlator_test(s.cat, w, v, g1, g2);
      ++pairs;
      if (r.fr_equal && r.cor_equal) ++equal;
      worst = std::max(worst, r.cor_distance);
    }
    const SumMorphism c = correlator_disk(s.cat, w);
    ++cells;
    const double sp = std::max((correlator_disk(s.cat, w, FrobeniusGraph::dense) - c).max_abs(),
                               (correlator_disk(s.cat, w, FrobeniusGraph::bubbles) - c).max_abs());
    spread = std::max(spread, sp);
    if (sp < kTol) ++independent;
    if (c.max_abs() > 1e-6) {
      ++negatives;
      const UniversalReport neg = universal_correlator_test(s.cat, w, scale_layer(w, seed % n, 2.0));
      if (!neg.fr_equal && !neg.cor_equal) ++negatives_differ;
    }
  }
  o.detail << equal << "/" << pairs << " move-related pairs equal (max distance " << sci(worst) << "); "
           << negatives_differ << "/" << negatives << " scaled controls differ; " << independent << "/" << cells
           << " sheets independent of the 3 Frobenius graphs (spread " << sci(spread) << ")";
  o.require(equal == pairs, "move-related pairs");
  o.require(negatives > 0 && negatives_differ == negatives, "negative controls");
  o.require(independent == cells, "frobenius graph dependence");
}

}  // namespace

int main() {
  set_tolerance(kTol);
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"pentagon/consistency", pentagon},       {"loop values", loop_values},
      {"coupon rotation", coupon_rotation},     {"decomposition soundness", decomposition},
      {"conjugation naturality", naturality},   {"idempotent splitting", splitting},
      {"tube algebra", tube},                   {"interval cylinder equivalence", interval},
      {"factorization", factorization},         {"universal correlator", universal},
  };
  int failed = 0;
  int k = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%d criteria passed in %.1f s\n", k - failed, k, total);
  return failed ? 1 : 0;
}
