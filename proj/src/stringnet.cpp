#include "sn/stringnet.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "sn/sum.hpp"

namespace sn {

namespace {

SWord up_labels(const Word& w) {
  SWord s;
  for (int a : w) s.push_back({a, 1});
  return s;
}

Word cat_words(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Eigen::VectorXcd flat_vector(const Morphism& m) {
  const DenseTensor f = m.flat();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v(Eigen::Index(i)) = f.data()[i];
  return v;
}

Morphism from_vec(const Category& cat, const Word& src, const Word& tgt, const Eigen::VectorXcd& v) {
  std::vector<Scalar> d(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) d[std::size_t(i)] = v(i);
  return cat.from_flat(src, tgt, DenseTensor({d.size()}, d));
}

// Hom(x inner, outer x) with the unit strand identified with Hom(inner, outer).
Morphism reframe(const Category&, int x, const Word& inner, const Word& outer, const Morphism& f) {
  Morphism m;
  m.src = cat_words({x}, inner);
  m.tgt = cat_words(outer, {x});
  m.blocks = f.blocks;
  return m;
}

std::size_t numeric_rank(const Eigen::MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * scale) ++r;
  return r;
}

}  // namespace

StringNetSpace disk_space(const Category& cat, const BoundaryDatum& b) {
  StringNetSpace s;
  s.datum = b;
  const Word w = cat.objects(b.points);
  s.dim = cat.hom_dim({}, w);
  for (std::size_t k = 0; k < s.dim; ++k) s.basis.push_back(cat.basis_element({}, w, k));
  return s;
}

DiskGraph coupon_disk(const Category&, const Morphism& f) {
  PlanarStack st(up_labels(f.src));
  const int v = st.coupon(0, static_cast<int>(f.src.size()), up_labels(f.tgt));
  DiskGraph g = st.finish();
  g.colors[std::size_t(v)] = VertexColor{{v, 0, static_cast<int>(f.tgt.size())}, f};
  return g;
}

Morphism disk_morphism(const Category& cat, const DiskGraph& g, int n_out) {
  const Morphism state = evaluate_disk(cat, g);
  const SWord legs = boundary_datum_of(g).points;
  if (legs.empty()) return state;
  return from_state(cat, legs, Polarization{0, 0, n_out}, state);
}

DiskGraph sew(const DiskGraph& g1, const DiskGraph& g2, int n) {
  const int b1 = static_cast<int>(g1.boundary.size()), b2 = static_cast<int>(g2.boundary.size());
  if (n < 0 || n > b1 || n > b2) throw SewingError("sewing interval exceeds the boundary");
  const int H1 = g1.num_half_edges(), H = H1 + g2.num_half_edges();
  const int V1 = g1.num_vertices;
  std::vector<int> vertex, partner;
  std::vector<SLabel> label;
  for (int h = 0; h < H1; ++h) {
    vertex.push_back(g1.vertex[std::size_t(h)]);
    partner.push_back(g1.partner[std::size_t(h)]);
    label.push_back(g1.label[std::size_t(h)]);
  }
  for (int h = 0; h < g2.num_half_edges(); ++h) {
    const int v = g2.vertex[std::size_t(h)];
    vertex.push_back(v < 0 ? v : v + V1);
    partner.push_back(g2.partner[std::size_t(h)] + H1);
    label.push_back(g2.label[std::size_t(h)]);
  }
  std::vector<int> link(std::size_t(H), -1);
  for (int i = 0; i < n; ++i) {
    const int h1 = g1.boundary[std::size_t(b1 - 1 - i)];
    const int h2 = g2.boundary[std::size_t(i)] + H1;
    if (!(Category::reverse(label[std::size_t(h1)]) == label[std::size_t(h2)]))
      throw SewingError("boundary colors do not match along the sewing interval");
    link[std::size_t(h1)] = h2;
    link[std::size_t(h2)] = h1;
  }
  std::vector<char> seen(std::size_t(H), 0);
  auto follow = [&](int h) {
    int q = partner[std::size_t(h)];
    while (link[std::size_t(q)] >= 0) {
      seen[std::size_t(q)] = 1;
      const int q2 = link[std::size_t(q)];
      seen[std::size_t(q2)] = 1;
      q = partner[std::size_t(q2)];
    }
    return q;
  };

  DiskGraph g;
  for (int v = 0; v < V1 + g2.num_vertices; ++v) g.add_vertex();
  std::vector<int> idx(std::size_t(H), -1);
  for (int h = 0; h < H; ++h)
    if (link[std::size_t(h)] < 0) {
      idx[std::size_t(h)] = g.num_half_edges();
      g.vertex.push_back(vertex[std::size_t(h)]);
      g.label.push_back(label[std::size_t(h)]);
      g.partner.push_back(-1);
    }
  for (int h = 0; h < H; ++h)
    if (link[std::size_t(h)] < 0) g.partner[std::size_t(idx[std::size_t(h)])] = idx[std::size_t(follow(h))];
  g.circles = g1.circles;
  g.circles.insert(g.circles.end(), g2.circles.begin(), g2.circles.end());
  for (int h = 0; h < H; ++h) {
    if (link[std::size_t(h)] < 0 || seen[std::size_t(h)]) continue;
    g.circles.push_back(label[std::size_t(partner[std::size_t(h)])]);
    int q = h;
    do {
      seen[std::size_t(q)] = 1;
      const int q2 = link[std::size_t(q)];
      seen[std::size_t(q2)] = 1;
      q = partner[std::size_t(q2)];
    } while (!seen[std::size_t(q)]);
  }
  for (int v = 0; v < V1; ++v) {
    for (int h : g1.rotation[std::size_t(v)]) g.rotation[std::size_t(v)].push_back(idx[std::size_t(h)]);
    g.colors[std::size_t(v)] = g1.colors[std::size_t(v)];
  }
  for (int v = 0; v < g2.num_vertices; ++v) {
    for (int h : g2.rotation[std::size_t(v)]) g.rotation[std::size_t(v + V1)].push_back(idx[std::size_t(h + H1)]);
    auto c = g2.colors[std::size_t(v)];
    if (c) c->pol.vertex += V1;
    g.colors[std::size_t(v + V1)] = c;
  }
  for (int i = 0; i < b1 - n; ++i) g.boundary.push_back(idx[std::size_t(g1.boundary[std::size_t(i)])]);
  for (int i = n; i < b2; ++i) g.boundary.push_back(idx[std::size_t(g2.boundary[std::size_t(i)] + H1)]);
  return g;
}

IntervalHoms interval_cylinder_homs(const Category& cat, const SWord& source, const SWord& target) {
  IntervalHoms r;
  r.cut.points = target;
  for (auto it = source.rbegin(); it != source.rend(); ++it) r.cut.points.push_back(Category::reverse(*it));
  const int n = static_cast<int>(r.cut.points.size());
  const ColorSpace cs = color_space(cat, r.cut.points, Polarization{0, 0, n ? static_cast<int>(target.size()) : 0});
  r.dim = cs.dim;
  for (std::size_t k = 0; k < cs.dim; ++k) r.basis.push_back(cat.basis_element(cs.source, cs.target, k));
  return r;
}

Annulus annulus_identity(const Category& cat, const Word& w) { return annulus_from_disk(cat, cat.identity(w)); }

Annulus annulus_from_disk(const Category& cat, const Morphism& f) {
  return Annulus{f.src, f.tgt, {AnnulusTerm{cat.unit(), reframe(cat, cat.unit(), f.src, f.tgt, f)}}};
}

std::pair<std::vector<Morphism>, std::vector<Morphism>> dual_bases(const Category& cat, int z, const Word& w) {
  const std::size_t n = cat.hom_dim({z}, w);
  std::vector<Morphism> iota, pi, dual;
  for (std::size_t k = 0; k < n; ++k) {
    iota.push_back(cat.basis_element({z}, w, k));
    pi.push_back(cat.basis_element(w, {z}, k));
  }
  Eigen::MatrixXcd G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t b = 0; b < n; ++b)
      G(Eigen::Index(g), Eigen::Index(b)) = cat.compose(pi[g], iota[b]).flat().data()[0];
  const Eigen::MatrixXcd Gi = G.inverse();
  for (std::size_t b = 0; b < n; ++b) {
    Morphism d = pi[0] * Gi(Eigen::Index(b), 0);
    for (std::size_t g = 1; g < n; ++g) d = d + pi[g] * Gi(Eigen::Index(b), Eigen::Index(g));
    dual.push_back(d);
  }
  return {iota, dual};
}

Annulus normalize_strand(const Category& cat, const Word& x, const Word& inner, const Word& outer, const Morphism& mu) {
  Annulus r{inner, outer, {}};
  if (x.empty()) {
    r.terms.push_back({cat.unit(), reframe(cat, cat.unit(), inner, outer, mu)});
    return r;
  }
  for (int z = 0; z < cat.rank(); ++z) {
    const auto [iota, pi] = dual_bases(cat, z, x);
    if (iota.empty()) continue;
    std::optional<Morphism> acc;
    for (std::size_t b = 0; b < iota.size(); ++b) {
      const Morphism t = cat.compose(cat.pad(outer, pi[b], {}), cat.compose(mu, cat.pad({}, iota[b], inner)));
      acc = acc ? *acc + t : t;
    }
    r.terms.push_back({z, *acc});
  }
  return r;
}

Eigen::VectorXcd annulus_vector(const Category& cat, const Annulus& a) {
  std::vector<Eigen::VectorXcd> parts;
  Eigen::Index total = 0;
  for (int x = 0; x < cat.rank(); ++x) {
    const Word src = cat_words({x}, a.inner), tgt = cat_words(a.outer, {x});
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cat.hom_dim(src, tgt)));
    for (const auto& t : a.terms) {
      if (t.x != x) continue;
      if (t.mu.src != src || t.mu.tgt != tgt) throw DimensionError("annulus term has the wrong signature");
      v += flat_vector(t.mu);
    }
    total += v.size();
    parts.push_back(v);
  }
  Eigen::VectorXcd out(total);
  Eigen::Index o = 0;
  for (const auto& p : parts) {
    out.segment(o, p.size()) = p;
    o += p.size();
  }
  return out;
}

Annulus annulus_from_vector(const Category& cat, const Word& inner, const Word& outer, const Eigen::VectorXcd& v) {
  Annulus a{inner, outer, {}};
  Eigen::Index o = 0;
  for (int x = 0; x < cat.rank(); ++x) {
    const Word src = cat_words({x}, inner), tgt = cat_words(outer, {x});
    const auto d = static_cast<Eigen::Index>(cat.hom_dim(src, tgt));
    if (d == 0) continue;
    if (o + d > v.size()) throw DimensionError("annulus vector too short");
    a.terms.push_back({x, from_vec(cat, src, tgt, v.segment(o, d))});
    o += d;
  }
  if (o != v.size()) throw DimensionError("annulus vector has the wrong length");
  return a;
}

double annulus_distance(const Category& cat, const Annulus& a, const Annulus& b) {
  if (a.inner != b.inner || a.outer != b.outer) throw DimensionError("annuli with different boundaries");
  const Eigen::VectorXcd d = annulus_vector(cat, a) - annulus_vector(cat, b);
  return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

Annulus operator*(const Annulus& a, Scalar s) {
  Annulus r = a;
  for (auto& t : r.terms) t.mu = t.mu * s;
  return r;
}

Annulus operator+(const Annulus& a, const Annulus& b) {
  if (a.inner != b.inner || a.outer != b.outer) throw DimensionError("annuli with different boundaries");
  Annulus r = a;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  return r;
}

DiskGraph cut_open(const Category&, const AnnulusTerm& outer, const Word& mid, const AnnulusTerm& inner,
                   const Word& in, int z, const Morphism& split, const Morphism& fuse) {
  const Word top(outer.mu.tgt.begin(), outer.mu.tgt.end() - 1);
  SWord bottom{{z, 1}};
  for (int a : in) bottom.push_back({a, 1});
  PlanarStack st(bottom);
  const int v0 = st.coupon(0, 1, {{outer.x, 1}, {inner.x, 1}});
  const int v1 = st.coupon(1, 1 + static_cast<int>(in.size()), up_labels(cat_words(mid, {inner.x})));
  const int v2 = st.coupon(0, 1 + static_cast<int>(mid.size()), up_labels(cat_words(top, {outer.x})));
  const int v3 = st.coupon(static_cast<int>(top.size()), 2, {{z, 1}});
  DiskGraph g = st.finish();
  g.colors[std::size_t(v0)] = VertexColor{{v0, 0, 2}, split};
  g.colors[std::size_t(v1)] = VertexColor{{v1, 0, static_cast<int>(mid.size()) + 1}, inner.mu};
  g.colors[std::size_t(v2)] = VertexColor{{v2, 0, static_cast<int>(top.size()) + 1}, outer.mu};
  g.colors[std::size_t(v3)] = VertexColor{{v3, 0, 1}, fuse};
  return g;
}

Annulus sew(const Category& cat, const Annulus& outer, const Annulus& inner) {
  if (outer.inner != inner.outer) throw SewingError("annuli do not share the sewing circle");
  std::vector<std::optional<Morphism>> acc(std::size_t(cat.rank()));
  for (const auto& o : outer.terms) {
    if (o.mu.max_abs() == 0) continue;
    for (const auto& i : inner.terms) {
      if (i.mu.max_abs() == 0) continue;
      for (int z = 0; z < cat.rank(); ++z) {
        if (!cat.n(o.x, i.x, z)) continue;
        const auto [iota, pi] = dual_bases(cat, z, {o.x, i.x});
        for (std::size_t b = 0; b < iota.size(); ++b) {
          const DiskGraph g = cut_open(cat, o, outer.inner, i, inner.inner, z, iota[b], pi[b]);
          const Morphism v = disk_morphism(cat, g, static_cast<int>(outer.outer.size()) + 1);
          auto& slot = acc[std::size_t(z)];
          slot = slot ? *slot + v : v;
        }
      }
    }
  }
  Annulus r{inner.inner, outer.outer, {}};
  for (int z = 0; z < cat.rank(); ++z)
    if (acc[std::size_t(z)]) r.terms.push_back({z, *acc[std::size_t(z)]});
  return r;
}

Morphism sew(const Category& cat, const Annulus& a, const Morphism& state) {
  if (!state.src.empty() || state.tgt != a.inner) throw SewingError("disk boundary does not match the annulus");
  Morphism acc = cat.zero({}, a.outer);
  const bool scalar = a.inner.empty();
  for (const auto& t : a.terms) {
    PlanarStack st;
    st.cup(0, {t.x, 1});
    const int vs = scalar ? -1 : st.coupon(1, 0, up_labels(a.inner));
    const int vm = st.coupon(0, 1 + static_cast<int>(a.inner.size()), up_labels(cat_words(a.outer, {t.x})));
    st.cap(static_cast<int>(a.outer.size()));
    DiskGraph g = st.finish();
    if (!scalar) g.colors[std::size_t(vs)] = VertexColor{{vs, 0, static_cast<int>(a.inner.size())}, state};
    g.colors[std::size_t(vm)] = VertexColor{{vm, 0, static_cast<int>(a.outer.size()) + 1}, t.mu};
    const Morphism v = evaluate_disk(cat, g);
    acc = acc + (scalar ? v * cat.as_scalar(state) : v);
  }
  return acc;
}

Annulus dehn_twist(const Category& cat, const Word& w) {
  if (w.empty()) return annulus_identity(cat, w);
  return normalize_strand(cat, w, w, w, cat.identity(cat_words(w, w)));
}

Annulus dehn_twist_inverse(const Category& cat, const Word& w) {
  if (w.empty()) return annulus_identity(cat, w);
  return normalize_strand(cat, word_dual(cat, w), w, w, cat.compose(coev_word(cat, w), ev_word(cat, w)));
}

Eigen::VectorXcd TubeAlgebra::multiply(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
  return left_matrix(u) * v;
}

Eigen::MatrixXcd TubeAlgebra::left_matrix(const Eigen::VectorXcd& u) const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (u(i) != Scalar(0)) m += u(i) * left[std::size_t(i)];
  return m;
}

namespace {

std::size_t tube_offset(const Category& cat, const TubeAlgebra& t, int a, int b, int x) {
  for (std::size_t i = 0; i < t.basis.size(); ++i)
    if (t.basis[i].a == a && t.basis[i].b == b && t.basis[i].x == x) return i;
  (void)cat;
  throw DimensionError("no tube with these labels");
}

}  // namespace

Annulus tube_annulus(const Category& cat, const TubeAlgebra& t, std::size_t i) {
  const Tube& e = t.basis.at(i);
  return Annulus{{e.a}, {e.b}, {{e.x, cat.basis_element({e.x, e.a}, {e.b, e.x}, e.k)}}};
}

Eigen::VectorXcd tube_coordinates(const Category& cat, const TubeAlgebra& t, const Annulus& a) {
  if (a.inner.size() != 1 || a.outer.size() != 1) throw DimensionError("tube elements have one point per circle");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(t.dim()));
  for (const auto& term : a.terms) {
    const Eigen::VectorXcd f = flat_vector(term.mu);
    if (f.size() == 0) continue;
    const std::size_t o = tube_offset(cat, t, a.inner[0], a.outer[0], term.x);
    v.segment(static_cast<Eigen::Index>(o), f.size()) += f;
  }
  return v;
}

Annulus tube_element(const Category& cat, const TubeAlgebra& t, const Eigen::VectorXcd& v, int a, int b) {
  Annulus r{{a}, {b}, {}};
  for (int x = 0; x < cat.rank(); ++x) {
    const auto d = static_cast<Eigen::Index>(cat.hom_dim({x, a}, {b, x}));
    if (d == 0) continue;
    const auto o = static_cast<Eigen::Index>(tube_offset(cat, t, a, b, x));
    r.terms.push_back({x, from_vec(cat, {x, a}, {b, x}, v.segment(o, d))});
  }
  return r;
}

TubeAlgebra tube_algebra(const Category& cat) {
  TubeAlgebra t;
  const int r = cat.rank();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int x = 0; x < r; ++x) {
        const std::size_t d = cat.hom_dim({x, a}, {b, x});
        for (std::size_t k = 0; k < d; ++k) t.basis.push_back({a, b, x, k});
      }
  const auto n = static_cast<Eigen::Index>(t.dim());
  std::vector<Annulus> tubes;
  for (std::size_t i = 0; i < t.dim(); ++i) tubes.push_back(tube_annulus(cat, t, i));
  t.left.assign(t.dim(), Eigen::MatrixXcd::Zero(n, n));
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = 0; j < t.dim(); ++j)
      if (t.basis[j].b == t.basis[i].a)
        t.left[i].col(Eigen::Index(j)) = tube_coordinates(cat, t, sew(cat, tubes[i], tubes[j]));

  t.unit = Eigen::VectorXcd::Zero(n);
  for (int a = 0; a < r; ++a) t.unit += tube_coordinates(cat, t, annulus_identity(cat, {a}));

  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  t.unit_residual = (t.left_matrix(t.unit) - I).cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i)
    t.unit_residual = std::max(t.unit_residual, (t.left[std::size_t(i)] * t.unit - I.col(i)).cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::MatrixXcd lhs = t.left_matrix(t.left[std::size_t(i)].col(j));
      const Eigen::MatrixXcd rhs = t.left[std::size_t(i)] * t.left[std::size_t(j)];
      t.associativity_residual = std::max(t.associativity_residual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return t;
}

WedderburnReport wedderburn(const std::vector<Eigen::MatrixXcd>& left, const Eigen::VectorXcd& unit, unsigned seed,
                            double tol) {
  WedderburnReport rep;
  rep.seed = seed;
  const auto n = static_cast<Eigen::Index>(left.size());
  if (n == 0) return rep;
  auto lmat = [&](const Eigen::VectorXcd& u) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      if (u(i) != Scalar(0)) m += u(i) * left[std::size_t(i)];
    return m;
  };

  Eigen::MatrixXcd trace_form(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) trace_form(i, j) = (left[std::size_t(i)] * left[std::size_t(j)]).trace();
  Eigen::JacobiSVD<Eigen::MatrixXcd> tsvd(trace_form);
  rep.radical_norm = tsvd.singularValues()(n - 1);
  rep.semisimple = rep.radical_norm > 10 * tol * std::max(1.0, tsvd.singularValues()(0));

  // z e_t = e_t z for every basis element t
  Eigen::MatrixXcd C(n * n, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    Eigen::MatrixXcd block(n, n);
    for (Eigen::Index i = 0; i < n; ++i) block.col(i) = left[std::size_t(i)].col(t);
    C.block(t * n, 0, n, n) = block - left[std::size_t(t)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> csvd(C, Eigen::ComputeFullV);
  const auto& sv = csvd.singularValues();
  const double scale = std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 10 * tol * scale) ++rank;
  const Eigen::MatrixXcd Z = csvd.matrixV().rightCols(n - rank);
  rep.center_dim = static_cast<std::size_t>(Z.cols());
  const Eigen::Index k = Z.cols();
  if (k == 0) return rep;

  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXcd r(k);
    for (Eigen::Index i = 0; i < k; ++i) r(i) = Scalar(nd(rng), nd(rng));
    const Eigen::VectorXcd c = Z * r;
    const Eigen::MatrixXcd M = Z.adjoint() * lmat(c) * Z;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    const auto& ev = es.eigenvalues();
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i + 1; j < k; ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
    if (gap < 1e3 * tol) continue;
    rep.central_idempotents.clear();
    rep.block_dims.clear();
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(n);
    rep.idempotent_residual = 0;
    bool ok = true;
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::VectorXcd w = Z * es.eigenvectors().col(i);
      const Eigen::VectorXcd w2 = lmat(w) * w;
      const Scalar mu = w.dot(w2) / w.squaredNorm();
      if (std::abs(mu) < 10 * tol) {
        ok = false;
        break;
      }
      const Eigen::VectorXcd e = w / mu;
      const Eigen::MatrixXcd Le = lmat(e);
      rep.idempotent_residual = std::max(rep.idempotent_residual, (Le * e - e).cwiseAbs().maxCoeff());
      const double d2 = Le.trace().real();
      rep.block_dims.push_back(static_cast<int>(std::lround(std::sqrt(std::max(0.0, d2)))));
      rep.central_idempotents.push_back(e);
      sum += e;
    }
    if (!ok) {
      rep.semisimple = false;
      continue;
    }
    rep.idempotent_residual = std::max(rep.idempotent_residual, (sum - unit).cwiseAbs().maxCoeff());
    std::vector<std::size_t> order(rep.block_dims.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rep.block_dims[a] < rep.block_dims[b]; });
    WedderburnReport sorted = rep;
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted.block_dims[i] = rep.block_dims[order[i]];
      sorted.central_idempotents[i] = rep.central_idempotents[order[i]];
    }
    return sorted;
  }
  rep.semisimple = false;
  return rep;
}

WedderburnReport karoubi_split(const TubeAlgebra& t, unsigned seed, double tol) {
  return wedderburn(t.left, t.unit, seed, tol);
}

IdempotentSplit split_idempotent(const Eigen::MatrixXcd& e, double tol) {
  IdempotentSplit s;
  const Eigen::Index n = e.rows();
  if (n == 0) return s;
  s.rank = static_cast<std::size_t>(std::max(0L, std::lround(e.trace().real())));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(e);
  const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const auto r = static_cast<Eigen::Index>(s.rank);
  s.iota = Q.leftCols(r);
  s.pi = s.iota.adjoint() * e;
  s.residual = (e * e - e).cwiseAbs().maxCoeff();
  if (r > 0) {
    s.residual = std::max(s.residual, (s.pi * s.iota - Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff());
    s.residual = std::max(s.residual, (s.iota * s.pi - e).cwiseAbs().maxCoeff());
  }
  (void)tol;
  return s;
}

StringNetSpace karoubified_disk_space(const Category& cat, const ThickenedBoundaryDatum& b, double tol) {
  const Word w = cat.objects(b.datum.points);
  const Annulus& B = b.idempotent;
  if (B.inner != w || B.outer != w) throw SewingError("idempotent does not live on the boundary datum");
  const Annulus BB = sew(cat, B, B);
  if (annulus_distance(cat, BB, B) > tol * std::max(1.0, annulus_vector(cat, B).cwiseAbs().maxCoeff()))
    throw IdempotencyError("thickening is not idempotent");
  const StringNetSpace plain = disk_space(cat, b.datum);
  StringNetSpace s;
  s.datum = b.datum;
  const auto n = static_cast<Eigen::Index>(plain.dim);
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index k = 0; k < n; ++k) M.col(k) = flat_vector(sew(cat, B, plain.basis[std::size_t(k)]));
  const IdempotentSplit sp = split_idempotent(M, tol);
  s.dim = sp.rank;
  for (std::size_t k = 0; k < sp.rank; ++k)
    s.basis.push_back(from_vec(cat, {}, w, sp.iota.col(static_cast<Eigen::Index>(k))));
  return s;
}

std::vector<ThickenedInterval> plain_middles(const Category& cat, std::size_t max_len) {
  std::vector<Word> words{{}}, layer{{}};
  for (std::size_t l = 1; l <= max_len; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (int a = 0; a < cat.rank(); ++a)
        if (a != cat.unit()) next.push_back(cat_words(w, {a}));
    words.insert(words.end(), next.begin(), next.end());
    layer = next;
  }
  std::vector<ThickenedInterval> r;
  for (const auto& w : words) r.push_back({w, cat.identity(w)});
  return r;
}

std::vector<ThickenedInterval> isotypic_middles(const Category& cat, std::size_t max_len) {
  std::vector<ThickenedInterval> r;
  for (const auto& m : plain_middles(cat, max_len)) {
    if (m.word.empty()) {
      r.push_back(m);
      continue;
    }
    for (int c = 0; c < cat.rank(); ++c) {
      const auto [iota, pi] = dual_bases(cat, c, m.word);
      if (iota.empty()) continue;
      Morphism e = cat.zero(m.word, m.word);
      for (std::size_t b = 0; b < iota.size(); ++b) e = e + cat.compose(iota[b], pi[b]);
      r.push_back({m.word, e});
    }
  }
  return r;
}

CoendReport disk_coend(const Category& cat, const Word& p, const Word& r, const std::vector<ThickenedInterval>& middles,
                       double tol) {
  CoendReport rep;
  struct Side {
    IdempotentSplit split;
    Word src, tgt;
  };
  // image of f -> f o e on Hom(q, p) and of g -> e o g on Hom(r, q)
  auto side = [&](const Word& src, const Word& tgt, auto&& op) {
    const std::size_t n = cat.hom_dim(src, tgt);
    Eigen::MatrixXcd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k)
      M.col(Eigen::Index(k)) = flat_vector(op(cat.basis_element(src, tgt, k)));
    return Side{split_idempotent(M, tol), src, tgt};
  };
  auto vec_of = [&](const Side& s, Eigen::Index k) { return from_vec(cat, s.src, s.tgt, s.split.iota.col(k)); };

  std::vector<Side> F, G;
  std::vector<Eigen::Index> offset;
  Eigen::Index total = 0;
  for (const auto& m : middles) {
    F.push_back(side(m.word, p, [&](const Morphism& f) { return cat.compose(f, m.idempotent); }));
    G.push_back(side(r, m.word, [&](const Morphism& g) { return cat.compose(m.idempotent, g); }));
    offset.push_back(total);
    total += static_cast<Eigen::Index>(F.back().split.rank * G.back().split.rank);
  }
  rep.total_dim = static_cast<std::size_t>(total);
  rep.glued_dim = cat.hom_dim(r, p);

  std::vector<Eigen::VectorXcd> rels;
  for (std::size_t i = 0; i < middles.size(); ++i)
    for (std::size_t j = 0; j < middles.size(); ++j) {
      const auto& mi = middles[i];
      const auto& mj = middles[j];
      const Side phis = side(mi.word, mj.word, [&](const Morphism& phi) {
        return cat.compose(mj.idempotent, cat.compose(phi, mi.idempotent));
      });
      const auto fi = static_cast<Eigen::Index>(F[i].split.rank), gi = static_cast<Eigen::Index>(G[i].split.rank);
      const auto fj = static_cast<Eigen::Index>(F[j].split.rank), gj = static_cast<Eigen::Index>(G[j].split.rank);
      for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(phis.split.rank); ++a) {
        const Morphism phi = vec_of(phis, a);
        for (Eigen::Index s = 0; s < fj; ++s) {
          const Eigen::VectorXcd fphi = F[i].split.pi * flat_vector(cat.compose(vec_of(F[j], s), phi));
          for (Eigen::Index t = 0; t < gi; ++t) {
            const Eigen::VectorXcd phig = G[j].split.pi * flat_vector(cat.compose(phi, vec_of(G[i], t)));
            Eigen::VectorXcd rel = Eigen::VectorXcd::Zero(total);
            for (Eigen::Index u = 0; u < fi; ++u) rel(offset[i] + u * gi + t) += fphi(u);
            for (Eigen::Index u = 0; u < gj; ++u) rel(offset[j] + s * gj + u) -= phig(u);
            rels.push_back(rel);
          }
        }
      }
    }
  Eigen::MatrixXcd R(total, static_cast<Eigen::Index>(rels.size()));
  for (std::size_t k = 0; k < rels.size(); ++k) R.col(Eigen::Index(k)) = rels[k];
  rep.relations_rank = numeric_rank(R, 1e3 * tol);
  rep.quotient_dim = rep.total_dim - rep.relations_rank;

  Eigen::MatrixXcd S(static_cast<Eigen::Index>(rep.glued_dim), total);
  for (std::size_t i = 0; i < middles.size(); ++i) {
    const auto fi = static_cast<Eigen::Index>(F[i].split.rank), gi = static_cast<Eigen::Index>(G[i].split.rank);
    for (Eigen::Index s = 0; s < fi; ++s)
      for (Eigen::Index t = 0; t < gi; ++t) {
        const DiskGraph g = sew(coupon_disk(cat, vec_of(F[i], s)), coupon_disk(cat, vec_of(G[i], t)),
                                static_cast<int>(middles[i].word.size()));
        S.col(offset[i] + s * gi + t) = flat_vector(disk_morphism(cat, g, static_cast<int>(p.size())));
      }
  }
  rep.sewing_rank = numeric_rank(S, 1e3 * tol);
  if (R.cols() > 0 && S.rows() > 0) rep.dinaturality_residual = (S * R).cwiseAbs().maxCoeff();
  return rep;
}

}  // namespace sn
