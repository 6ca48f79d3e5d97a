#include "sn/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "sn/category.hpp"

namespace sn {

int FusionData::label(const std::string& s) const {
  for (int i = 0; i < rank(); ++i)
    if (labels[static_cast<std::size_t>(i)] == s) return i;
  throw LabelError("unknown label '" + s + "'");
}

Word FusionData::word(const std::vector<std::string>& s) const {
  Word w;
  for (const auto& x : s) w.push_back(label(x));
  return w;
}

void FusionData::check_label(int a) const {
  if (a < 0 || a >= rank()) throw LabelError("label index " + std::to_string(a) + " out of range");
}

namespace {

DenseTensor unit_block(const FusionData& d, const FKey& k) {
  const auto [a, b, c, dd, e, f] = k;
  std::vector<std::size_t> sh{std::size_t(d.n(a, b, e)), std::size_t(d.n(e, c, dd)),
                              std::size_t(d.n(b, c, f)), std::size_t(d.n(a, f, dd))};
  DenseTensor t(sh);
  if (a == d.unit) {
    for (std::size_t i = 0; i < sh[1]; ++i) t.at({0, i, i, 0}) = 1.0;
  } else if (b == d.unit) {
    for (std::size_t i = 0; i < sh[1]; ++i) t.at({0, i, 0, i}) = 1.0;
  } else {
    for (std::size_t i = 0; i < sh[0]; ++i) t.at({i, 0, 0, i}) = 1.0;
  }
  return t;
}

bool unit_admissible(const FusionData& d, const FKey& k) {
  const auto [a, b, c, dd, e, f] = k;
  if (a == d.unit) return e == b && f == dd;
  if (b == d.unit) return e == a && f == c;
  return e == dd && f == b;
}

}  // namespace

void FusionData::complete_and_check() {
  const int r = rank();
  if (r == 0) throw SchemaError("category has no labels");
  if (unit < 0 || unit >= r) throw SchemaError("unit label out of range");
  if (static_cast<int>(dual.size()) != r) throw SchemaError("dual map has wrong length");
  for (int a = 0; a < r; ++a) {
    const int da = dual[static_cast<std::size_t>(a)];
    if (da < 0 || da >= r || dual[static_cast<std::size_t>(da)] != a)
      throw SchemaError("dual map is not an involution at " + labels[static_cast<std::size_t>(a)]);
  }
  if (dual[static_cast<std::size_t>(unit)] != unit) throw SchemaError("dual of unit is not unit");
  if (static_cast<int>(N.size()) != r * r * r) throw SchemaError("fusion table has wrong size");
  for (int x : N)
    if (x < 0) throw SchemaError("negative fusion multiplicity");
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const int want = a == b ? 1 : 0;
      if (n(unit, a, b) != want || n(a, unit, b) != want)
        throw SchemaError("unit fusion rule violated at " + labels[static_cast<std::size_t>(a)]);
    }
  for (int a = 0; a < r; ++a)
    if (n(a, dual[static_cast<std::size_t>(a)], unit) != 1)
      throw SchemaError("N_{a,dual(a)}^1 must be 1 for simple " + labels[static_cast<std::size_t>(a)]);
  if (pivotal.empty()) pivotal.assign(static_cast<std::size_t>(r), Scalar(1.0));
  if (static_cast<int>(pivotal.size()) != r) throw SchemaError("pivotal table has wrong length");

  for (const auto& [k, t] : F) {
    for (int x : k)
      if (x < 0 || x >= r) throw SchemaError("F block has label out of range");
    const auto [a, b, c, dd, e, f] = k;
    std::vector<std::size_t> sh{std::size_t(n(a, b, e)), std::size_t(n(e, c, dd)),
                                std::size_t(n(b, c, f)), std::size_t(n(a, f, dd))};
    if (t.shape() != sh) throw SchemaError("F block has wrong shape");
  }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int dd = 0; dd < r; ++dd)
          for (int e = 0; e < r; ++e) {
            if (!n(a, b, e) || !n(e, c, dd)) continue;
            for (int f = 0; f < r; ++f) {
              if (!n(b, c, f) || !n(a, f, dd)) continue;
              FKey k{a, b, c, dd, e, f};
              if (F.count(k)) continue;
              const bool has_unit = a == unit || b == unit || c == unit;
              if (has_unit && unit_admissible(*this, k)) {
                F.emplace(k, unit_block(*this, k));
              } else if (!has_unit) {
                throw SchemaError("missing F block (" + labels[a] + "," + labels[b] + "," +
                                  labels[c] + ";" + labels[dd] + ";" + labels[e] + "," +
                                  labels[f] + ")");
              }
            }
          }
}

bool ValidationReport::valid() const {
  return std::all_of(residuals.begin(), residuals.end(),
                     [&](const Residual& r) { return r.value < tol; });
}

double ValidationReport::get(const std::string& name) const {
  for (const auto& r : residuals)
    if (r.name == name) return r.value;
  throw std::out_of_range("no residual named " + name);
}

double pentagon_residual(const FusionData& d) {
  const int r = d.rank();
  auto Fv = [&](int a, int b, int c, int dd, int e, int f, int al, int be, int ga, int de) -> Scalar {
    auto it = d.F.find(FKey{a, b, c, dd, e, f});
    if (it == d.F.end()) return 0.0;
    return it->second.at({std::size_t(al), std::size_t(be), std::size_t(ga), std::size_t(de)});
  };
  double worst = 0;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int dd = 0; dd < r; ++dd)
          for (int u = 0; u < r; ++u)
            for (int e = 0; e < r; ++e) {
              if (!d.n(a, b, e)) continue;
              for (int f = 0; f < r; ++f) {
                if (!d.n(e, c, f) || !d.n(f, dd, u)) continue;
                for (int g = 0; g < r; ++g) {
                  if (!d.n(c, dd, g)) continue;
                  for (int h = 0; h < r; ++h) {
                    if (!d.n(b, g, h) || !d.n(a, h, u)) continue;
                    for (int al = 0; al < d.n(a, b, e); ++al)
                      for (int be = 0; be < d.n(e, c, f); ++be)
                        for (int ga = 0; ga < d.n(f, dd, u); ++ga)
                          for (int de = 0; de < d.n(c, dd, g); ++de)
                            for (int ze = 0; ze < d.n(b, g, h); ++ze)
                              for (int et = 0; et < d.n(a, h, u); ++et) {
                                Scalar lhs = 0;
                                for (int ep = 0; ep < d.n(e, g, u); ++ep)
                                  lhs += Fv(e, c, dd, u, f, g, be, ga, de, ep) *
                                         Fv(a, b, g, u, e, h, al, ep, ze, et);
                                Scalar rhs = 0;
                                for (int k = 0; k < r; ++k) {
                                  if (!d.n(b, c, k) || !d.n(a, k, f) || !d.n(k, dd, h)) continue;
                                  for (int ka = 0; ka < d.n(b, c, k); ++ka)
                                    for (int la = 0; la < d.n(a, k, f); ++la)
                                      for (int mu = 0; mu < d.n(k, dd, h); ++mu)
                                        rhs += Fv(a, b, c, f, e, k, al, be, ka, la) *
                                               Fv(a, k, dd, u, f, h, la, ga, mu, et) *
                                               Fv(b, c, dd, h, k, g, ka, mu, de, ze);
                                }
                                worst = std::max(worst, std::abs(lhs - rhs));
                              }
                  }
                }
              }
            }
  return worst;
}

namespace {

double unit_residual(const FusionData& d) {
  double worst = 0;
  for (const auto& [k, t] : d.F) {
    const auto [a, b, c, dd, e, f] = k;
    if (a != d.unit && b != d.unit && c != d.unit) continue;
    DenseTensor want = unit_admissible(d, k) ? unit_block(d, k) : DenseTensor(t.shape());
    worst = std::max(worst, (t - want).max_abs());
  }
  return worst;
}

}  // namespace

ValidationReport validate(const FusionData& data, double tol) {
  ValidationReport rep;
  rep.tol = tol;
  FusionData d = data;
  d.complete_and_check();
  rep.residuals.push_back({"pentagon", pentagon_residual(d)});
  rep.residuals.push_back({"unit", unit_residual(d)});

  Category cat(d);
  const int r = d.rank();
  double yank = 0, sph = 0, piv = 0, rot = 0;
  for (int a = 0; a < r; ++a) {
    const int ab = cat.dual(a);
    auto z1 = cat.compose(cat.pad({a}, cat.ev(a), {}), cat.pad({}, cat.coev(a), {a}));
    auto z2 = cat.compose(cat.pad({}, cat.ev(a), {ab}), cat.pad({ab}, cat.coev(a), {}));
    auto z3 = cat.compose(cat.pad({}, cat.ev_r(a), {a}), cat.pad({a}, cat.coev_r(a), {}));
    auto z4 = cat.compose(cat.pad({ab}, cat.ev_r(a), {}), cat.pad({}, cat.coev_r(a), {ab}));
    yank = std::max({yank, (z1 - cat.identity({a})).max_abs(), (z2 - cat.identity({ab})).max_abs(),
                     (z3 - cat.identity({a})).max_abs(), (z4 - cat.identity({ab})).max_abs()});
    Scalar right = cat.as_scalar(cat.compose(cat.ev_r(a), cat.coev(a)));
    Scalar left = cat.as_scalar(cat.compose(cat.ev(a), cat.coev_r(a)));
    if (d.spherical) sph = std::max(sph, std::abs(right - left));
    piv = std::max(piv, std::abs(d.pivotal[std::size_t(a)] * d.pivotal[std::size_t(ab)] - 1.0));
  }
  // 2pi rotation of every trivalent basis vertex
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        if (!d.n(a, b, c)) continue;
        SWord w{{a, 1}, {b, 1}, {c, -1}};
        Word objs = cat.objects(w);
        const std::size_t dim = cat.hom_dim({}, objs);
        for (std::size_t k = 0; k < dim; ++k) {
          Morphism v = cat.basis_element({}, objs, k);
          Morphism x = v;
          SWord cur = w;
          for (int step = 0; step < 3; ++step) {
            x = cat.rotate(cur, x);
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
          }
          rot = std::max(rot, (x - v).max_abs());
        }
      }
  rep.residuals.push_back({"yanking", yank});
  rep.residuals.push_back({"sphericality", sph});
  rep.residuals.push_back({"pivotal", piv});
  rep.residuals.push_back({"rotation", rot});
  return rep;
}

std::size_t hom_dim(const FusionData& data, const Word& source, const Word& target) {
  const int r = data.rank();
  auto mult = [&](const Word& w) {
    std::vector<std::size_t> m(static_cast<std::size_t>(r), 0);
    m[static_cast<std::size_t>(data.unit)] = 1;
    for (int x : w) {
      data.check_label(x);
      std::vector<std::size_t> nm(static_cast<std::size_t>(r), 0);
      for (int e = 0; e < r; ++e)
        for (int u = 0; u < r; ++u)
          nm[static_cast<std::size_t>(u)] += m[static_cast<std::size_t>(e)] * std::size_t(data.n(e, x, u));
      m = nm;
    }
    return m;
  };
  auto ms = mult(source), mt = mult(target);
  std::size_t d = 0;
  for (int s = 0; s < r; ++s) d += ms[static_cast<std::size_t>(s)] * mt[static_cast<std::size_t>(s)];
  return d;
}

Scalar quantum_dimension(const Category& cat, int a) {
  cat.data().check_label(a);
  return cat.as_scalar(cat.compose(cat.ev_r(a), cat.coev(a)));
}

}  // namespace sn
