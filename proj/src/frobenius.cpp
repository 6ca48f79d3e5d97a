#include "sn/frobenius.hpp"

#include <cmath>
#include <random>

#include "sn/io.hpp"

namespace sn {

namespace {

using Chain = std::vector<SumMorphism>;

SumMorphism id(const Category& cat, const Obj& x) { return sum_identity(cat, x); }
SumMorphism comp(const Category& cat, const Chain& c) { return sum_compose(cat, c); }
SumMorphism tens(const Category& cat, const Chain& c) { return sum_tensor(cat, c); }

void require_type(const SumMorphism& m, const Obj& src, const Obj& tgt, const std::string& what) {
  if (m.src != src || m.tgt != tgt) throw DimensionError(what + " has the wrong source or target");
}

// Solves L(x) = target for x in Hom(src, tgt) in the least-squares sense;
// returns the solution and the residual.
template <class F>
std::pair<SumMorphism, double> solve_linear(const Category& cat, const Obj& src, const Obj& tgt,
                                            const SumMorphism& target, F&& f) {
  const Eigen::MatrixXcd m = linear_map_matrix(cat, src, tgt, f);
  const Eigen::VectorXcd b = to_vector(target);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(m.cols());
  if (m.size()) x = m.completeOrthogonalDecomposition().solve(b);
  const SumMorphism sol = from_vector(cat, src, tgt, x);
  return {sol, (f(sol) - target).max_abs()};
}

std::size_t numeric_rank(const Eigen::MatrixXcd& m, double cut) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > cut) ++r;
  return r;
}

}  // namespace

FrobeniusAlgebra make_algebra(const Category& cat, std::string name, Obj object, SumMorphism mult,
                              SumMorphism unit, std::optional<SumMorphism> counit) {
  FrobeniusAlgebra a;
  a.name = std::move(name);
  a.object = std::move(object);
  require_type(mult, obj_tensor(a.object, a.object), a.object, "multiplication");
  require_type(unit, unit_obj(), a.object, "unit");
  a.mult = std::move(mult);
  a.unit = std::move(unit);
  const Obj& x = a.object;
  const Obj xd = obj_dual(cat, x);
  if (counit) {
    require_type(*counit, x, unit_obj(), "counit");
    a.counit = *counit;
    a.counit_supplied = true;
  } else {
    a.counit = comp(cat, {ev_r_obj(cat, x), tens(cat, {a.mult, id(cat, xd)}), tens(cat, {id(cat, x), coev_obj(cat, x)})});
  }
  const SumMorphism pairing = sum_compose(cat, a.counit, a.mult);
  auto [copair, res] = solve_linear(cat, unit_obj(), obj_tensor(x, x), id(cat, x), [&](const SumMorphism& c) {
    return comp(cat, {tens(cat, {pairing, id(cat, x)}), tens(cat, {id(cat, x), c})});
  });
  if (res > 1e-8) throw NondegeneracyError("pairing eps o m of " + a.name + " is degenerate");
  a.comult = comp(cat, {tens(cat, {a.mult, id(cat, x)}), tens(cat, {id(cat, x), copair})});
  return a;
}

AlgebraPtr trivial_algebra(const Category& cat) {
  const Obj one = unit_obj();
  return std::make_shared<FrobeniusAlgebra>(
      make_algebra(cat, "1", one, id(cat, one), id(cat, one)));
}

AlgebraPtr group_algebra(const Category& cat, const std::string& name) {
  std::vector<int> g;
  for (int a = 0; a < cat.rank(); ++a) {
    int total = 0;
    for (int c = 0; c < cat.rank(); ++c) total += cat.n(a, cat.dual(a), c);
    if (total == 1) g.push_back(a);
  }
  Obj x;
  for (int a : g) x.push_back({a});
  SumMorphism m = sum_zero(cat, obj_tensor(x, x), x);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      for (std::size_t k = 0; k < g.size(); ++k)
        if (cat.n(g[i], g[j], g[k]) == 1) m.set_part(cat, k, i * g.size() + j, cat.fuse_vertex(g[i], g[j], g[k], 0));
  SumMorphism u = sum_zero(cat, unit_obj(), x);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g[k] == cat.unit()) {
      Morphism e = cat.zero({}, {cat.unit()});
      e.blocks[static_cast<std::size_t>(cat.unit())](0, 0) = 1.0;
      u.set_part(cat, k, 0, e);
    }
  return std::make_shared<FrobeniusAlgebra>(make_algebra(cat, name, x, m, u));
}

std::vector<AlgebraPtr> parse_algebras(const Category& cat, const nlohmann::json& j) {
  std::vector<AlgebraPtr> out;
  if (j.is_null()) return out;
  const FusionData& d = cat.data();
  try {
    for (const auto& blk : j) {
      Obj x;
      for (const auto& s : blk.at("object")) {
        if (s.is_string())
          x.push_back({d.label(s.get<std::string>())});
        else
          x.push_back(d.word(s.get<std::vector<std::string>>()));
      }
      auto read_part = [&](SumMorphism& m, std::size_t i, std::size_t jj, const nlohmann::json& data) {
        std::vector<Scalar> v;
        for (const auto& e : data) v.push_back(parse_scalar(e));
        const Word& s = m.src.at(jj);
        const Word& t = m.tgt.at(i);
        m.set_part(cat, i, jj, cat.from_flat(s, t, DenseTensor({v.size()}, v)));
      };
      SumMorphism m = sum_zero(cat, obj_tensor(x, x), x);
      for (const auto& e : blk.at("mult")) {
        const auto in = e.at("in").get<std::vector<std::size_t>>();
        if (in.size() != 2 || in[0] >= x.size() || in[1] >= x.size()) throw SchemaError("mult input out of range");
        read_part(m, e.at("out").get<std::size_t>(), in[0] * x.size() + in[1], e.at("data"));
      }
      SumMorphism u = sum_zero(cat, unit_obj(), x);
      for (const auto& e : blk.at("unit")) read_part(u, e.at("out").get<std::size_t>(), 0, e.at("data"));
      std::optional<SumMorphism> eps;
      if (blk.contains("counit")) {
        SumMorphism c = sum_zero(cat, x, unit_obj());
        for (const auto& e : blk["counit"]) read_part(c, 0, e.at("in").get<std::size_t>(), e.at("data"));
        eps = c;
      }
      out.push_back(std::make_shared<FrobeniusAlgebra>(
          make_algebra(cat, blk.value("name", std::string("A")), x, m, u, eps)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("frobenius algebra block: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw SchemaError(std::string("frobenius algebra block: ") + e.what());
  } catch (const DimensionError& e) {
    throw SchemaError(std::string("frobenius algebra block: ") + e.what());
  }
  return out;
}

SumMorphism delta_eta(const Category& cat, const FrobeniusAlgebra& a) {
  return sum_compose(cat, a.comult, a.unit);
}

ValidationReport validate_frobenius(const Category& cat, const FrobeniusAlgebra& a, double tol) {
  ValidationReport r;
  r.tol = tol;
  const Obj& x = a.object;
  const SumMorphism i = id(cat, x);
  const SumMorphism& m = a.mult;
  const SumMorphism& d = a.comult;
  auto res = [&](const std::string& n, double v) { r.residuals.push_back({n, v}); };

  res("associativity",
      (comp(cat, {m, tens(cat, {m, i})}) - comp(cat, {m, tens(cat, {i, m})})).max_abs());
  res("unit", std::max((comp(cat, {m, tens(cat, {a.unit, i})}) - i).max_abs(),
                       (comp(cat, {m, tens(cat, {i, a.unit})}) - i).max_abs()));
  res("counit", std::max((comp(cat, {tens(cat, {a.counit, i}), d}) - i).max_abs(),
                         (comp(cat, {tens(cat, {i, a.counit}), d}) - i).max_abs()));
  const SumMorphism dm = comp(cat, {d, m});
  res("frobenius", std::max((comp(cat, {tens(cat, {m, i}), tens(cat, {i, d})}) - dm).max_abs(),
                            (comp(cat, {tens(cat, {i, m}), tens(cat, {d, i})}) - dm).max_abs()));
  res("special", (comp(cat, {m, d}) - i).max_abs());
  const Obj xd = obj_dual(cat, x);
  const SumMorphism kappa = comp(cat, {a.counit, m});
  const SumMorphism phi1 = comp(cat, {tens(cat, {kappa, id(cat, xd)}), tens(cat, {i, coev_obj(cat, x)})});
  const SumMorphism phi2 = comp(cat, {tens(cat, {id(cat, xd), kappa}), tens(cat, {coev_r_obj(cat, x), i})});
  res("symmetric", (phi1 - phi2).max_abs());
  auto ap = std::make_shared<FrobeniusAlgebra>(a);
  const Bimodule reg = regular_bimodule(cat, ap);
  const std::size_t c = bimodule_hom_dim(cat, reg, reg);
  r.info.push_back({"bimodule_endomorphisms", static_cast<double>(c)});
  if (c != 1) r.warnings.push_back(a.name + " is not simple: dim End_AA(A) = " + std::to_string(c));
  return r;
}

// ---- bimodules ----

Bimodule regular_bimodule(const Category& cat, const AlgebraPtr& a) {
  (void)cat;
  return Bimodule{a->name, a->object, a, a, a->mult, a->mult};
}

Bimodule free_bimodule(const Category& cat, const AlgebraPtr& a, const AlgebraPtr& b, const Obj& v) {
  Bimodule x;
  x.name = a->name + "V" + b->name;
  x.object = obj_tensor(obj_tensor(a->object, v), b->object);
  x.left = a;
  x.right = b;
  x.act_l = tens(cat, {a->mult, id(cat, v), id(cat, b->object)});
  x.act_r = tens(cat, {id(cat, a->object), id(cat, v), b->mult});
  return x;
}

Bimodule transport(const Category& cat, const Bimodule& x, const SumMorphism& phi, const SumMorphism& phi_inv) {
  Bimodule y = x;
  y.object = phi.tgt;
  y.act_l = comp(cat, {phi, x.act_l, tens(cat, {id(cat, x.left->object), phi_inv})});
  y.act_r = comp(cat, {phi, x.act_r, tens(cat, {phi_inv, id(cat, x.right->object)})});
  return y;
}

Bimodule dual_bimodule(const Category& cat, const Bimodule& x) {
  Bimodule y;
  y.name = x.name + "^v";
  y.object = obj_dual(cat, x.object);
  y.left = x.right;
  y.right = x.left;
  const SumMorphism ix = id(cat, x.object), iy = id(cat, y.object);
  y.act_r = comp(cat, {tens(cat, {ev_obj(cat, x.object), iy}), tens(cat, {iy, x.act_l, iy}),
                       tens(cat, {iy, id(cat, x.left->object), coev_obj(cat, x.object)})});
  y.act_l = comp(cat, {tens(cat, {iy, ev_r_obj(cat, x.object)}), tens(cat, {iy, x.act_r, iy}),
                       tens(cat, {coev_r_obj(cat, x.object), id(cat, x.right->object), iy})});
  return y;
}

double bimodule_residual(const Category& cat, const Bimodule& x) {
  const SumMorphism i = id(cat, x.object);
  const SumMorphism ia = id(cat, x.left->object), ib = id(cat, x.right->object);
  double r = 0;
  r = std::max(r, (comp(cat, {x.act_l, tens(cat, {x.left->mult, i})}) -
                   comp(cat, {x.act_l, tens(cat, {ia, x.act_l})})).max_abs());
  r = std::max(r, (comp(cat, {x.act_r, tens(cat, {i, x.right->mult})}) -
                   comp(cat, {x.act_r, tens(cat, {x.act_r, ib})})).max_abs());
  r = std::max(r, (comp(cat, {x.act_l, tens(cat, {x.left->unit, i})}) - i).max_abs());
  r = std::max(r, (comp(cat, {x.act_r, tens(cat, {i, x.right->unit})}) - i).max_abs());
  r = std::max(r, (comp(cat, {x.act_r, tens(cat, {x.act_l, ib})}) -
                   comp(cat, {x.act_l, tens(cat, {ia, x.act_r})})).max_abs());
  return r;
}

SumMorphism average_map(const Category& cat, const Bimodule& x, const Bimodule& y, const SumMorphism& f) {
  require_type(f, x.object, y.object, "bimodule map candidate");
  const Obj& a = x.left->object;
  const Obj& b = x.right->object;
  const SumMorphism rf = comp(cat, {y.act_r, tens(cat, {f, id(cat, b)}), tens(cat, {x.act_r, id(cat, b)}),
                                    tens(cat, {id(cat, x.object), delta_eta(cat, *x.right)})});
  return comp(cat, {y.act_l, tens(cat, {id(cat, a), rf}), tens(cat, {id(cat, a), x.act_l}),
                    tens(cat, {delta_eta(cat, *x.left), id(cat, x.object)})});
}

std::size_t bimodule_hom_dim(const Category& cat, const Bimodule& x, const Bimodule& y) {
  const Eigen::MatrixXcd p =
      linear_map_matrix(cat, x.object, y.object, [&](const SumMorphism& f) { return average_map(cat, x, y, f); });
  return numeric_rank(p, 0.5);
}

SumMorphism averaging_idempotent(const Category& cat, const Bimodule& x, const Bimodule& y) {
  if (x.right != y.left) throw AlgebraMismatch("middle algebras of " + x.name + " and " + y.name + " differ");
  return comp(cat, {tens(cat, {x.act_r, y.act_l}),
                    tens(cat, {id(cat, x.object), delta_eta(cat, *x.right), id(cat, y.object)})});
}

TensorOver tensor_over(const Category& cat, const Bimodule& x, const Bimodule& y) {
  if (x.right != y.left) throw AlgebraMismatch("middle algebras of " + x.name + " and " + y.name + " differ");
  TensorOver t;
  const Obj w = obj_tensor(x.object, y.object);
  Obj z;
  if (x.right->trivial()) {
    z = w;
    t.lax = t.oplax = t.idempotent = id(cat, w);
  } else {
    t.idempotent = averaging_idempotent(cat, x, y);
    // At charge u the idempotent is a plain matrix on the stacked tree bases;
    // an orthonormal basis U of its image gives oplax = U, lax = U^* e.
    std::vector<Mat> us;
    for (int u = 0; u < cat.rank(); ++u) {
      const Mat& e = t.idempotent.blocks[static_cast<std::size_t>(u)];
      Mat basis(e.rows(), 0);
      if (e.size()) {
        // rank of an idempotent is its trace
        const auto r = static_cast<Eigen::Index>(std::lround(e.trace().real()));
        if (r > 0) {
          Eigen::ColPivHouseholderQR<Mat> qr(e);
          basis = Mat(qr.householderQ()).leftCols(r);
        }
      }
      for (Eigen::Index k = 0; k < basis.cols(); ++k) z.push_back({u});
      us.push_back(basis);
    }
    t.oplax = sum_zero(cat, z, w);
    t.lax = sum_zero(cat, w, z);
    for (int u = 0; u < cat.rank(); ++u) {
      const auto su = static_cast<std::size_t>(u);
      t.oplax.blocks[su] = us[su];
      t.lax.blocks[su] = us[su].adjoint() * t.idempotent.blocks[su];
    }
  }
  Bimodule& p = t.product;
  p.name = x.name + "*" + y.name;
  p.object = z;
  p.left = x.left;
  p.right = y.right;
  p.act_l = comp(cat, {t.lax, tens(cat, {x.act_l, id(cat, y.object)}), tens(cat, {id(cat, x.left->object), t.oplax})});
  p.act_r = comp(cat, {t.lax, tens(cat, {id(cat, x.object), y.act_r}), tens(cat, {t.oplax, id(cat, y.right->object)})});
  return t;
}

Composite composite(const Category& cat, const std::vector<Bimodule>& fs, const AlgebraPtr& a) {
  if (fs.empty()) {
    if (!a) throw std::invalid_argument("empty composite needs an algebra");
    return Composite{regular_bimodule(cat, a), a->unit, a->counit};
  }
  Composite c{fs[0], id(cat, fs[0].object), id(cat, fs[0].object)};
  for (std::size_t k = 1; k < fs.size(); ++k) {
    const TensorOver t = tensor_over(cat, c.obj, fs[k]);
    const SumMorphism ik = id(cat, fs[k].object);
    c.lax = sum_compose(cat, t.lax, tens(cat, {c.lax, ik}));
    c.oplax = sum_compose(cat, tens(cat, {c.oplax, ik}), t.oplax);
    c.obj = t.product;
  }
  return c;
}

SumMorphism fr_horizontal(const Category& cat, const TensorOver& src, const TensorOver& tgt, const SumMorphism& f,
                          const SumMorphism& g) {
  return comp(cat, {tgt.lax, tens(cat, {f, g}), src.oplax});
}

SumMorphism fr_ev(const Category& cat, const Bimodule& x) {
  const Obj xd = obj_dual(cat, x.object);
  const Obj& b = x.right->object;
  return comp(cat, {tens(cat, {ev_obj(cat, x.object), id(cat, b)}), tens(cat, {id(cat, xd), x.act_r, id(cat, b)}),
                    tens(cat, {id(cat, xd), id(cat, x.object), delta_eta(cat, *x.right)})});
}

SumMorphism fr_coev(const Category& cat, const Bimodule& x) {
  const Obj xd = obj_dual(cat, x.object);
  return comp(cat, {tens(cat, {x.act_l, id(cat, xd)}), tens(cat, {id(cat, x.left->object), coev_obj(cat, x.object)})});
}

SumMorphism fr_ev_r(const Category& cat, const Bimodule& x) {
  const Obj xd = obj_dual(cat, x.object);
  const Obj& a = x.left->object;
  return comp(cat, {tens(cat, {id(cat, a), ev_r_obj(cat, x.object)}), tens(cat, {id(cat, a), x.act_l, id(cat, xd)}),
                    tens(cat, {delta_eta(cat, *x.left), id(cat, x.object), id(cat, xd)})});
}

SumMorphism fr_coev_r(const Category& cat, const Bimodule& x) {
  const Obj xd = obj_dual(cat, x.object);
  return comp(cat, {tens(cat, {id(cat, xd), x.act_r}), tens(cat, {coev_r_obj(cat, x.object), id(cat, x.right->object)})});
}

}  // namespace sn
