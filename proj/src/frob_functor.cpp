#include <random>

#include "sn/frobenius.hpp"

namespace sn {

namespace {

SumMorphism id(const Category& cat, const Obj& x) { return sum_identity(cat, x); }
SumMorphism comp(const Category& cat, const std::vector<SumMorphism>& c) { return sum_compose(cat, c); }
SumMorphism tens(const Category& cat, const std::vector<SumMorphism>& c) { return sum_tensor(cat, c); }

Bimodule pseudo(const Obj& object, const AlgebraPtr& l, const AlgebraPtr& r) {
  Bimodule b;
  b.name = "obj";
  b.object = object;
  b.left = l;
  b.right = r;
  return b;
}

}  // namespace

Obj FrobFunctor::target_tensor(const std::vector<Bimodule>& fs) const {
  return target_bimodule(fs).object;
}

Bimodule FrobFunctor::target_bimodule(const std::vector<Bimodule>& fs) const {
  if (fs.empty()) throw std::invalid_argument("target tensor of an empty list");
  if (kind_ == Kind::identity) return composite(*cat_, fs).obj;
  Obj o = unit_obj();
  for (const auto& f : fs) o = obj_tensor(o, f.object);
  return pseudo(o, fs.front().left, fs.back().right);
}

SumMorphism FrobFunctor::lax(const std::vector<Bimodule>& fs) const {
  const Composite c = composite(*cat_, fs);
  return kind_ == Kind::identity ? id(*cat_, c.obj.object) : c.lax;
}

SumMorphism FrobFunctor::oplax(const std::vector<Bimodule>& fs) const {
  const Composite c = composite(*cat_, fs);
  return kind_ == Kind::identity ? id(*cat_, c.obj.object) : c.oplax;
}

SumMorphism FrobFunctor::lax_unit(const AlgebraPtr& a) const {
  return kind_ == Kind::identity ? id(*cat_, a->object) : a->unit;
}

SumMorphism FrobFunctor::oplax_unit(const AlgebraPtr& a) const {
  return kind_ == Kind::identity ? id(*cat_, a->object) : a->counit;
}

Bimodule FrobFunctor::target_unit(const AlgebraPtr& a) const {
  return kind_ == Kind::identity ? regular_bimodule(*cat_, a) : pseudo(unit_obj(), a, a);
}

SumMorphism FrobFunctor::hor(const Bimodule& x, const Bimodule& x2, const SumMorphism& f, const Bimodule& y,
                             const Bimodule& y2, const SumMorphism& g) const {
  if (kind_ == Kind::forgetful) return sum_tensor(*cat_, f, g);
  return fr_horizontal(*cat_, tensor_over(*cat_, x, y), tensor_over(*cat_, x2, y2), f, g);
}

SumMorphism FrobFunctor::assoc(const Bimodule& x, const Bimodule& y, const Bimodule& w) const {
  const Category& c = *cat_;
  if (kind_ == Kind::forgetful) return id(c, obj_tensor(obj_tensor(x.object, y.object), w.object));
  const TensorOver yw = tensor_over(c, y, w), x_yw = tensor_over(c, x, yw.product);
  const TensorOver xy = tensor_over(c, x, y), xy_w = tensor_over(c, xy.product, w);
  return comp(c, {xy_w.lax, tens(c, {xy.lax, id(c, w.object)}), tens(c, {id(c, x.object), yw.oplax}), x_yw.oplax});
}

SumMorphism FrobFunctor::assoc_inv(const Bimodule& x, const Bimodule& y, const Bimodule& w) const {
  const Category& c = *cat_;
  if (kind_ == Kind::forgetful) return id(c, obj_tensor(obj_tensor(x.object, y.object), w.object));
  const TensorOver yw = tensor_over(c, y, w), x_yw = tensor_over(c, x, yw.product);
  const TensorOver xy = tensor_over(c, x, y), xy_w = tensor_over(c, xy.product, w);
  return comp(c, {x_yw.lax, tens(c, {id(c, x.object), yw.lax}), tens(c, {xy.oplax, id(c, w.object)}), xy_w.oplax});
}

SumMorphism FrobFunctor::unitor_r(const Bimodule& x) const {
  if (kind_ == Kind::forgetful) return id(*cat_, x.object);
  return sum_compose(*cat_, x.act_r, tensor_over(*cat_, x, regular_bimodule(*cat_, x.right)).oplax);
}

SumMorphism FrobFunctor::unitor_r_inv(const Bimodule& x) const {
  if (kind_ == Kind::forgetful) return id(*cat_, x.object);
  return sum_compose(*cat_, tensor_over(*cat_, x, regular_bimodule(*cat_, x.right)).lax,
                     sum_tensor(*cat_, id(*cat_, x.object), x.right->unit));
}

SumMorphism FrobFunctor::target_ev(const Bimodule& x) const {
  if (kind_ == Kind::forgetful) return ev_obj(*cat_, x.object);
  return sum_compose(*cat_, fr_ev(*cat_, x), tensor_over(*cat_, dual_bimodule(*cat_, x), x).oplax);
}

SumMorphism FrobFunctor::target_coev(const Bimodule& x) const {
  if (kind_ == Kind::forgetful) return coev_obj(*cat_, x.object);
  return sum_compose(*cat_, tensor_over(*cat_, x, dual_bimodule(*cat_, x)).lax, fr_coev(*cat_, x));
}

SumMorphism FrobFunctor::target_ev_r(const Bimodule& x) const {
  if (kind_ == Kind::forgetful) return ev_r_obj(*cat_, x.object);
  return sum_compose(*cat_, fr_ev_r(*cat_, x), tensor_over(*cat_, x, dual_bimodule(*cat_, x)).oplax);
}

SumMorphism FrobFunctor::target_coev_r(const Bimodule& x) const {
  if (kind_ == Kind::forgetful) return coev_r_obj(*cat_, x.object);
  return sum_compose(*cat_, tensor_over(*cat_, dual_bimodule(*cat_, x), x).lax, fr_coev_r(*cat_, x));
}

SumMorphism f_conjugate(const FrobFunctor& f, const SumMorphism& alpha, const std::vector<Slot>& src,
                        const std::vector<Slot>& tgt) {
  const Category& cat = f.category();
  if (src.empty() && tgt.empty()) throw DimensionError("conjugation needs a nonempty signature");
  const AlgebraPtr a = src.empty() ? tgt.front().bimodule.left : src.front().bimodule.left;
  std::vector<Bimodule> fs, gs;
  for (const auto& s : src) fs.push_back(s.bimodule);
  for (const auto& s : tgt) gs.push_back(s.bimodule);
  const Obj zs = fs.empty() ? a->object : composite(cat, fs).obj.object;
  const Obj zt = gs.empty() ? a->object : composite(cat, gs).obj.object;
  if (alpha.src != zs || alpha.tgt != zt) throw DimensionError("signature does not match the 2-morphism");
  if (f.kind() == FrobFunctor::Kind::identity) return alpha;

  const SumMorphism up = fs.empty() ? f.lax_unit(a) : f.lax(fs);
  const SumMorphism down = gs.empty() ? f.oplax_unit(a) : f.oplax(gs);
  SumMorphism core = sum_compose(cat, down, sum_compose(cat, alpha, up));

  auto unit_slot = [&](const Slot& s) {
    if (s.bimodule.left != s.bimodule.right || s.bimodule.object != s.bimodule.left->object)
      throw DimensionError("trivial slot must carry an identity 1-morphism");
  };
  bool any = false;
  std::vector<SumMorphism> ins, outs;
  for (const auto& s : src) {
    if (s.trivial) unit_slot(s), any = true;
    ins.push_back(s.trivial ? f.lax_unit(s.bimodule.left) : id(cat, s.bimodule.object));
  }
  for (const auto& s : tgt) {
    if (s.trivial) unit_slot(s), any = true;
    outs.push_back(s.trivial ? f.oplax_unit(s.bimodule.left) : id(cat, s.bimodule.object));
  }
  if (!any) return core;
  if (!ins.empty()) core = sum_compose(cat, core, tens(cat, ins));
  if (!outs.empty()) core = sum_compose(cat, tens(cat, outs), core);
  return core;
}

FunctorProperties check_functor_properties(const FrobFunctor& f, std::size_t cap, double tol) {
  const Category& cat = f.category();
  FunctorProperties p;
  std::vector<Bimodule> gens(f.generators().begin(),
                             f.generators().begin() + static_cast<std::ptrdiff_t>(std::min(cap, f.generators().size())));
  const FrobFunctor g(cat, FrobFunctor::Kind::identity);
  auto upd = [](double& r, const SumMorphism& a, const SumMorphism& b) { r = std::max(r, (a - b).max_abs()); };

  std::vector<AlgebraPtr> algebras;
  for (const auto& x : gens)
    for (const auto& a : {x.left, x.right})
      if (std::find(algebras.begin(), algebras.end(), a) == algebras.end()) algebras.push_back(a);
  for (const auto& a : algebras) {
    const SumMorphism one = id(cat, unit_obj());
    if (f.kind() == FrobFunctor::Kind::forgetful) {
      upd(p.strongly_separable_residual, sum_compose(cat, f.oplax_unit(a), f.lax_unit(a)), one);
      upd(p.strongly_separable_residual, sum_compose(cat, f.lax_unit(a), f.oplax_unit(a)), id(cat, a->object));
    } else {
      upd(p.strongly_separable_residual, sum_compose(cat, f.oplax_unit(a), f.lax_unit(a)), id(cat, a->object));
    }
  }

  for (const auto& x : gens) {
    const Bimodule xd = dual_bimodule(cat, x);
    const Composite dx = composite(cat, {xd, x}), xdx = composite(cat, {x, xd});
    upd(p.rigid_residual, comp(cat, {f.oplax_unit(x.right), fr_ev(cat, x), dx.oplax, f.lax({xd, x})}), f.target_ev(x));
    upd(p.rigid_residual, comp(cat, {f.oplax({x, xd}), xdx.lax, fr_coev(cat, x), f.lax_unit(x.left)}),
        f.target_coev(x));
    upd(p.rigid_residual, comp(cat, {f.oplax_unit(x.left), fr_ev_r(cat, x), xdx.oplax, f.lax({x, xd})}),
        f.target_ev_r(x));
    upd(p.rigid_residual, comp(cat, {f.oplax({xd, x}), dx.lax, fr_coev_r(cat, x), f.lax_unit(x.right)}),
        f.target_coev_r(x));
  }

  for (const auto& x : gens)
    for (const auto& y : gens) {
      if (x.right != y.left) continue;
      ++p.pairs;
      const Obj z = composite(cat, {x, y}).obj.object;
      upd(p.separable_residual, sum_compose(cat, f.lax({x, y}), f.oplax({x, y})), id(cat, z));
      upd(p.strongly_separable_residual, sum_compose(cat, f.oplax({x, y}), f.lax({x, y})),
          id(cat, f.target_tensor({x, y})));
      for (const auto& w : gens) {
        if (y.right != w.left || p.triples >= cap * cap * cap) continue;
        ++p.triples;
        const Bimodule xy = composite(cat, {x, y}).obj, yw = composite(cat, {y, w}).obj;
        const Bimodule txy = f.target_bimodule({x, y}), tyw = f.target_bimodule({y, w});
        const SumMorphism ix = id(cat, x.object), iw = id(cat, w.object);
        const SumMorphism lhs1 = comp(cat, {f.hor(txy, xy, f.lax({x, y}), w, w, iw), f.assoc(x, y, w),
                                            f.hor(x, x, ix, yw, tyw, f.oplax({y, w}))});
        const SumMorphism rhs1 = comp(cat, {f.oplax({xy, w}), g.assoc(x, y, w), f.lax({x, yw})});
        upd(p.frobenius_residual, lhs1, rhs1);
        const SumMorphism lhs2 = comp(cat, {f.hor(x, x, ix, tyw, yw, f.lax({y, w})), f.assoc_inv(x, y, w),
                                            f.hor(xy, txy, f.oplax({x, y}), w, w, iw)});
        const SumMorphism rhs2 = comp(cat, {f.oplax({x, yw}), g.assoc_inv(x, y, w), f.lax({xy, w})});
        upd(p.frobenius_residual, lhs2, rhs2);
      }
    }
  p.rigid = p.rigid_residual < tol;
  p.separable = p.separable_residual < tol;
  p.frobenius = p.frobenius_residual < tol;
  p.strongly_separable = p.strongly_separable_residual < tol;
  return p;
}

SumMorphism random_sum_morphism(const Category& cat, const Obj& src, const Obj& tgt, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  SumMorphism m = sum_zero(cat, src, tgt);
  for (auto& b : m.blocks)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = Scalar(nd(rng), nd(rng));
  return m;
}

Bimodule random_bimodule(const Category& cat, const AlgebraPtr& a, const AlgebraPtr& b, unsigned seed,
                         std::size_t max_summands) {
  std::mt19937 rng(seed);
  const std::size_t n = 1 + rng() % std::max<std::size_t>(1, max_summands);
  Obj v;
  for (std::size_t k = 0; k < n; ++k) {
    const int len = static_cast<int>(rng() % 2);
    Word w;
    for (int l = 0; l < len; ++l) w.push_back(static_cast<int>(rng() % static_cast<unsigned>(cat.rank())));
    v.push_back(w);
  }
  Bimodule x = free_bimodule(cat, a, b, v);
  SumMorphism phi = id(cat, x.object) + random_sum_morphism(cat, x.object, x.object, rng()) * Scalar(0.3);
  SumMorphism inv = phi;
  for (auto& blk : inv.blocks)
    if (blk.size()) blk = Eigen::MatrixXcd(blk).inverse();
  Bimodule y = transport(cat, x, phi, inv);
  y.name = "X" + std::to_string(seed % 1000);
  return y;
}

namespace {

SumMorphism random_bimodule_map(const Category& cat, const Bimodule& x, const Bimodule& y, std::mt19937& rng) {
  return average_map(cat, x, y, random_sum_morphism(cat, x.object, y.object, rng()));
}

// Right partial trace over y of a : x y -> z y, in the target of f.
SumMorphism target_trace(const FrobFunctor& f, const SumMorphism& a, const Bimodule& x, const Bimodule& y,
                         const Bimodule& z) {
  const Category& cat = f.category();
  const Bimodule yd = dual_bimodule(cat, y);
  const Bimodule u = f.target_unit(x.right);
  const Bimodule tyy = f.target_bimodule({y, yd});
  return comp(cat, {f.unitor_r(z), f.hor(z, z, id(cat, z.object), tyy, u, f.target_ev_r(y)),
                    f.assoc_inv(z, y, yd),
                    f.hor(f.target_bimodule({x, y}), f.target_bimodule({z, y}), a, yd, yd, id(cat, yd.object)),
                    f.assoc(x, y, yd), f.hor(x, x, id(cat, x.object), u, tyy, f.target_coev(y)),
                    f.unitor_r_inv(x)});
}

std::vector<Slot> slots(const std::vector<Bimodule>& bs) {
  std::vector<Slot> s;
  for (const auto& b : bs) s.push_back({b, false});
  return s;
}

}  // namespace

NaturalityReport conjugation_naturality_suite(const FrobFunctor& f, const AlgebraPtr& a, std::size_t instances,
                                              unsigned seed) {
  const Category& cat = f.category();
  const FrobFunctor g(cat, FrobFunctor::Kind::identity);
  std::mt19937 rng(seed);
  NaturalityReport r;
  auto rb = [&] { return random_bimodule(cat, a, a, rng(), 1); };
  for (std::size_t k = 0; k < instances; ++k) {
    if (k % 2 == 0) {
      ++r.operadic;
      const Bimodule x = rb(), y = rb(), v = rb(), w = rb(), t = rb();
      const Bimodule xy = composite(cat, {x, y}).obj;
      const bool first = rng() % 2 == 0;
      const SumMorphism alpha = random_bimodule_map(cat, xy, w, rng);
      const Bimodule wv = composite(cat, first ? std::vector<Bimodule>{w, v} : std::vector<Bimodule>{v, w}).obj;
      const SumMorphism beta = random_bimodule_map(cat, wv, t, rng);
      const SumMorphism iv = id(cat, v.object);
      SumMorphism fr_path, t_path;
      const SumMorphism ca = f_conjugate(f, alpha, slots({x, y}), slots({w}));
      if (first) {
        const SumMorphism gamma = sum_compose(cat, beta, g.hor(xy, w, alpha, v, v, iv));
        fr_path = f_conjugate(f, gamma, slots({x, y, v}), slots({t}));
        const SumMorphism cb = f_conjugate(f, beta, slots({w, v}), slots({t}));
        t_path = sum_compose(cat, cb, f.hor(f.target_bimodule({x, y}), w, ca, v, v, iv));
      } else {
        const SumMorphism gamma = comp(cat, {beta, g.hor(v, v, iv, xy, w, alpha), g.assoc_inv(v, x, y)});
        fr_path = f_conjugate(f, gamma, slots({v, x, y}), slots({t}));
        const SumMorphism cb = f_conjugate(f, beta, slots({v, w}), slots({t}));
        t_path = comp(cat, {cb, f.hor(v, v, iv, f.target_bimodule({x, y}), w, ca), f.assoc_inv(v, x, y)});
      }
      r.operadic_residual = std::max(r.operadic_residual, (fr_path - t_path).max_abs());
    } else {
      ++r.partial_trace;
      const Bimodule x = rb(), y = rb(), z = rb();
      const SumMorphism alpha =
          random_bimodule_map(cat, composite(cat, {x, y}).obj, composite(cat, {z, y}).obj, rng);
      const SumMorphism fr_path = f_conjugate(f, target_trace(g, alpha, x, y, z), slots({x}), slots({z}));
      const SumMorphism t_path = target_trace(f, f_conjugate(f, alpha, slots({x, y}), slots({z, y})), x, y, z);
      r.trace_residual = std::max(r.trace_residual, (fr_path - t_path).max_abs());
    }
  }
  const std::size_t nh = std::max<std::size_t>(1, instances / 4);
  for (std::size_t k = 0; k < nh; ++k) {
    ++r.horizontal;
    const Bimodule x = rb(), x2 = rb(), y = rb(), y2 = rb();
    const SumMorphism alpha = random_bimodule_map(cat, x, x2, rng), beta = random_bimodule_map(cat, y, y2, rng);
    const SumMorphism fr_path = f_conjugate(f, g.hor(x, x2, alpha, y, y2, beta), slots({x, y}), slots({x2, y2}));
    const SumMorphism t_path = f.hor(x, x2, f_conjugate(f, alpha, slots({x}), slots({x2})), y, y2,
                                     f_conjugate(f, beta, slots({y}), slots({y2})));
    const SumMorphism e = sum_compose(cat, f.oplax({x2, y2}), f.lax({x2, y2}));
    r.horizontal_residual = std::max(r.horizontal_residual, (fr_path - t_path).max_abs());
    r.defect_residual = std::max(r.defect_residual, (fr_path - sum_compose(cat, e, t_path)).max_abs());
    r.defect_norm = std::max(r.defect_norm, (e - id(cat, e.src)).max_abs());
  }
  return r;
}

}  // namespace sn
