#include "sn/worldsheet.hpp"

#include <algorithm>
#include <random>

#include "sn/disk.hpp"

namespace sn {

namespace {

using Chain = std::vector<SumMorphism>;

SumMorphism id(const Category& cat, const Obj& x) { return sum_identity(cat, x); }
SumMorphism comp(const Category& cat, const Chain& c) { return sum_compose(cat, c); }
SumMorphism tens(const Category& cat, const Chain& c) { return sum_tensor(cat, c); }

std::size_t rank_of(const Eigen::MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  lu.setThreshold(tol);
  return static_cast<std::size_t>(lu.rank());
}

std::vector<Slot> slots(const std::vector<Bimodule>& bs) {
  std::vector<Slot> s;
  for (const auto& b : bs) s.push_back(Slot{b, false});
  return s;
}

bool same_bimodule(const Bimodule& x, const Bimodule& y) {
  return x.left == y.left && x.right == y.right && x.object == y.object && (x.act_l - y.act_l).max_abs() < 1e-12 &&
         (x.act_r - y.act_r).max_abs() < 1e-12;
}

bool same_row(const std::vector<Bimodule>& a, const std::vector<Bimodule>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bimodule(a[i], b[i])) return false;
  return true;
}

Obj composite_object(const Category& cat, const std::vector<Bimodule>& lines, const AlgebraPtr& phase) {
  return lines.empty() ? phase->object : composite(cat, lines).obj.object;
}

// Plain object of a row and the splitting onto its composite; an empty row
// is the phase itself with trivial splitting.
struct RowSplit {
  Obj plain;
  SumMorphism lax, oplax;
};
RowSplit row_split(const Category& cat, const std::vector<Bimodule>& lines, const AlgebraPtr& phase) {
  if (lines.empty()) return {phase->object, id(cat, phase->object), id(cat, phase->object)};
  const Composite c = composite(cat, lines);
  return {row_object(lines), c.lax, c.oplax};
}

Obj tensor_objects(const std::vector<Obj>& xs, std::size_t first, std::size_t last) {
  Obj o = unit_obj();
  for (std::size_t i = first; i < last; ++i) o = obj_tensor(o, xs[i]);
  return o;
}

SumMorphism padded(const Category& cat, const std::vector<Obj>& xs, std::size_t first, std::size_t count,
                   const SumMorphism& m) {
  Chain parts;
  if (first > 0) parts.push_back(id(cat, tensor_objects(xs, 0, first)));
  parts.push_back(m);
  if (first + count < xs.size()) parts.push_back(id(cat, tensor_objects(xs, first + count, xs.size())));
  return tens(cat, parts);
}

// Plain-object map of one layer in Fr(C), before splitting onto composites.
SumMorphism fr_plain_layer(const Category& cat, const Frontier& s, const Coupon& c) {
  const std::size_t n = s.lines.size(), pos = std::size_t(c.pos), k = std::size_t(c.inputs);
  const AlgebraPtr l = s.phase(pos);
  const std::vector<Bimodule> ins(s.lines.begin() + c.pos, s.lines.begin() + c.pos + c.inputs);
  SumMorphism lax_in = k ? composite(cat, ins).lax : (n == 0 ? id(cat, l->object) : l->unit);
  SumMorphism core = comp(cat, {c.color, lax_in});
  if (!c.outputs.empty()) core = comp(cat, {composite(cat, c.outputs).oplax, core});
  if (n == 0) return core;

  std::vector<Obj> xs;
  for (const auto& x : s.lines) xs.push_back(x.object);
  if (!c.outputs.empty() || n == k) return padded(cat, xs, pos, k, core);
  // The coupon closes off into the phase, which is absorbed by a neighbor.
  if (pos > 0) {
    const Bimodule& nb = s.lines[pos - 1];
    return padded(cat, xs, pos - 1, k + 1, comp(cat, {nb.act_r, tens(cat, {id(cat, nb.object), core})}));
  }
  const Bimodule& nb = s.lines[pos + k];
  return padded(cat, xs, pos, k + 1, comp(cat, {nb.act_l, tens(cat, {core, id(cat, nb.object)})}));
}

Frontier advance(const Frontier& s, const Coupon& c) {
  Frontier t = s;
  t.lines.erase(t.lines.begin() + c.pos, t.lines.begin() + c.pos + c.inputs);
  t.lines.insert(t.lines.begin() + c.pos, c.outputs.begin(), c.outputs.end());
  return t;
}

// Evaluation of the U-conjugated net with Frobenius graphs, on a row of
// defect lines interleaved with algebra strands in the nontrivial gaps.
class CStack {
public:
  CStack(const Category& cat, const Frontier& bottom, FrobeniusGraph g) : cat_(cat), g_(g), f_(bottom) {
    acc_ = id(cat, row_object(bottom.lines));
    std::vector<SumMorphism> units;
    for (std::size_t i = 0; i <= f_.lines.size(); ++i) {
      const AlgebraPtr a = f_.phase(i);
      if (!a->trivial()) units.push_back(a->unit);
      if (i < f_.lines.size()) units.push_back(id(cat, f_.lines[i].object));
    }
    rebuild_items();
    acc_ = comp(cat, {tens(cat, units), acc_});
    for (std::size_t gap = 0; gap <= f_.lines.size(); ++gap) touch(gap);
  }

  void layer(const Coupon& c) {
    const std::size_t pos = std::size_t(c.pos), k = std::size_t(c.inputs), m = c.outputs.size();
    const FrobFunctor u(cat_, FrobFunctor::Kind::forgetful);
    const std::vector<Bimodule> ins(f_.lines.begin() + c.pos, f_.lines.begin() + c.pos + c.inputs);
    for (std::size_t gap = pos + k - 1; gap > pos && k > 1; --gap) {
      const int t = strand(gap);
      if (t < 0) continue;
      const Bimodule& x = f_.lines[gap - 1];
      apply(std::size_t(t) - 1, 2, x.act_r);
      items_.erase(items_.begin() + t);
    }
    const AlgebraPtr l = f_.phase(pos);
    const Bimodule reg = regular_bimodule(cat_, l);
    if (k == 0) {
      if (l->trivial()) {
        const SumMorphism cc = m ? f_conjugate(u, c.color, {}, slots(c.outputs)) : c.color;
        insert_at(line_item(pos), cc, c.outputs);
      } else {
        const std::size_t t = std::size_t(strand(pos));
        if (m == 0) {
          apply(t, 1, c.color);
        } else {
          const Obj& a = l->object;
          apply(t, 1, comp(cat_, {tens(cat_, {l->comult, id(cat_, a)}), l->comult}));
          items_.insert(items_.begin() + std::ptrdiff_t(t) + 1, 2, Item{true, a});
          apply(t + 1, 1, f_conjugate(u, c.color, {Slot{reg, false}}, slots(c.outputs)));
          items_.erase(items_.begin() + std::ptrdiff_t(t) + 1);
          std::vector<Item> outs;
          for (const auto& y : c.outputs) outs.push_back(Item{false, y.object});
          items_.insert(items_.begin() + std::ptrdiff_t(t) + 1, outs.begin(), outs.end());
        }
      }
    } else {
      const std::size_t first = line_item(pos);
      if (m == 0) {
        const SumMorphism cc = f_conjugate(u, c.color, slots(ins), {Slot{reg, false}});
        apply(first, k, cc);
        items_.erase(items_.begin() + std::ptrdiff_t(first), items_.begin() + std::ptrdiff_t(first + k));
        if (!l->trivial()) {
          items_.insert(items_.begin() + std::ptrdiff_t(first), Item{true, l->object});
          const Obj& a = l->object;
          apply(first - 1, 3, comp(cat_, {l->mult, tens(cat_, {l->mult, id(cat_, a)})}));
          items_.erase(items_.begin() + std::ptrdiff_t(first), items_.begin() + std::ptrdiff_t(first + 2));
        }
      } else {
        apply(first, k, f_conjugate(u, c.color, slots(ins), slots(c.outputs)));
        items_.erase(items_.begin() + std::ptrdiff_t(first), items_.begin() + std::ptrdiff_t(first + k));
        std::vector<Item> outs;
        for (const auto& y : c.outputs) outs.push_back(Item{false, y.object});
        items_.insert(items_.begin() + std::ptrdiff_t(first), outs.begin(), outs.end());
      }
    }
    f_ = advance(f_, c);
    // emit algebra strands into the new gaps between outputs
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const Bimodule& y = f_.lines[pos + j];
      if (y.right->trivial()) continue;
      const std::size_t t = line_item(pos + j);
      apply(t, 1, comp(cat_, {tens(cat_, {y.act_r, id(cat_, y.right->object)}),
                              tens(cat_, {id(cat_, y.object), delta_eta(cat_, *y.right)})}));
      items_.insert(items_.begin() + std::ptrdiff_t(t) + 1, Item{true, y.right->object});
    }
    const std::size_t lo = g_ == FrobeniusGraph::dense ? 0 : pos;
    const std::size_t hi = g_ == FrobeniusGraph::dense ? f_.lines.size() : pos + m;
    for (std::size_t gap = lo; gap <= hi; ++gap) touch(gap);
    if (g_ == FrobeniusGraph::bubbles)
      for (std::size_t gap = pos; gap <= pos + m; ++gap) bubble(gap);
  }

  SumMorphism finish() {
    for (std::size_t gap = f_.lines.size() + 1; gap-- > 0;) {
      const int t = strand(gap);
      if (t < 0) continue;
      apply(std::size_t(t), 1, f_.phase(gap)->counit);
      items_.erase(items_.begin() + t);
    }
    return acc_;
  }

  const Frontier& frontier() const { return f_; }

private:
  struct Item {
    bool algebra;
    Obj object;
  };

  void rebuild_items() {
    items_.clear();
    for (std::size_t i = 0; i <= f_.lines.size(); ++i) {
      const AlgebraPtr a = f_.phase(i);
      if (!a->trivial()) items_.push_back({true, a->object});
      if (i < f_.lines.size()) items_.push_back({false, f_.lines[i].object});
    }
  }

  std::vector<Obj> objects() const {
    std::vector<Obj> xs;
    for (const auto& it : items_) xs.push_back(it.object);
    return xs;
  }

  void apply(std::size_t first, std::size_t count, const SumMorphism& m) {
    acc_ = comp(cat_, {padded(cat_, objects(), first, count, m), acc_});
  }

  void insert_at(std::size_t at, const SumMorphism& m, const std::vector<Bimodule>& outs) {
    acc_ = comp(cat_, {padded(cat_, objects(), at, 0, m), acc_});
    std::vector<Item> xs;
    for (const auto& y : outs) xs.push_back(Item{false, y.object});
    items_.insert(items_.begin() + std::ptrdiff_t(at), xs.begin(), xs.end());
  }

  // Item index of line j, or of the position it would take.
  std::size_t line_item(std::size_t j) const {
    std::size_t seen = 0;
    for (std::size_t t = 0; t < items_.size(); ++t)
      if (!items_[t].algebra) {
        if (seen == j) return t;
        ++seen;
      }
    return items_.size() - (items_.empty() || !items_.back().algebra ? 0 : 1);
  }

  int strand(std::size_t gap) const {
    if (f_.phase(gap)->trivial()) return -1;
    std::size_t seen = 0;
    for (std::size_t t = 0; t < items_.size(); ++t) {
      if (items_[t].algebra && seen == gap) return int(t);
      if (!items_[t].algebra) ++seen;
    }
    throw std::logic_error("missing algebra strand");
  }

  void touch(std::size_t gap) {
    const int s = strand(gap);
    if (s < 0) return;
    const std::size_t t = std::size_t(s);
    const AlgebraPtr a = f_.phase(gap);
    if (gap > 0) {
      const Bimodule& x = f_.lines[gap - 1];
      apply(t - 1, 2, comp(cat_, {tens(cat_, {x.act_r, id(cat_, a->object)}),
                                  tens(cat_, {id(cat_, x.object), a->comult})}));
    }
    if (gap < f_.lines.size()) {
      const Bimodule& y = f_.lines[gap];
      apply(t, 2, comp(cat_, {tens(cat_, {id(cat_, a->object), y.act_l}), tens(cat_, {a->comult, id(cat_, y.object)})}));
    }
  }

  void bubble(std::size_t gap) {
    const int s = strand(gap);
    if (s < 0) return;
    const AlgebraPtr a = f_.phase(gap);
    const SumMorphism loop = comp(cat_, {a->mult, a->comult, a->unit});
    apply(std::size_t(s), 1,
          comp(cat_, {a->mult, tens(cat_, {id(cat_, a->object), loop}), a->mult, a->comult}));
  }

  const Category& cat_;
  FrobeniusGraph g_;
  Frontier f_;
  std::vector<Item> items_;
  SumMorphism acc_;
};

}  // namespace

AlgebraPtr Frontier::phase(std::size_t gap) const {
  if (gap == 0) return left;
  if (gap > lines.size()) throw std::out_of_range("gap outside the frontier");
  return lines[gap - 1].right;
}

Obj row_object(const std::vector<Bimodule>& row) {
  Obj o = unit_obj();
  for (const auto& x : row) o = obj_tensor(o, x.object);
  return o;
}

std::vector<Frontier> frontiers(const Category& cat, const WorldSheet& w) {
  if (!w.left_phase) throw WorldSheetError("world sheet without a phase");
  Frontier f;
  f.left = w.left_phase;
  f.lines = w.bottom;
  f.right = w.bottom.empty() ? w.left_phase : w.bottom.back().right;
  auto check_row = [&](const Frontier& r, const std::string& where) {
    AlgebraPtr p = r.left;
    for (const auto& x : r.lines) {
      if (x.left != p) throw WorldSheetError(where + ": line " + x.name + " does not match the adjacent phase");
      p = x.right;
    }
    if (p != r.right) throw WorldSheetError(where + ": right phase changed");
  };
  check_row(f, "bottom row");
  std::vector<Frontier> out{f};
  for (std::size_t i = 0; i < w.layers.size(); ++i) {
    const Coupon& c = w.layers[i];
    const std::string where = "layer " + std::to_string(i);
    const Frontier& s = out.back();
    if (c.pos < 0 || c.inputs < 0 || std::size_t(c.pos + c.inputs) > s.lines.size())
      throw WorldSheetError(where + ": coupon outside the frontier");
    const AlgebraPtr l = s.phase(std::size_t(c.pos));
    const std::vector<Bimodule> ins(s.lines.begin() + c.pos, s.lines.begin() + c.pos + c.inputs);
    if (c.color.src != composite_object(cat, ins, l) || c.color.tgt != composite_object(cat, c.outputs, l))
      throw WorldSheetError(where + ": color has the wrong source or target");
    const Frontier t = advance(s, c);
    check_row(t, where);
    out.push_back(t);
  }
  return out;
}

std::string validate_world_sheet(const Category& cat, const WorldSheet& w, double tol) {
  try {
    const auto fs = frontiers(cat, w);
    for (std::size_t i = 0; i < w.layers.size(); ++i) {
      const Coupon& c = w.layers[i];
      const Frontier& s = fs[i];
      const AlgebraPtr l = s.phase(std::size_t(c.pos));
      const std::vector<Bimodule> ins(s.lines.begin() + c.pos, s.lines.begin() + c.pos + c.inputs);
      const Bimodule x = ins.empty() ? regular_bimodule(cat, l) : composite(cat, ins).obj;
      const Bimodule y = c.outputs.empty() ? regular_bimodule(cat, l) : composite(cat, c.outputs).obj;
      if ((average_map(cat, x, y, c.color) - c.color).max_abs() > tol * std::max(1.0, c.color.max_abs()))
        return "layer " + std::to_string(i) + ": color is not a bimodule map";
    }
    if (w.circle && (!w.bottom.empty() || w.left_physical || w.right_physical || fs.back().lines.size()))
      return "a physical circle needs empty rows and sides";
    if (w.circle && (!w.circle->left->trivial() || w.circle->right != w.left_phase))
      return "boundary module does not match the phase";
    if (w.left_physical && (!w.left_physical->left->trivial() || w.left_physical->right != w.left_phase))
      return "left boundary module does not match the phase";
    if (w.right_physical && (!w.right_physical->right->trivial() || w.right_physical->left != fs.back().right))
      return "right boundary module does not match the phase";
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

ComplementedWorldSheet complement(const Category& cat, const WorldSheet& w) {
  ComplementedWorldSheet out;
  WorldSheet& n = out.net;
  n = w;
  n.left_physical.reset();
  n.right_physical.reset();
  n.circle.reset();
  if (w.circle) {
    const Bimodule& m = *w.circle;
    const Bimodule md = dual_bimodule(cat, m);
    const AlgebraPtr one = m.left;
    Coupon cup{0, 0, {m, md}, comp(cat, {composite(cat, {m, md}).lax, fr_coev(cat, m)})};
    Coupon cap{0, 2, {}, comp(cat, {fr_ev_r(cat, m), composite(cat, {m, md}).oplax})};
    n.layers.clear();
    n.layers.push_back(cup);
    for (Coupon c : w.layers) {
      c.pos += 1;
      n.layers.push_back(c);
    }
    n.layers.push_back(cap);
    n.left_phase = one;
    out.transparent_cells = 1;
    out.annular_cell = true;
    return out;
  }
  if (w.left_physical) {
    n.left_phase = w.left_physical->left;
    n.bottom.insert(n.bottom.begin(), *w.left_physical);
    for (auto& c : n.layers) c.pos += 1;
    ++out.transparent_cells;
  }
  if (w.right_physical) n.bottom.push_back(*w.right_physical), ++out.transparent_cells;
  return out;
}

SumMorphism fr_evaluate(const Category& cat, const WorldSheet& w0) {
  const WorldSheet w = w0.sewing_only() ? w0 : complement(cat, w0).net;
  const auto fs = frontiers(cat, w);
  RowSplit s = row_split(cat, fs.front().lines, fs.front().left);
  SumMorphism acc = id(cat, composite_object(cat, fs.front().lines, fs.front().left));
  for (std::size_t i = 0; i < w.layers.size(); ++i) {
    const RowSplit t = row_split(cat, fs[i + 1].lines, fs[i + 1].left);
    acc = comp(cat, {t.lax, fr_plain_layer(cat, fs[i], w.layers[i]), s.oplax, acc});
    s = t;
  }
  return acc;
}

const char* to_string(FrobeniusGraph g) {
  switch (g) {
    case FrobeniusGraph::tree: return "tree";
    case FrobeniusGraph::dense: return "dense";
    case FrobeniusGraph::bubbles: return "bubbles";
  }
  return "?";
}

SumMorphism apply_field_idempotent(const Category& cat, const Frontier& bottom, const Frontier& top,
                                   const SumMorphism& f0) {
  const auto& xb = bottom.lines;
  const auto& xt = top.lines;
  std::vector<Obj> ob, ot;
  for (const auto& x : xb) ob.push_back(x.object);
  for (const auto& x : xt) ot.push_back(x.object);
  SumMorphism f = f0;
  for (std::size_t i = 1; i < xb.size(); ++i)
    if (!bottom.phase(i)->trivial())
      f = comp(cat, {f, padded(cat, ob, i - 1, 2, averaging_idempotent(cat, xb[i - 1], xb[i]))});
  for (std::size_t i = 1; i < xt.size(); ++i)
    if (!top.phase(i)->trivial())
      f = comp(cat, {padded(cat, ot, i - 1, 2, averaging_idempotent(cat, xt[i - 1], xt[i])), f});

  const AlgebraPtr l = bottom.left, r = bottom.right;
  auto coact_l = [&](const Bimodule& x) {
    return comp(cat, {tens(cat, {id(cat, x.left->object), x.act_l}), tens(cat, {delta_eta(cat, *x.left), id(cat, x.object)})});
  };
  auto coact_r = [&](const Bimodule& x) {
    return comp(cat, {tens(cat, {x.act_r, id(cat, x.right->object)}), tens(cat, {id(cat, x.object), delta_eta(cat, *x.right)})});
  };
  if (!xb.empty() && !xt.empty()) {
    if (!l->trivial()) {
      const Obj& a = l->object;
      f = comp(cat, {padded(cat, ot, 0, 1, xt.front().act_l), tens(cat, {id(cat, a), f}),
                     tens(cat, {id(cat, a), padded(cat, ob, 0, 1, xb.front().act_l)}),
                     tens(cat, {delta_eta(cat, *l), id(cat, row_object(xb))})});
    }
    if (!r->trivial()) {
      const Obj& a = r->object;
      f = comp(cat, {padded(cat, ot, xt.size() - 1, 1, xt.back().act_r), tens(cat, {f, id(cat, a)}),
                     tens(cat, {padded(cat, ob, xb.size() - 1, 1, xb.back().act_r), id(cat, a)}),
                     tens(cat, {id(cat, row_object(xb)), delta_eta(cat, *r)})});
    }
  } else if (!xt.empty() && !l->trivial()) {
    const Obj& a = l->object;
    SumMorphism g = comp(cat, {tens(cat, {id(cat, a), f, id(cat, a)}), delta_eta(cat, *l)});
    // right end first, then left end
    std::vector<Obj> cur{a};
    cur.insert(cur.end(), ot.begin(), ot.end());
    cur.push_back(a);
    g = comp(cat, {padded(cat, cur, cur.size() - 2, 2, xt.back().act_r), g});
    cur.pop_back();
    f = comp(cat, {padded(cat, cur, 0, 2, xt.front().act_l), g});
  } else if (!xb.empty() && !l->trivial()) {
    const Obj& a = l->object;
    std::vector<Obj> cur = ob;
    SumMorphism g = padded(cat, cur, cur.size() - 1, 1, coact_r(xb.back()));
    cur.push_back(a);
    g = comp(cat, {padded(cat, cur, 0, 1, coact_l(xb.front())), g});
    f = comp(cat, {l->counit, l->mult, tens(cat, {id(cat, a), f, id(cat, a)}), g});
  }
  return f;
}

CorrelatorReport correlator_report(const Category& cat, const WorldSheet& w0, FrobeniusGraph g, bool with_field_dim) {
  const WorldSheet w = w0.sewing_only() ? w0 : complement(cat, w0).net;
  const auto fs = frontiers(cat, w);
  CStack st(cat, fs.front(), g);
  for (const auto& c : w.layers) st.layer(c);
  CorrelatorReport r;
  r.raw = st.finish();
  r.value = apply_field_idempotent(cat, fs.front(), fs.back(), r.raw);
  r.raw_residual = (r.value - r.raw).max_abs();
  if (with_field_dim) {
    const Eigen::MatrixXcd p = linear_map_matrix(cat, r.raw.src, r.raw.tgt, [&](const SumMorphism& f) {
      return apply_field_idempotent(cat, fs.front(), fs.back(), f);
    });
    r.field_dim = rank_of(p, 1e-8);
  }
  return r;
}

SumMorphism correlator_disk(const Category& cat, const WorldSheet& w, FrobeniusGraph g) {
  return correlator_report(cat, w, g).value;
}

UniversalReport universal_correlator_test(const Category& cat, const WorldSheet& w1, const WorldSheet& w2,
                                          FrobeniusGraph g1, FrobeniusGraph g2, double tol) {
  const WorldSheet n1 = w1.sewing_only() ? w1 : complement(cat, w1).net;
  const WorldSheet n2 = w2.sewing_only() ? w2 : complement(cat, w2).net;
  const auto f1 = frontiers(cat, n1), f2 = frontiers(cat, n2);
  if (f1.front().left != f2.front().left || !same_row(f1.front().lines, f2.front().lines) ||
      !same_row(f1.back().lines, f2.back().lines))
    throw BoundaryError("world sheets have different boundary data");
  UniversalReport r;
  const SumMorphism p1 = fr_evaluate(cat, n1), p2 = fr_evaluate(cat, n2);
  const SumMorphism c1 = correlator_disk(cat, n1, g1), c2 = correlator_disk(cat, n2, g2);
  r.fr_distance = (p1 - p2).max_abs();
  r.cor_distance = (c1 - c2).max_abs();
  r.fr_equal = r.fr_distance <= tol * std::max(1.0, p1.max_abs());
  r.cor_equal = r.cor_distance <= tol * std::max(1.0, c1.max_abs());
  return r;
}

WorldSheet contract(const Category& cat, const WorldSheet& w, std::size_t first, std::size_t last) {
  if (!w.sewing_only()) throw WorldSheetError("contract works on complemented world sheets");
  if (first > last || last >= w.layers.size()) throw std::out_of_range("layer range");
  const auto fs = frontiers(cat, w);
  const Coupon& c0 = w.layers[first];
  int l = c0.pos, r = c0.pos + c0.inputs, grow = 0;
  for (std::size_t i = first; i <= last; ++i) {
    const Coupon& c = w.layers[i];
    l = std::min(l, c.pos);
    r = std::max(r, c.pos + c.inputs);
    r += int(c.outputs.size()) - c.inputs;
    grow += int(c.outputs.size()) - c.inputs;
  }
  const int r0 = r - grow;
  const Frontier& s = fs[first];
  const Frontier& t = fs[last + 1];
  WorldSheet sub;
  sub.left_phase = s.phase(std::size_t(l));
  sub.bottom.assign(s.lines.begin() + l, s.lines.begin() + r0);
  for (std::size_t i = first; i <= last; ++i) {
    Coupon c = w.layers[i];
    c.pos -= l;
    sub.layers.push_back(c);
  }
  Coupon merged{l, r0 - l, std::vector<Bimodule>(t.lines.begin() + l, t.lines.begin() + r), fr_evaluate(cat, sub)};
  WorldSheet out = w;
  out.layers.erase(out.layers.begin() + std::ptrdiff_t(first), out.layers.begin() + std::ptrdiff_t(last) + 1);
  out.layers.insert(out.layers.begin() + std::ptrdiff_t(first), merged);
  return out;
}

std::optional<WorldSheet> interchange(const WorldSheet& w, std::size_t i) {
  if (i + 1 >= w.layers.size()) return std::nullopt;
  Coupon a = w.layers[i], b = w.layers[i + 1];
  const int ma = int(a.outputs.size());
  if (b.pos + b.inputs <= a.pos) {
    a.pos += int(b.outputs.size()) - b.inputs;
  } else if (b.pos >= a.pos + ma) {
    b.pos += a.inputs - ma;
  } else {
    return std::nullopt;
  }
  WorldSheet out = w;
  out.layers[i] = b;
  out.layers[i + 1] = a;
  return out;
}

WorldSheet scale_layer(const WorldSheet& w, std::size_t i, Scalar s) {
  WorldSheet out = w;
  out.layers.at(i).color = out.layers.at(i).color * s;
  return out;
}

WorldSheet random_world_sheet(const Category& cat, const std::vector<AlgebraPtr>& phases, unsigned seed,
                              const RandomSheetOptions& opt) {
  if (phases.empty()) throw std::invalid_argument("no phases");
  std::mt19937 rng(seed);
  auto pick = [&](std::size_t n) { return std::size_t(rng() % n); };
  std::vector<std::pair<std::pair<const FrobeniusAlgebra*, const FrobeniusAlgebra*>, std::vector<Bimodule>>> pool;
  auto line = [&](const AlgebraPtr& a, const AlgebraPtr& b) {
    for (auto& [key, xs] : pool)
      if (key.first == a.get() && key.second == b.get()) return xs[pick(xs.size())];
    std::vector<Bimodule> xs;
    for (int k = 0; k < 2; ++k) xs.push_back(random_bimodule(cat, a, b, unsigned(rng()), opt.max_summands));
    pool.push_back({{a.get(), b.get()}, xs});
    return xs[pick(xs.size())];
  };
  auto random_map = [&](const Bimodule& x, const Bimodule& y) {
    for (int tries = 0; tries < 4; ++tries) {
      const SumMorphism f = average_map(cat, x, y, random_sum_morphism(cat, x.object, y.object, unsigned(rng())));
      if (f.max_abs() > 1e-6) return f;
    }
    return sum_zero(cat, x.object, y.object);
  };

  WorldSheet w;
  w.left_phase = phases[pick(phases.size())];
  Frontier f{w.left_phase, w.left_phase, {}};
  const std::size_t nb = pick(std::min<std::size_t>(opt.max_lines, 2) + 1);
  AlgebraPtr p = w.left_phase;
  for (std::size_t i = 0; i < nb; ++i) {
    const AlgebraPtr q = phases[pick(phases.size())];
    f.lines.push_back(line(p, q));
    p = q;
  }
  f.right = p;
  w.bottom = f.lines;
  while (w.layers.size() < opt.layers) {
    const std::size_t n = f.lines.size();
    const std::size_t pos = pick(n + 1);
    const std::size_t k = pick(std::min<std::size_t>(2, n - pos) + 1);
    const std::size_t room = opt.max_lines + k - n;
    const std::size_t m = pick(std::min<std::size_t>(2, room) + 1);
    const AlgebraPtr l = f.phase(pos), r = f.phase(pos + k);
    if (m == 0 && l != r) continue;
    if (m == 0 && k == 0) continue;
    std::vector<Bimodule> outs;
    AlgebraPtr q = l;
    for (std::size_t j = 0; j < m; ++j) {
      const AlgebraPtr nxt = j + 1 == m ? r : phases[pick(phases.size())];
      outs.push_back(line(q, nxt));
      q = nxt;
    }
    const std::vector<Bimodule> ins(f.lines.begin() + std::ptrdiff_t(pos), f.lines.begin() + std::ptrdiff_t(pos + k));
    const Bimodule x = ins.empty() ? regular_bimodule(cat, l) : composite(cat, ins).obj;
    const Bimodule y = outs.empty() ? regular_bimodule(cat, l) : composite(cat, outs).obj;
    Coupon c{int(pos), int(k), outs, random_map(x, y)};
    f = advance(f, c);
    w.layers.push_back(std::move(c));
  }
  return w;
}

namespace {

// The functor with the lines of the sheet as generators when none are given.
FrobFunctor with_generators(const FrobFunctor& f, const std::vector<Frontier>& fs) {
  if (!f.generators().empty()) return f;
  std::vector<Bimodule> gens;
  for (const auto& r : fs)
    for (const auto& x : r.lines)
      if (std::none_of(gens.begin(), gens.end(), [&](const Bimodule& y) { return same_bimodule(x, y); }))
        gens.push_back(x);
  return FrobFunctor(f.category(), f.kind(), gens);
}

}  // namespace

WorldSheet conjugate_stringnet(const FrobFunctor& f0, const WorldSheet& w0, double tol) {
  const WorldSheet w1 = w0.sewing_only() ? w0 : complement(f0.category(), w0).net;
  const FrobFunctor f = with_generators(f0, frontiers(f0.category(), w1));
  const FunctorProperties p = check_functor_properties(f, 3, tol);
  if (!p.rigid || !p.strongly_separable)
    throw CapabilityError("functor " + f.name() +
                          " is not a rigid pseudofunctor; use frobenius_conjugate_stringnet with Frobenius graphs");
  const WorldSheet w = w0.sewing_only() ? w0 : complement(f.category(), w0).net;
  const auto fs = frontiers(f.category(), w);
  WorldSheet out = w;
  for (std::size_t i = 0; i < w.layers.size(); ++i) {
    Coupon& c = out.layers[i];
    const std::vector<Bimodule> ins(fs[i].lines.begin() + c.pos, fs[i].lines.begin() + c.pos + c.inputs);
    if (ins.empty() && c.outputs.empty()) continue;
    std::vector<Slot> src = slots(ins), tgt = slots(c.outputs);
    const Bimodule reg = regular_bimodule(f.category(), fs[i].phase(std::size_t(c.pos)));
    if (src.empty()) src.push_back(Slot{reg, false});
    if (tgt.empty()) tgt.push_back(Slot{reg, false});
    c.color = f_conjugate(f, c.color, src, tgt);
  }
  return out;
}

FrobeniusConjugate frobenius_conjugate_stringnet(const FrobFunctor& f0, const WorldSheet& w0, FrobeniusGraph g,
                                                 double tol) {
  const Category& cat = f0.category();
  const WorldSheet w1 = w0.sewing_only() ? w0 : complement(cat, w0).net;
  const FrobFunctor f = with_generators(f0, frontiers(cat, w1));
  const FunctorProperties p = check_functor_properties(f, 3, tol);
  if (!p.rigid || !p.separable || !p.frobenius)
    throw CapabilityError("functor " + f.name() + " is not rigid, separable and Frobenius");
  const WorldSheet w = w0.sewing_only() ? w0 : complement(cat, w0).net;
  const auto fs = frontiers(cat, w);
  FrobeniusConjugate out;
  if (f.kind() == FrobFunctor::Kind::identity) {
    out.value = fr_evaluate(cat, conjugate_stringnet(f, w, tol));
    const Bimodule x = fs.front().lines.empty() ? regular_bimodule(cat, fs.front().left) : composite(cat, fs.front().lines).obj;
    const Bimodule y = fs.back().lines.empty() ? regular_bimodule(cat, fs.back().left) : composite(cat, fs.back().lines).obj;
    out.idempotent = linear_map_matrix(cat, x.object, y.object, [&](const SumMorphism& m) { return average_map(cat, x, y, m); });
  } else {
    out.value = correlator_disk(cat, w, g);
    out.idempotent = linear_map_matrix(cat, out.value.src, out.value.tgt, [&](const SumMorphism& m) {
      return apply_field_idempotent(cat, fs.front(), fs.back(), m);
    });
  }
  out.dim = rank_of(out.idempotent, 1e-8);
  return out;
}

}  // namespace sn
