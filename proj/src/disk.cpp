#include "sn/disk.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace sn {

namespace {

SWord rotated(const SWord& legs, int root) {
  SWord r;
  const int n = static_cast<int>(legs.size());
  for (int j = 0; j < n; ++j) r.push_back(legs[std::size_t((root + j) % n)]);
  return r;
}

SWord slice(const SWord& w, std::size_t a, std::size_t b) { return SWord(w.begin() + long(a), w.begin() + long(b)); }

Morphism empty_state(const Category& cat) { return cat.identity({}); }

Mat bend_matrix(const Category& cat, const SWord& legs, const Polarization& k, const ColorSpace& cs) {
  const std::size_t out = cat.hom_dim({}, cat.objects(rotated(legs, k.root)));
  Mat m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(cs.dim));
  for (std::size_t j = 0; j < cs.dim; ++j) {
    const DenseTensor f = to_state(cat, legs, k, cat.basis_element(cs.source, cs.target, j)).flat();
    for (std::size_t i = 0; i < out; ++i) m(Eigen::Index(i), Eigen::Index(j)) = f.data()[i];
  }
  return m;
}

}  // namespace

ColorSpace color_space(const Category& cat, const SWord& legs, const Polarization& k) {
  const int n = static_cast<int>(legs.size());
  if ((n == 0 && (k.root != 0 || k.outputs != 0)) ||
      (n > 0 && (k.root < 0 || k.root >= n || k.outputs < 0 || k.outputs > n)))
    throw ColorError("polarization does not fit a corolla of valence " + std::to_string(n));
  ColorSpace cs;
  cs.legs = legs;
  cs.pol = k;
  const SWord r = rotated(legs, k.root);
  for (int j = 0; j < k.outputs; ++j) cs.target.push_back(cat.obj(r[std::size_t(j)]));
  for (int j = n - 1; j >= k.outputs; --j) cs.source.push_back(cat.obj(Category::reverse(r[std::size_t(j)])));
  cs.dim = cat.hom_dim(cs.source, cs.target);
  return cs;
}

ColorSpace color_space(const Category& cat, const DiskGraph& g, const Polarization& k) {
  if (!is_polarization(g, k)) throw ColorError("invalid polarization");
  return color_space(cat, g.legs(k.vertex), k);
}

Morphism to_state(const Category& cat, const SWord& legs, const Polarization& k, const Morphism& c) {
  const ColorSpace cs = color_space(cat, legs, k);
  if (c.src != cs.source || c.tgt != cs.target) throw ColorError("color does not lie in the color space");
  const int n = static_cast<int>(legs.size());
  if (n == 0 || k.outputs == n) return c;
  const SWord r = rotated(legs, k.root);
  const std::size_t m = static_cast<std::size_t>(k.outputs);
  Word xs, ls;
  Morphism w = empty_state(cat);
  for (std::size_t j = std::size_t(n); j-- > m;) {
    const SLabel rs = Category::reverse(r[j]);
    w = cat.compose(cat.pad(xs, cat.cup(rs), ls), w);
    xs.push_back(cat.obj(rs));
    ls.insert(ls.begin(), cat.obj(r[j]));
  }
  return cat.compose(cat.pad({}, c, ls), w);
}

Morphism from_state(const Category& cat, const SWord& legs, const Polarization& k, const Morphism& state) {
  const ColorSpace cs = color_space(cat, legs, k);
  const Word all = cat.objects(rotated(legs, k.root));
  if (!state.src.empty() || state.tgt != all) throw ColorError("state does not match the corolla");
  if (legs.empty() || k.outputs == static_cast<int>(legs.size())) return state;
  const Mat b = bend_matrix(cat, legs, k, cs);
  const DenseTensor f = state.flat();
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) rhs(Eigen::Index(i)) = f.data()[i];
  const Eigen::VectorXcd x = b.fullPivLu().solve(rhs);
  std::vector<Scalar> v(cs.dim);
  for (std::size_t i = 0; i < cs.dim; ++i) v[i] = x(Eigen::Index(i));
  return cat.from_flat(cs.source, cs.target, DenseTensor({cs.dim}, v));
}

State rotate_state(const Category& cat, const State& s, int steps) {
  State r = s;
  const int n = static_cast<int>(s.legs.size());
  if (n == 0) return r;
  steps = ((steps % n) + n) % n;
  for (int i = 0; i < steps; ++i) {
    r.value = cat.rotate(r.legs, r.value);
    std::rotate(r.legs.begin(), r.legs.begin() + 1, r.legs.end());
  }
  return r;
}

Morphism change_polarization(const Category& cat, const SWord& legs, const Polarization& k1,
                             const Polarization& k2, const Morphism& c) {
  if (k1 == k2) {
    color_space(cat, legs, k1);
    return c;
  }
  const int n = static_cast<int>(legs.size());
  State s{rotated(legs, k1.root), to_state(cat, legs, k1, c)};
  s = rotate_state(cat, s, n ? (k2.root - k1.root + n) % n : 0);
  return from_state(cat, legs, k2, s.value);
}

Morphism change_polarization(const Category& cat, const DiskGraph& g, const Polarization& k1,
                             const Polarization& k2, const Morphism& c) {
  if (k1.vertex != k2.vertex) throw ColorError("polarizations belong to different vertices");
  return change_polarization(cat, g.legs(k1.vertex), k1, k2, c);
}

State apply_elementary(const Category& cat, const ElementaryMove& m, const std::vector<State>& inputs) {
  auto input = [&](std::size_t i, int rot) {
    if (i >= inputs.size()) throw ColorError("move is missing an input");
    return rotate_state(cat, inputs[i], rot);
  };
  const State A = m.a < 0 ? State{{}, empty_state(cat)} : input(0, m.rot_a);
  const std::size_t la = A.legs.size();
  switch (m.kind) {
    case MoveKind::operadic: {
      const State B = input(1, m.rot_b);
      if (A.legs.empty() || B.legs.empty() || !(B.legs.front() == Category::reverse(A.legs.back())))
        throw ColorError("operadic composition along incompatible legs");
      Morphism t = cat.tensor(A.value, B.value);
      State r;
      r.legs = slice(A.legs, 0, la - 1);
      const SWord rb = slice(B.legs, 1, B.legs.size());
      r.value = cat.compose(cat.pad(cat.objects(r.legs), cat.cap(A.legs.back()), cat.objects(rb)), t);
      r.legs.insert(r.legs.end(), rb.begin(), rb.end());
      return r;
    }
    case MoveKind::partial_trace: {
      if (la < 2 || !(A.legs[la - 1] == Category::reverse(A.legs[la - 2])))
        throw ColorError("partial trace over incompatible legs");
      State r;
      r.legs = slice(A.legs, 0, la - 2);
      r.value = cat.compose(cat.pad(cat.objects(r.legs), cat.cap(A.legs[la - 2]), {}), A.value);
      return r;
    }
    case MoveKind::horizontal: {
      const State B = input(m.a < 0 ? 0 : 1, m.rot_b);
      if (m.pos < 0 || std::size_t(m.pos) > la) throw ColorError("gap index out of range");
      const SWord l = slice(A.legs, 0, std::size_t(m.pos)), rr = slice(A.legs, std::size_t(m.pos), la);
      State r;
      r.value = cat.compose(cat.pad(cat.objects(l), B.value, cat.objects(rr)), A.value);
      r.legs = l;
      r.legs.insert(r.legs.end(), B.legs.begin(), B.legs.end());
      r.legs.insert(r.legs.end(), rr.begin(), rr.end());
      return r;
    }
    case MoveKind::whisker: {
      if (m.pos < 0 || std::size_t(m.pos) > la) throw ColorError("gap index out of range");
      const SWord l = slice(A.legs, 0, std::size_t(m.pos)), rr = slice(A.legs, std::size_t(m.pos), la);
      State r;
      r.value = cat.compose(cat.pad(cat.objects(l), cat.cup(m.strand), cat.objects(rr)), A.value);
      r.legs = l;
      r.legs.push_back(m.strand);
      r.legs.push_back(Category::reverse(m.strand));
      r.legs.insert(r.legs.end(), rr.begin(), rr.end());
      return r;
    }
  }
  throw ColorError("unknown move");
}

namespace {

struct Slot {
  std::vector<int> legs;  // logical order
  int pend = 0;           // rotation still to apply to the stored state
  bool live = true;
};

class Planner {
public:
  explicit Planner(const DiskGraph& g) : g_(g) {}

  Decomposition run() {
    const int H = g_.num_half_edges();
    slot_of_.assign(std::size_t(H), -1);
    for (int v = 0; v < g_.num_vertices; ++v) {
      const int s = new_slot(g_.rotation[std::size_t(v)]);
      d_.vertex_slot.push_back(s);
    }
    // (1) regular edges
    for (auto [h, p] : g_.edges()) {
      if (g_.is_boundary(h) || g_.is_boundary(p)) continue;
      const int A = slot_of_[std::size_t(h)], B = slot_of_[std::size_t(p)];
      if (A == B) continue;
      rotate_to_last(A, h);
      rotate_to_first(B, p);
      std::vector<int> legs(slots_[std::size_t(A)].legs.begin(), slots_[std::size_t(A)].legs.end() - 1);
      legs.insert(legs.end(), slots_[std::size_t(B)].legs.begin() + 1, slots_[std::size_t(B)].legs.end());
      emit(MoveKind::operadic, A, B, legs);
    }
    // (2) loops, innermost first
    const int before = int(slots_.size());
    for (int s0 = 0; s0 < before; ++s0) {
      int s = s0;
      while (slots_[std::size_t(s)].live) {
        const auto& L = slots_[std::size_t(s)].legs;
        const int n = int(L.size());
        int best = -1, best_id = -1;
        for (int i = 0; i < n && n >= 2; ++i) {
          const int h = L[std::size_t(i)], h2 = L[std::size_t((i + 1) % n)];
          if (g_.partner[std::size_t(h)] != h2) continue;
          const int id = std::min(h, h2);
          if (best < 0 || id < best_id) best = i, best_id = id;
        }
        if (best < 0) break;
        rotate_by(s, (best + 2) % n);
        std::vector<int> legs(L.begin(), L.end() - 2);
        s = emit(MoveKind::partial_trace, s, -1, legs);
      }
    }
    bpos_.assign(std::size_t(H), -1);
    for (std::size_t k = 0; k < g_.boundary.size(); ++k) bpos_[std::size_t(g_.boundary[k])] = int(k);
    std::vector<int> closed;
    for (int s = 0; s < int(slots_.size()); ++s) {
      auto& sl = slots_[std::size_t(s)];
      if (!sl.live) continue;
      for (int& h : sl.legs) {
        const int p = g_.partner[std::size_t(h)];
        if (!g_.is_boundary(p)) throw ColorError("graph is not planar: a loop encloses boundary legs");
        h = bpos_[std::size_t(p)];
      }
      if (sl.legs.empty()) closed.push_back(s);
    }
    track_ = false;
    // (3) and (4): assemble along the boundary
    int res = build(0, int(g_.boundary.size()));
    for (int c : closed) res = join(res, c);
    for (const SLabel& c : g_.circles) {
      ElementaryMove w;
      w.kind = MoveKind::whisker;
      w.strand = c;
      const int t = push(w, {0, 1});
      res = join(res, emit(MoveKind::partial_trace, t, -1, {}));
    }
    for (std::size_t s = 0; s < slots_.size(); ++s)
      if (slots_[s].live && int(s) != res) throw ColorError("graph is not planar: unreached component");
    d_.result = res;
    d_.result_rotation = res < 0 ? 0 : slots_[std::size_t(res)].pend;
    d_.num_slots = int(slots_.size());
    return d_;
  }

private:
  int new_slot(std::vector<int> legs) {
    const int id = int(slots_.size());
    for (int h : legs)
      if (track_) slot_of_[std::size_t(h)] = id;
    slots_.push_back({std::move(legs), 0, true});
    return id;
  }

  void rotate_by(int s, int r) {
    auto& sl = slots_[std::size_t(s)];
    const int n = int(sl.legs.size());
    if (!n) return;
    r = ((r % n) + n) % n;
    std::rotate(sl.legs.begin(), sl.legs.begin() + r, sl.legs.end());
    sl.pend = (sl.pend + r) % n;
  }
  int index_of(int s, int h) const {
    const auto& L = slots_[std::size_t(s)].legs;
    auto it = std::find(L.begin(), L.end(), h);
    if (it == L.end()) throw ColorError("internal: leg not found");
    return int(it - L.begin());
  }
  void rotate_to_last(int s, int h) { rotate_by(s, index_of(s, h) + 1); }
  void rotate_to_first(int s, int h) { rotate_by(s, index_of(s, h)); }

  int push(ElementaryMove m, std::vector<int> legs) {
    const int out = new_slot(std::move(legs));
    m.out = out;
    if (m.a >= 0) {
      m.rot_a = slots_[std::size_t(m.a)].pend;
      slots_[std::size_t(m.a)].live = false;
    }
    if (m.b >= 0) {
      m.rot_b = slots_[std::size_t(m.b)].pend;
      slots_[std::size_t(m.b)].live = false;
    }
    d_.moves.push_back(m);
    return out;
  }

  int emit(MoveKind k, int a, int b, std::vector<int> legs) {
    ElementaryMove m;
    m.kind = k;
    m.a = a;
    m.b = b;
    return push(m, std::move(legs));
  }

  int join(int left, int right, int pos = -1) {
    if (left < 0) return right;
    if (right < 0) return left;
    const auto& L = slots_[std::size_t(left)].legs;
    const auto& R = slots_[std::size_t(right)].legs;
    if (pos < 0) pos = int(L.size());
    std::vector<int> legs(L.begin(), L.begin() + pos);
    legs.insert(legs.end(), R.begin(), R.end());
    legs.insert(legs.end(), L.begin() + pos, L.end());
    ElementaryMove m;
    m.kind = MoveKind::horizontal;
    m.a = left;
    m.b = right;
    m.pos = pos;
    return push(m, std::move(legs));
  }

  int build(int lo, int hi) {
    int res = -1;
    int i = lo;
    while (i < hi) {
      const int b = g_.boundary[std::size_t(i)];
      const int p = g_.partner[std::size_t(b)];
      int piece;
      if (g_.is_boundary(p)) {
        const int j = bpos_[std::size_t(p)];
        if (j <= i || j >= hi) throw ColorError("graph is not planar: crossing through-strand");
        const SLabel s = Category::reverse(g_.label[std::size_t(b)]);
        const int inner = build(i + 1, j);
        ElementaryMove w;
        w.kind = MoveKind::whisker;
        w.strand = s;
        if (inner < 0 && res >= 0) {
          w.a = res;
          w.pos = int(slots_[std::size_t(res)].legs.size());
          std::vector<int> legs = slots_[std::size_t(res)].legs;
          legs.push_back(i);
          legs.push_back(j);
          res = push(w, std::move(legs));
          i = j + 1;
          continue;
        }
        piece = push(w, {i, j});
        if (inner >= 0) piece = join(piece, inner, 1);
        i = j + 1;
      } else {
        const int s = slot_of_[std::size_t(p)];
        rotate_to_first(s, i);
        const std::vector<int> q = slots_[std::size_t(s)].legs;
        for (std::size_t k = 1; k < q.size(); ++k)
          if (q[k] <= q[k - 1] || q[k] >= hi) throw ColorError("graph is not planar: leg order disagrees with boundary");
        piece = s;
        for (std::size_t k = q.size() - 1; k-- > 0;) {
          const int inner = build(q[k] + 1, q[k + 1]);
          if (inner >= 0) piece = join(piece, inner, int(k) + 1);
        }
        i = q.back() + 1;
      }
      res = join(res, piece);
    }
    return res;
  }

  const DiskGraph& g_;
  Decomposition d_;
  std::vector<Slot> slots_;
  std::vector<int> slot_of_, bpos_;
  bool track_ = true;  // legs are half-edges until assembly, boundary positions after
};

}  // namespace

Decomposition decompose(const DiskGraph& g) {
  const GraphReport rep = validate_graph(g);
  if (!rep.valid()) throw ColorError("invalid graph: " + rep.errors.front());
  return Planner(g).run();
}

Morphism replay(const Category& cat, const DiskGraph& g, const Decomposition& d) {
  std::vector<std::optional<State>> slots(std::size_t(d.num_slots));
  for (int v = 0; v < g.num_vertices; ++v) {
    const auto& c = g.colors[std::size_t(v)];
    if (!c) throw ColorError("vertex " + std::to_string(v) + " is not colored");
    const SWord legs = g.legs(v);
    State s{rotated(legs, c->pol.root), to_state(cat, legs, c->pol, c->value)};
    const int n = int(legs.size());
    slots[std::size_t(d.vertex_slot[std::size_t(v)])] = rotate_state(cat, s, n ? (n - c->pol.root) % n : 0);
  }
  auto take = [&](int i) {
    if (i < 0) return State{{}, empty_state(cat)};
    auto& s = slots.at(std::size_t(i));
    if (!s) throw ColorError("internal: slot used before it was produced");
    State r = std::move(*s);
    s.reset();
    return r;
  };
  for (const auto& m : d.moves) {
    std::vector<State> in;
    if (m.a >= 0 || m.kind == MoveKind::operadic || m.kind == MoveKind::partial_trace) in.push_back(take(m.a));
    if (m.b >= 0) in.push_back(take(m.b));
    slots.at(std::size_t(m.out)) = apply_elementary(cat, m, in);
  }
  if (d.result < 0) return empty_state(cat);
  return rotate_state(cat, take(d.result), d.result_rotation).value;
}

Morphism evaluate_disk(const Category& cat, const DiskGraph& g) {
  const GraphReport rep = validate_graph(g, &cat);
  if (!rep.valid()) throw ColorError("invalid graph: " + rep.errors.front());
  if (!g.fully_colored()) throw ColorError("graph is not fully colored");
  return replay(cat, g, Planner(g).run());
}

bool null_test(const Category& cat, const Combination& c, double tol) {
  if (c.terms.empty()) return true;
  const BoundaryDatum b = boundary_datum_of(c.terms.front().second);
  std::optional<Morphism> acc;
  for (const auto& [lam, g] : c.terms) {
    if (!(boundary_datum_of(g) == b)) throw BoundaryError("graphs in a combination have different boundary data");
    Morphism v = evaluate_disk(cat, g) * lam;
    acc = acc ? *acc + v : v;
  }
  return acc->max_abs() <= tol;
}

}  // namespace sn
