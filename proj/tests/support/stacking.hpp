#pragma once
// Random disk graphs built as a stack of cups, caps and coupons. The stacked
// composite is computed alongside, independently of the evaluation moves.

#include <random>

#include "sn/disk.hpp"

namespace sn::testing {

inline Morphism random_morphism(const Category& cat, const Word& src, const Word& tgt, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Morphism m = cat.zero(src, tgt);
  for (auto& b : m.blocks)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = Scalar(nd(rng), nd(rng));
  return m;
}

inline SLabel random_slabel(const Category& cat, std::mt19937_64& rng, bool allow_unit = false) {
  std::uniform_int_distribution<int> L(allow_unit || cat.rank() == 1 ? 0 : 1, cat.rank() - 1);
  int a = L(rng);
  if (!allow_unit && a == cat.unit() && cat.rank() > 1) a = (a + 1) % cat.rank();
  return {a, std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1};
}

struct Stacked {
  DiskGraph graph;
  Morphism value;
  int vertices = 0;
};

struct StackOptions {
  int max_vertices = 4;
  int max_frontier = 6;
  int min_ops = 3;
  int max_ops = 12;
};

class Stacker {
public:
  Stacker(const Category& cat, std::mt19937_64& rng) : cat_(cat), rng_(rng) {}

  Stacked build(const StackOptions& o) {
    value_ = cat_.identity({});
    const int ops = std::uniform_int_distribution<int>(o.min_ops, o.max_ops)(rng_);
    int verts = 0;
    for (int step = 0; step < ops; ++step) {
      const int kind = std::uniform_int_distribution<int>(0, 2)(rng_);
      const int F = int(front_.size());
      if (kind == 0 && F + 2 <= o.max_frontier) {
        cup(std::uniform_int_distribution<int>(0, F)(rng_), random_slabel(cat_, rng_));
      } else if (kind == 1 && verts < o.max_vertices) {
        if (vertex(o)) ++verts;
      } else {
        std::vector<int> ok;
        for (int p = 0; p + 1 < F; ++p)
          if (front_[std::size_t(p + 1)].up == Category::reverse(front_[std::size_t(p)].up)) ok.push_back(p);
        if (!ok.empty()) cap(ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng_)]);
      }
    }
    Stacked s;
    s.graph = assemble();
    s.value = value_;
    s.vertices = verts;
    return s;
  }

private:
  struct Open {
    int end;
    SLabel up;  // color read upward
  };
  enum Term { kOpen, kVertex, kJunction };
  struct End {
    int other;      // other end of the same segment
    SLabel label;   // read from this end into the segment
    Term term = kOpen;
    int vertex = -1;
    int join = -1;  // for junctions
  };

  Word objs(std::size_t a, std::size_t b) const {
    Word w;
    for (std::size_t i = a; i < b; ++i) w.push_back(cat_.obj(front_[i].up));
    return w;
  }

  std::pair<int, int> segment(SLabel from_first) {
    const int a = int(ends_.size());
    ends_.push_back({a + 1, from_first});
    ends_.push_back({a, Category::reverse(from_first)});
    return {a, a + 1};
  }

  void cup(int p, SLabel s) {
    const auto [e1, e2] = segment(Category::reverse(s));
    value_ = cat_.compose(cat_.pad(objs(0, std::size_t(p)), cat_.cup(s), objs(std::size_t(p), front_.size())), value_);
    front_.insert(front_.begin() + p, {Open{e1, s}, Open{e2, Category::reverse(s)}});
  }

  void cap(int p) {
    const SLabel s = front_[std::size_t(p)].up;
    value_ = cat_.compose(cat_.pad(objs(0, std::size_t(p)), cat_.cap(s), objs(std::size_t(p) + 2, front_.size())), value_);
    const int e1 = front_[std::size_t(p)].end, e2 = front_[std::size_t(p) + 1].end;
    ends_[std::size_t(e1)].term = ends_[std::size_t(e2)].term = kJunction;
    ends_[std::size_t(e1)].join = e2;
    ends_[std::size_t(e2)].join = e1;
    front_.erase(front_.begin() + p, front_.begin() + p + 2);
  }

  bool vertex(const StackOptions& o) {
    const int F = int(front_.size());
    const int p = std::uniform_int_distribution<int>(0, F)(rng_);
    const int k = std::uniform_int_distribution<int>(0, std::min(3, F - p))(rng_);
    const Word in = objs(std::size_t(p), std::size_t(p + k));
    for (int attempt = 0; attempt < 40; ++attempt) {
      const int m = std::uniform_int_distribution<int>(0, 3)(rng_);
      if (F - k + m > o.max_frontier) continue;
      SWord outs;
      for (int j = 0; j < m; ++j) outs.push_back(random_slabel(cat_, rng_));
      const Word out = cat_.objects(outs);
      if (cat_.hom_dim(in, out) == 0) continue;
      const Morphism alpha = random_morphism(cat_, in, out, rng_);
      value_ = cat_.compose(cat_.pad(objs(0, std::size_t(p)), alpha, objs(std::size_t(p + k), front_.size())), value_);
      const int v = int(vrot_.size());
      vrot_.emplace_back();
      vcolor_.push_back(VertexColor{{v, 0, m}, alpha});
      std::vector<Open> fresh;
      for (const auto& s : outs) {
        const auto [lo, hi] = segment(s);
        ends_[std::size_t(lo)].term = kVertex;
        ends_[std::size_t(lo)].vertex = v;
        vrot_.back().push_back(lo);
        fresh.push_back({hi, s});
      }
      for (int j = p + k - 1; j >= p; --j) {
        const int e = front_[std::size_t(j)].end;
        ends_[std::size_t(e)].term = kVertex;
        ends_[std::size_t(e)].vertex = v;
        vrot_.back().push_back(e);
      }
      front_.erase(front_.begin() + p, front_.begin() + p + k);
      front_.insert(front_.begin() + p, fresh.begin(), fresh.end());
      return true;
    }
    return false;
  }

  DiskGraph assemble() {
    DiskGraph g;
    for (std::size_t v = 0; v < vrot_.size(); ++v) g.add_vertex();
    std::vector<int> he(ends_.size(), -1);
    std::vector<char> seen(ends_.size(), 0);
    auto terminal = [&](int e) { return ends_[std::size_t(e)].term != kJunction; };
    for (std::size_t t = 0; t < ends_.size(); ++t) {
      if (!terminal(int(t)) || seen[t]) continue;
      int x = int(t);
      seen[t] = 1;
      int y = ends_[std::size_t(x)].other;
      while (!terminal(y)) {
        seen[std::size_t(y)] = 1;
        x = ends_[std::size_t(y)].join;
        seen[std::size_t(x)] = 1;
        y = ends_[std::size_t(x)].other;
      }
      seen[std::size_t(y)] = 1;
      auto vert = [&](int e) { return ends_[std::size_t(e)].term == kVertex ? ends_[std::size_t(e)].vertex : -1; };
      auto [h1, h2] = g.add_edge(vert(int(t)), vert(y), ends_[t].label);
      he[t] = h1;
      he[std::size_t(y)] = h2;
    }
    for (std::size_t e = 0; e < ends_.size(); ++e) {
      if (seen[e]) continue;
      g.circles.push_back(ends_[e].label);
      int x = int(e);
      do {
        seen[std::size_t(x)] = 1;
        const int y = ends_[std::size_t(x)].other;
        seen[std::size_t(y)] = 1;
        x = ends_[std::size_t(y)].join;
      } while (!seen[std::size_t(x)]);
    }
    for (std::size_t v = 0; v < vrot_.size(); ++v) {
      for (int e : vrot_[v]) g.rotation[v].push_back(he[std::size_t(e)]);
      g.colors[v] = vcolor_[v];
    }
    for (const auto& o : front_) g.boundary.push_back(he[std::size_t(o.end)]);
    return g;
  }

  const Category& cat_;
  std::mt19937_64& rng_;
  Morphism value_;
  std::vector<Open> front_;
  std::vector<End> ends_;
  std::vector<std::vector<int>> vrot_;
  std::vector<VertexColor> vcolor_;
};

inline Stacked random_stacked(const Category& cat, std::mt19937_64& rng, const StackOptions& o = {}) {
  return Stacker(cat, rng).build(o);
}

}  // namespace sn::testing
