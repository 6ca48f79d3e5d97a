#include "sn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace sn {

int DiskGraph::add_vertex() {
  rotation.emplace_back();
  colors.emplace_back();
  return num_vertices++;
}

std::pair<int, int> DiskGraph::add_edge(int u, int v, SLabel s) {
  const int h = num_half_edges();
  vertex.push_back(u);
  vertex.push_back(v);
  partner.push_back(h + 1);
  partner.push_back(h);
  label.push_back(s);
  label.push_back(Category::reverse(s));
  return {h, h + 1};
}

int DiskGraph::delta(int h) const {
  return label[static_cast<std::size_t>(h)].sign > 0 ? h : partner[static_cast<std::size_t>(h)];
}

std::vector<std::pair<int, int>> DiskGraph::edges() const {
  std::vector<std::pair<int, int>> e;
  for (int h = 0; h < num_half_edges(); ++h)
    if (h < partner[static_cast<std::size_t>(h)]) e.emplace_back(h, partner[static_cast<std::size_t>(h)]);
  return e;
}

SWord DiskGraph::legs(int v) const {
  SWord w;
  for (int h : rotation[static_cast<std::size_t>(v)]) w.push_back(label[static_cast<std::size_t>(h)]);
  return w;
}

bool DiskGraph::fully_colored() const {
  return std::all_of(colors.begin(), colors.end(), [](const auto& c) { return c.has_value(); });
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[std::size_t(x)] == x ? x : p[std::size_t(x)] = find(p[std::size_t(x)]); }
  void unite(int a, int b) { p[std::size_t(find(a))] = find(b); }
};

}  // namespace

GraphReport validate_graph(const DiskGraph& g, const Category* cat) {
  GraphReport rep;
  auto err = [&](const std::string& s) { rep.errors.push_back(s); };
  const int H = g.num_half_edges();
  const int V = g.num_vertices;
  if (static_cast<int>(g.partner.size()) != H || static_cast<int>(g.label.size()) != H)
    err("half-edge tables have inconsistent lengths");
  if (static_cast<int>(g.rotation.size()) != V || static_cast<int>(g.colors.size()) != V)
    err("vertex tables have inconsistent lengths");
  if (!rep.valid()) return rep;

  for (int h = 0; h < H; ++h) {
    const int p = g.partner[std::size_t(h)];
    const std::string hs = "half-edge " + std::to_string(h);
    if (p < 0 || p >= H || p == h || g.partner[std::size_t(p)] != h) {
      err(hs + ": involution is not fixed-point free or not involutive");
      continue;
    }
    if (g.vertex[std::size_t(h)] >= V || g.vertex[std::size_t(h)] < -1) err(hs + ": incidence out of range");
    const SLabel a = g.label[std::size_t(h)], b = g.label[std::size_t(p)];
    if (!(b == Category::reverse(a))) err(hs + ": edge color disagrees with its partner");
    if (a.sign != 1 && a.sign != -1) err(hs + ": orientation must be +1 or -1");
    if (cat && (a.label < 0 || a.label >= cat->rank())) err(hs + ": unknown label");
  }
  if (!rep.valid()) return rep;

  std::vector<int> seen(std::size_t(H), 0);
  for (int v = 0; v < V; ++v)
    for (int h : g.rotation[std::size_t(v)]) {
      if (h < 0 || h >= H) {
        err("vertex " + std::to_string(v) + ": rotation lists unknown half-edge");
        continue;
      }
      if (g.vertex[std::size_t(h)] != v)
        err("half-edge " + std::to_string(h) + ": listed at vertex " + std::to_string(v) +
            " but incident to " + std::to_string(g.vertex[std::size_t(h)]));
      ++seen[std::size_t(h)];
    }
  for (int h : g.boundary) {
    if (h < 0 || h >= H) {
      err("boundary word lists unknown half-edge");
      continue;
    }
    if (g.vertex[std::size_t(h)] != -1)
      err("half-edge " + std::to_string(h) + ": in boundary word but incident to a vertex");
    ++seen[std::size_t(h)];
  }
  for (int h = 0; h < H; ++h)
    if (seen[std::size_t(h)] != 1)
      err("half-edge " + std::to_string(h) + ": appears " + std::to_string(seen[std::size_t(h)]) +
          " times in rotations and boundary word");
  if (!rep.valid()) return rep;

  // Euler check per component of graph plus boundary circle.
  // Darts: half-edges 0..H-1, then per boundary point k two arc darts.
  const int B = static_cast<int>(g.boundary.size());
  const int D = H + 2 * B;
  std::vector<int> alpha(static_cast<std::size_t>(D)), sigma(static_cast<std::size_t>(D));
  std::vector<int> node(static_cast<std::size_t>(D));
  for (int h = 0; h < H; ++h) alpha[std::size_t(h)] = g.partner[std::size_t(h)];
  // arc k runs from point k (dart H+2k) to point k+1 (dart H+2k+1)
  for (int k = 0; k < B; ++k) {
    alpha[std::size_t(H + 2 * k)] = H + 2 * k + 1;
    alpha[std::size_t(H + 2 * k + 1)] = H + 2 * k;
  }
  for (int v = 0; v < V; ++v) {
    const auto& rot = g.rotation[std::size_t(v)];
    for (std::size_t i = 0; i < rot.size(); ++i) {
      sigma[std::size_t(rot[i])] = rot[(i + 1) % rot.size()];
      node[std::size_t(rot[i])] = v;
    }
  }
  for (int k = 0; k < B; ++k) {
    const int leg = g.boundary[std::size_t(k)];
    const int next = H + 2 * k, prev = H + 2 * ((k + B - 1) % B) + 1;
    sigma[std::size_t(next)] = leg;
    sigma[std::size_t(leg)] = prev;
    sigma[std::size_t(prev)] = next;
    node[std::size_t(next)] = node[std::size_t(leg)] = node[std::size_t(prev)] = V + k;
  }
  Dsu dsu(V + B);
  for (int d = 0; d < D; ++d) dsu.unite(node[std::size_t(d)], node[std::size_t(alpha[std::size_t(d)])]);
  std::vector<int> nv(std::size_t(V + B), 0), nd(std::size_t(V + B), 0), nf(std::size_t(V + B), 0);
  for (int x = 0; x < V + B; ++x) ++nv[std::size_t(dsu.find(x))];
  for (int d = 0; d < D; ++d) ++nd[std::size_t(dsu.find(node[std::size_t(d)]))];
  std::vector<char> done(std::size_t(D), 0);
  for (int d = 0; d < D; ++d) {
    if (done[std::size_t(d)]) continue;
    ++nf[std::size_t(dsu.find(node[std::size_t(d)]))];
    for (int x = d; !done[std::size_t(x)]; x = sigma[std::size_t(alpha[std::size_t(x)])]) done[std::size_t(x)] = 1;
  }
  for (int x = 0; x < V + B; ++x) {
    if (dsu.find(x) != x) continue;
    const int chi = nv[std::size_t(x)] - nd[std::size_t(x)] / 2 + nf[std::size_t(x)];
    if (nd[std::size_t(x)] == 0) continue;  // isolated vertex
    if (chi != 2)
      err("component of " + (x < V ? "vertex " + std::to_string(x) : "the boundary") +
          " is not planar (Euler characteristic " + std::to_string(chi) + ")");
  }

  if (cat) {
    for (const auto& c : g.circles)
      if (c.label < 0 || c.label >= cat->rank()) err("circle has unknown label");
    for (int v = 0; v < V; ++v) {
      const auto& c = g.colors[std::size_t(v)];
      if (!c) continue;
      const std::string vs = "vertex " + std::to_string(v);
      if (c->pol.vertex != v || !is_polarization(g, c->pol)) {
        err(vs + ": color carries an invalid polarization");
        continue;
      }
      const SWord legs = g.legs(v);
      const int n = static_cast<int>(legs.size());
      Word out, in;
      for (int j = 0; j < c->pol.outputs; ++j) out.push_back(cat->obj(legs[std::size_t((c->pol.root + j) % n)]));
      for (int j = n - 1; j >= c->pol.outputs; --j)
        in.push_back(cat->obj(Category::reverse(legs[std::size_t((c->pol.root + j) % n)])));
      if (c->value.src != in || c->value.tgt != out) err(vs + ": color does not lie in the color space");
    }
  }
  return rep;
}

BoundaryDatum boundary_datum_of(const DiskGraph& g) {
  BoundaryDatum b;
  for (int h : g.boundary) b.points.push_back(Category::reverse(g.label[std::size_t(h)]));
  return b;
}

DiskGraph corolla_of_datum(const BoundaryDatum& b) {
  DiskGraph g;
  if (b.points.empty()) return g;
  const int v = g.add_vertex();
  for (const auto& s : b.points) {
    auto [h, p] = g.add_edge(v, -1, s);
    g.rotation[std::size_t(v)].push_back(h);
    g.boundary.push_back(p);
  }
  return g;
}

bool is_polarization(const DiskGraph& g, const Polarization& p) {
  if (p.vertex < 0 || p.vertex >= g.num_vertices) return false;
  const int n = static_cast<int>(g.rotation[std::size_t(p.vertex)].size());
  if (n == 0) return p.root == 0 && p.outputs == 0;
  return p.root >= 0 && p.root < n && p.outputs >= 0 && p.outputs <= n;
}

std::vector<Polarization> enumerate_polarizations(const DiskGraph& g, int v) {
  std::vector<Polarization> r;
  const int n = static_cast<int>(g.rotation.at(std::size_t(v)).size());
  for (int root = 0; root < n; ++root)
    for (int m = 0; m <= n; ++m) r.push_back({v, root, m});
  return r;
}

Polarization make_polarization(const DiskGraph& g, int v, const std::vector<int>& outputs,
                               const std::vector<int>& inputs) {
  const auto& rot = g.rotation.at(std::size_t(v));
  const int n = static_cast<int>(rot.size());
  if (static_cast<int>(outputs.size() + inputs.size()) != n)
    throw std::invalid_argument("polarization must partition the half-edges of the vertex");
  auto pos = [&](int h) {
    auto it = std::find(rot.begin(), rot.end(), h);
    if (it == rot.end()) throw std::invalid_argument("half-edge not at vertex");
    return static_cast<int>(it - rot.begin());
  };
  if (n == 0) return {v, 0, 0};
  // outputs run clockwise from the root; inputs are read against the rotation
  int root = outputs.empty() ? (pos(inputs.back())) : pos(outputs.front());
  const int m = static_cast<int>(outputs.size());
  for (int j = 0; j < m; ++j)
    if (pos(outputs[std::size_t(j)]) != (root + j) % n)
      throw std::invalid_argument("output half-edges are not consecutive");
  for (int j = 0; j < n - m; ++j)
    if (pos(inputs[std::size_t(n - m - 1 - j)]) != (root + m + j) % n)
      throw std::invalid_argument("input half-edges are not consecutive");
  return {v, root, m};
}

DiskGraph canonicalize(const Category& cat, const DiskGraph& g) {
  DiskGraph r = g;
  const int V = g.num_vertices;
  std::vector<int> bpos(std::size_t(g.num_half_edges()), -1), rpos(std::size_t(g.num_half_edges()), -1);
  for (std::size_t k = 0; k < g.boundary.size(); ++k) bpos[std::size_t(g.boundary[k])] = int(k);
  for (int v = 0; v < V; ++v)
    for (std::size_t k = 0; k < g.rotation[std::size_t(v)].size(); ++k)
      rpos[std::size_t(g.rotation[std::size_t(v)][k])] = int(k);
  auto key = [&](int h) {
    const int v = g.vertex[std::size_t(h)];
    return v >= 0 ? std::make_tuple(0, v, rpos[std::size_t(h)]) : std::make_tuple(1, bpos[std::size_t(h)], 0);
  };
  auto is_input = [&](int h) {
    const int v = g.vertex[std::size_t(h)];
    if (v < 0) return true;
    const auto& c = g.colors[std::size_t(v)];
    if (!c) return false;
    const int n = static_cast<int>(g.rotation[std::size_t(v)].size());
    return (rpos[std::size_t(h)] - c->pol.root + n) % n >= c->pol.outputs;
  };
  for (auto [h, p] : g.edges()) {
    const int src = key(h) < key(p) ? h : p;
    if (g.label[std::size_t(src)].sign > 0) continue;
    const int old_src = g.delta(h);
    const int a = g.label[std::size_t(old_src)].label;
    r.label[std::size_t(old_src)] = {cat.dual(a), -1};
    r.label[std::size_t(g.partner[std::size_t(old_src)])] = {cat.dual(a), 1};
    const int k = int(is_input(h)) + int(is_input(p));
    const Scalar pa = cat.data().pivotal[std::size_t(a)];
    const Scalar f = k == 0 ? 1.0 / pa : (k == 2 ? pa : Scalar(1.0));
    if (f == Scalar(1.0)) continue;
    for (int x : {h, p}) {
      const int v = g.vertex[std::size_t(x)];
      if (v >= 0 && r.colors[std::size_t(v)]) {
        // value after flip = before * pa^(k-1); compensate
        r.colors[std::size_t(v)]->value = r.colors[std::size_t(v)]->value * (1.0 / f);
        break;
      }
    }
  }
  return r;
}

}  // namespace sn
