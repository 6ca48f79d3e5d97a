#include "sn/planar.hpp"

#include <stdexcept>

#include "sn/category.hpp"

namespace sn {

PlanarStack::PlanarStack(SWord bottom) {
  for (const auto& s : bottom) {
    const auto [lo, hi] = segment(s);
    bottom_.push_back(lo);
    front_.push_back({hi, s});
  }
}

std::pair<int, int> PlanarStack::segment(SLabel from_first) {
  const int a = static_cast<int>(ends_.size());
  ends_.push_back({a + 1, from_first});
  ends_.push_back({a, Category::reverse(from_first)});
  return {a, a + 1};
}

int PlanarStack::coupon(int pos, int k, const SWord& outputs) {
  const int F = static_cast<int>(front_.size());
  if (pos < 0 || k < 0 || pos + k > F) throw std::out_of_range("coupon outside the frontier");
  const int v = static_cast<int>(rot_.size());
  rot_.emplace_back();
  std::vector<Open> fresh;
  for (const auto& s : outputs) {
    const auto [lo, hi] = segment(s);
    ends_[std::size_t(lo)].term = kVertex;
    ends_[std::size_t(lo)].vertex = v;
    rot_.back().push_back(lo);
    fresh.push_back({hi, s});
  }
  for (int j = pos + k - 1; j >= pos; --j) {
    const int e = front_[std::size_t(j)].end;
    ends_[std::size_t(e)].term = kVertex;
    ends_[std::size_t(e)].vertex = v;
    rot_.back().push_back(e);
  }
  front_.erase(front_.begin() + pos, front_.begin() + pos + k);
  front_.insert(front_.begin() + pos, fresh.begin(), fresh.end());
  return v;
}

void PlanarStack::cup(int pos, SLabel s) {
  if (pos < 0 || pos > static_cast<int>(front_.size())) throw std::out_of_range("cup outside the frontier");
  const auto [e1, e2] = segment(Category::reverse(s));
  front_.insert(front_.begin() + pos, {Open{e1, s}, Open{e2, Category::reverse(s)}});
}

void PlanarStack::cap(int pos) {
  if (pos < 0 || pos + 1 >= static_cast<int>(front_.size())) throw std::out_of_range("cap outside the frontier");
  const auto& l = front_[std::size_t(pos)];
  const auto& r = front_[std::size_t(pos) + 1];
  if (!(r.up == Category::reverse(l.up))) throw std::invalid_argument("cap on strands of mismatched colors");
  ends_[std::size_t(l.end)].term = ends_[std::size_t(r.end)].term = kJunction;
  ends_[std::size_t(l.end)].join = r.end;
  ends_[std::size_t(r.end)].join = l.end;
  front_.erase(front_.begin() + pos, front_.begin() + pos + 2);
}

DiskGraph PlanarStack::finish() const {
  DiskGraph g;
  for (std::size_t v = 0; v < rot_.size(); ++v) g.add_vertex();
  std::vector<int> he(ends_.size(), -1);
  std::vector<char> seen(ends_.size(), 0);
  auto terminal = [&](int e) { return ends_[std::size_t(e)].term != kJunction; };
  auto vert = [&](int e) { return ends_[std::size_t(e)].term == kVertex ? ends_[std::size_t(e)].vertex : -1; };
  for (std::size_t t = 0; t < ends_.size(); ++t) {
    if (!terminal(int(t)) || seen[t]) continue;
    seen[t] = 1;
    int y = ends_[t].other;
    while (!terminal(y)) {
      seen[std::size_t(y)] = 1;
      const int x = ends_[std::size_t(y)].join;
      seen[std::size_t(x)] = 1;
      y = ends_[std::size_t(x)].other;
    }
    seen[std::size_t(y)] = 1;
    const auto [h1, h2] = g.add_edge(vert(int(t)), vert(y), ends_[t].label);
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
  for (std::size_t v = 0; v < rot_.size(); ++v)
    for (int e : rot_[v]) g.rotation[v].push_back(he[std::size_t(e)]);
  for (const auto& o : front_) g.boundary.push_back(he[std::size_t(o.end)]);
  for (auto it = bottom_.rbegin(); it != bottom_.rend(); ++it) g.boundary.push_back(he[std::size_t(*it)]);
  return g;
}

}  // namespace sn
