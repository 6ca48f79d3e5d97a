#pragma once

#include <vector>

#include "sn/graph.hpp"

namespace sn {

// Builds a disk graph as a vertical stack of coupons, cups and caps between a
// bottom and a top row of boundary points. Labels are read upward. The
// resulting boundary runs along the top from left to right, then along the
// bottom from right to left. Vertex colors are left to the caller; coupon
// vertices have the polarization {v, 0, #outputs}.
class PlanarStack {
public:
  explicit PlanarStack(SWord bottom = {});

  // Replaces k strands starting at pos by the outputs; returns the vertex.
  int coupon(int pos, int k, const SWord& outputs);
  void cup(int pos, SLabel s);  // creates (s, reverse s)
  void cap(int pos);            // joins strands pos and pos + 1
  std::size_t width() const { return front_.size(); }
  SLabel up(int pos) const { return front_[static_cast<std::size_t>(pos)].up; }

  DiskGraph finish() const;

private:
  enum Term { kBoundary, kVertex, kJunction };
  struct End {
    int other;
    SLabel label;  // read from this end into the segment
    Term term = kBoundary;
    int vertex = -1;
    int join = -1;
  };
  struct Open {
    int end;
    SLabel up;
  };
  std::pair<int, int> segment(SLabel from_first);

  std::vector<End> ends_;
  std::vector<Open> front_;
  std::vector<int> bottom_;
  std::vector<std::vector<int>> rot_;
};

}  // namespace sn
