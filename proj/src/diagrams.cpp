#include "casimir/diagrams.hpp"

#include <algorithm>
#include <stdexcept>

namespace casimir::diagrams {

PathDiagram PathDiagram::reversed() const {
  PathDiagram r = *this;
  std::reverse(r.cycle.begin(), r.cycle.end());
  return r;
}

double loop_distance(const std::vector<int>& cycle, const std::vector<Vector3d>& centers) {
  if (cycle.size() < 3 || cycle.front() != cycle.back()) {
    throw std::invalid_argument("loop_distance: cycle must be closed and visit another sphere");
  }
  const int n = static_cast<int>(centers.size());
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < cycle.size(); ++e) {
    const int a = cycle[e], b = cycle[e + 1];
    if (a < 0 || a >= n || b < 0 || b >= n) throw std::out_of_range("loop_distance: sphere index out of range");
    total += (centers[b] - centers[a]).norm();
  }
  return total;
}

DiagramClass classify(const std::vector<int>& cycle, int n_spheres) {
  std::vector<int> visits(static_cast<std::size_t>(n_spheres), 0);
  for (std::size_t e = 0; e + 1 < cycle.size(); ++e) ++visits.at(static_cast<std::size_t>(cycle[e]));
  if (std::any_of(visits.begin(), visits.end(), [](int v) { return v > 1; })) return DiagramClass::Reducible;
  if (std::any_of(visits.begin(), visits.end(), [](int v) { return v == 0; })) return DiagramClass::Disconnected;
  return DiagramClass::SimplyConnected;
}

std::vector<PathDiagram> enumerate_simply_connected(const std::vector<Vector3d>& centers, int target) {
  const int n = static_cast<int>(centers.size());
  if (n < 2) throw std::invalid_argument("enumerate_simply_connected: need at least two spheres");
  if (target < 0 || target >= n) throw std::out_of_range("enumerate_simply_connected: bad target");
  std::vector<int> others;
  for (int i = 0; i < n; ++i) {
    if (i != target) others.push_back(i);
  }
  std::vector<PathDiagram> out;
  do {
    PathDiagram d;
    d.cycle.reserve(static_cast<std::size_t>(n) + 1);
    d.cycle.push_back(target);
    d.cycle.insert(d.cycle.end(), others.begin(), others.end());
    d.cycle.push_back(target);
    d.loop_distance = loop_distance(d.cycle, centers);
    out.push_back(std::move(d));
  } while (std::next_permutation(others.begin(), others.end()));
  return out;
}

}  // namespace casimir::diagrams
