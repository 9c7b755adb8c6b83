#pragma once

#include <vector>

#include <Eigen/Dense>

namespace casimir::diagrams {

using Eigen::Vector3d;

enum class DiagramClass {
  SimplyConnected,  // every sphere once, closed at the target
  Disconnected,     // some sphere never visited
  Reducible,        // some sphere visited more than once
};

/// Closed scattering path. cycle[0] == cycle.back() == target; the spheres
/// in between are visited in order.
struct PathDiagram {
  std::vector<int> cycle;
  double loop_distance = 0.0;
  DiagramClass kind = DiagramClass::SimplyConnected;

  int target() const { return cycle.front(); }
  /// Number of spheres on the loop (edges in the cycle).
  int order() const { return static_cast<int>(cycle.size()) - 1; }
  PathDiagram reversed() const;
};

double loop_distance(const std::vector<int>& cycle, const std::vector<Vector3d>& centers);

DiagramClass classify(const std::vector<int>& cycle, int n_spheres);

/// All (N-1)! orderings of the other spheres, both orientations included,
/// in lexicographic order of the visited ids.
std::vector<PathDiagram> enumerate_simply_connected(const std::vector<Vector3d>& centers, int target);

}  // namespace casimir::diagrams
