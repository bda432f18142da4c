#pragma once

#include <array>
#include <string>
#include <vector>

namespace viscofrac {

/// Boundary faces of the rectangle [0, Lx] x [0, Ly] (or the interval [0, Lx]).
enum class Face { Left = 0, Right = 1, Bottom = 2, Top = 3 };

std::string to_string(Face face);
Face face_from_string(const std::string& name);

struct FaceMask {
  std::array<bool, 4> dirichlet{};  // indexed by Face

  bool is_dirichlet(Face f) const { return dirichlet[static_cast<int>(f)]; }
  static FaceMask from_faces(std::initializer_list<Face> faces);
};

/// One end of a boundary segment, as seen by a traction callback.
struct FacePoint {
  Face face;
  int node;                   // global node index
  int cell;                   // cell adjacent to the segment
  std::array<double, 2> x;    // node coordinates
  std::array<double, 2> normal;  // outward unit normal
};

/// A boundary segment: a cell edge (d = 2) or an end point (d = 1) on a face.
struct FaceSegment {
  Face face;
  int cell;
  std::array<int, 2> nodes;  // nodes[1] == nodes[0] in 1D
  double measure;            // edge length, or 1 in 1D
};

/// Structured grid of Q1 quadrilaterals (d = 2) or P1 segments (d = 1).
/// Nodes are numbered x-fastest: node(i, j) = j * (nx + 1) + i.
class Grid {
 public:
  Grid(int dim, std::array<int, 2> cells, std::array<double, 2> spacing, FaceMask mask);

  static Grid unit_square(int n, FaceMask mask);
  static Grid unit_interval(int n, FaceMask mask);

  int dim() const { return dim_; }
  int nx() const { return cells_[0]; }
  int ny() const { return dim_ == 2 ? cells_[1] : 0; }
  double hx() const { return spacing_[0]; }
  double hy() const { return dim_ == 2 ? spacing_[1] : 1.0; }
  double length(int axis) const;
  const FaceMask& mask() const { return mask_; }

  int node_count() const { return (nx() + 1) * (ny() + 1); }
  int cell_count() const { return dim_ == 2 ? nx() * ny() : nx(); }
  int dof_count() const { return node_count() * dim_; }
  int nodes_per_cell() const { return dim_ == 2 ? 4 : 2; }

  int node(int i, int j = 0) const { return j * (nx() + 1) + i; }
  std::array<int, 2> node_ij(int n) const { return {n % (nx() + 1), n / (nx() + 1)}; }
  std::array<double, 2> node_coords(int n) const;
  std::array<double, 2> cell_center(int c) const;
  /// Corner nodes (i,j), (i+1,j), (i,j+1), (i+1,j+1); the first two in 1D.
  std::array<int, 4> cell_nodes(int c) const;
  double cell_volume() const { return dim_ == 2 ? hx() * hy() : hx(); }

  /// Shape-function gradients at the cell center, [local node][axis].
  const std::array<std::array<double, 2>, 4>& center_gradients() const { return grad_; }

  bool is_dirichlet_node(int n) const { return dirichlet_node_[n]; }
  const std::vector<int>& free_nodes() const { return free_nodes_; }

  /// Trapezoidal (lumped) integration weight of each node; sums to |Omega|.
  const std::vector<double>& node_weights() const { return node_weight_; }

  /// Segments of every face whose flag is Neumann.
  std::vector<FaceSegment> neumann_segments() const;
  std::array<double, 2> outward_normal(Face f) const;

 private:
  int dim_;
  std::array<int, 2> cells_;
  std::array<double, 2> spacing_;
  FaceMask mask_;
  std::array<std::array<double, 2>, 4> grad_{};
  std::vector<bool> dirichlet_node_;
  std::vector<int> free_nodes_;
  std::vector<double> node_weight_;
};

}  // namespace viscofrac
