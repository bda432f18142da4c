#include "viscofrac/grid.hpp"

#include <stdexcept>

namespace viscofrac {

std::string to_string(Face face) {
  switch (face) {
    case Face::Left: return "left";
    case Face::Right: return "right";
    case Face::Bottom: return "bottom";
    case Face::Top: return "top";
  }
  return "?";
}

Face face_from_string(const std::string& name) {
  if (name == "left") return Face::Left;
  if (name == "right") return Face::Right;
  if (name == "bottom") return Face::Bottom;
  if (name == "top") return Face::Top;
  throw std::invalid_argument("unknown face '" + name + "'");
}

FaceMask FaceMask::from_faces(std::initializer_list<Face> faces) {
  FaceMask m;
  for (Face f : faces) m.dirichlet[static_cast<int>(f)] = true;
  return m;
}

Grid::Grid(int dim, std::array<int, 2> cells, std::array<double, 2> spacing, FaceMask mask)
    : dim_(dim), cells_(cells), spacing_(spacing), mask_(mask) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    if (cells[a] < 2) throw std::invalid_argument("grid needs at least 2 cells per axis");
    if (!(spacing[a] > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  }
  if (dim == 1) {
    mask_.dirichlet[static_cast<int>(Face::Bottom)] = false;
    mask_.dirichlet[static_cast<int>(Face::Top)] = false;
  }
  bool any = false;
  for (bool b : mask_.dirichlet) any = any || b;
  if (!any) throw std::invalid_argument("the Dirichlet boundary must not be empty");

  if (dim == 2) {
    const double gx = 1.0 / (2.0 * hx());
    const double gy = 1.0 / (2.0 * hy());
    grad_ = {{{-gx, -gy}, {gx, -gy}, {-gx, gy}, {gx, gy}}};
  } else {
    grad_ = {{{-1.0 / hx(), 0.0}, {1.0 / hx(), 0.0}, {0.0, 0.0}, {0.0, 0.0}}};
  }

  dirichlet_node_.assign(node_count(), false);
  node_weight_.assign(node_count(), 0.0);
  for (int n = 0; n < node_count(); ++n) {
    const auto [i, j] = node_ij(n);
    bool d = (i == 0 && mask_.is_dirichlet(Face::Left)) || (i == nx() && mask_.is_dirichlet(Face::Right));
    if (dim == 2)
      d = d || (j == 0 && mask_.is_dirichlet(Face::Bottom)) || (j == ny() && mask_.is_dirichlet(Face::Top));
    dirichlet_node_[n] = d;
    if (!d) free_nodes_.push_back(n);
    double w = hx() * ((i == 0 || i == nx()) ? 0.5 : 1.0);
    if (dim == 2) w *= hy() * ((j == 0 || j == ny()) ? 0.5 : 1.0);
    node_weight_[n] = w;
  }
}

Grid Grid::unit_square(int n, FaceMask mask) { return Grid(2, {n, n}, {1.0 / n, 1.0 / n}, mask); }

Grid Grid::unit_interval(int n, FaceMask mask) { return Grid(1, {n, 1}, {1.0 / n, 1.0}, mask); }

double Grid::length(int axis) const {
  if (axis == 0) return nx() * hx();
  return dim_ == 2 ? ny() * hy() : 0.0;
}

std::array<double, 2> Grid::node_coords(int n) const {
  const auto [i, j] = node_ij(n);
  return {i * hx(), dim_ == 2 ? j * hy() : 0.0};
}

std::array<double, 2> Grid::cell_center(int c) const {
  if (dim_ == 1) return {(c + 0.5) * hx(), 0.0};
  return {(c % nx() + 0.5) * hx(), (c / nx() + 0.5) * hy()};
}

std::array<int, 4> Grid::cell_nodes(int c) const {
  if (dim_ == 1) return {c, c + 1, -1, -1};
  const int i = c % nx();
  const int j = c / nx();
  return {node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1)};
}

std::array<double, 2> Grid::outward_normal(Face f) const {
  switch (f) {
    case Face::Left: return {-1.0, 0.0};
    case Face::Right: return {1.0, 0.0};
    case Face::Bottom: return {0.0, -1.0};
    case Face::Top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

std::vector<FaceSegment> Grid::neumann_segments() const {
  std::vector<FaceSegment> out;
  if (dim_ == 1) {
    if (!mask_.is_dirichlet(Face::Left)) out.push_back({Face::Left, 0, {0, 0}, 1.0});
    if (!mask_.is_dirichlet(Face::Right)) out.push_back({Face::Right, nx() - 1, {nx(), nx()}, 1.0});
    return out;
  }
  if (!mask_.is_dirichlet(Face::Left))
    for (int j = 0; j < ny(); ++j) out.push_back({Face::Left, j * nx(), {node(0, j), node(0, j + 1)}, hy()});
  if (!mask_.is_dirichlet(Face::Right))
    for (int j = 0; j < ny(); ++j)
      out.push_back({Face::Right, j * nx() + nx() - 1, {node(nx(), j), node(nx(), j + 1)}, hy()});
  if (!mask_.is_dirichlet(Face::Bottom))
    for (int i = 0; i < nx(); ++i) out.push_back({Face::Bottom, i, {node(i, 0), node(i + 1, 0)}, hx()});
  if (!mask_.is_dirichlet(Face::Top))
    for (int i = 0; i < nx(); ++i)
      out.push_back({Face::Top, (ny() - 1) * nx() + i, {node(i, ny()), node(i + 1, ny())}, hx()});
  return out;
}

}  // namespace viscofrac
