#include "dgmres/mesh.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace dgmres {

StructuredMesh build_mesh(std::uint32_t n_e) {
  if (n_e == 0) {
    throw std::invalid_argument("build_mesh: n_e must be positive");
  }
  const std::uint64_t n_axis = 2ull * n_e + 1;
  const std::uint64_t n_nodes = n_axis * n_axis * n_axis;
  if (n_nodes > std::numeric_limits<index_t>::max()) {
    throw std::invalid_argument("build_mesh: n_e=" + std::to_string(n_e) +
                                " exceeds 32-bit node indexing");
  }
  StructuredMesh m;
  m.n_e = n_e;
  m.n_axis = static_cast<std::uint32_t>(n_axis);
  m.n_nodes = static_cast<index_t>(n_nodes);
  m.h = 1.0 / (2.0 * n_e);
  m.h_e = 1.0 / n_e;
  return m;
}

std::array<index_t, 27> element_nodes(const StructuredMesh& mesh, std::uint64_t e) {
  if (e >= mesh.n_elements()) {
    throw std::out_of_range("element_nodes: element index out of range");
  }
  const std::uint32_t ex = static_cast<std::uint32_t>(e % mesh.n_e);
  const std::uint32_t ey = static_cast<std::uint32_t>((e / mesh.n_e) % mesh.n_e);
  const std::uint32_t ez = static_cast<std::uint32_t>(e / (std::uint64_t(mesh.n_e) * mesh.n_e));
  std::array<index_t, 27> gid;
  int a = 0;
  for (std::uint32_t az = 0; az < 3; ++az)
    for (std::uint32_t ay = 0; ay < 3; ++ay)
      for (std::uint32_t ax = 0; ax < 3; ++ax)
        gid[a++] = mesh.node_id(2 * ex + ax, 2 * ey + ay, 2 * ez + az);
  return gid;
}

NodeClass classify_node(const StructuredMesh& mesh, index_t v) {
  const auto [ix, iy, iz] = mesh.node_coords(v);
  const std::uint32_t last = mesh.n_axis - 1;
  if (ix == 0 || ix == last || iy == 0 || iy == last) return NodeClass::DirichletXY;
  if (iz == 0 || iz == last) return NodeClass::NeumannZ;
  return NodeClass::Interior;
}

}  // namespace dgmres
