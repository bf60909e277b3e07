#pragma once

#include <array>
#include <cstdint>

namespace dgmres {

using index_t = std::uint32_t;

/// Node classification on the unit cube. Dirichlet faces are the four
/// x- and y-faces (value pinned to zero); the two z-faces carry a natural
/// (zero-flux) condition and stay unconstrained, as do interior nodes.
enum class NodeClass : std::uint8_t { Interior, DirichletXY, NeumannZ };

/// Uniform grid of tri-quadratic 27-node hexahedra on [0,1]^3.
/// Nodes are numbered lexicographically, x fastest: there are
/// n_axis = 2*n_e + 1 node lines per axis and n_axis^3 nodes total.
struct StructuredMesh {
  std::uint32_t n_e = 0;     // elements per axis
  std::uint32_t n_axis = 0;  // node lines per axis
  index_t n_nodes = 0;       // n_axis^3
  double h = 0.0;            // node spacing, 1/(2*n_e)
  double h_e = 0.0;          // element edge length, 1/n_e

  std::uint64_t n_elements() const {
    return std::uint64_t(n_e) * n_e * n_e;
  }
  index_t node_id(std::uint32_t ix, std::uint32_t iy, std::uint32_t iz) const {
    return ix + n_axis * (iy + std::uint64_t(n_axis) * iz);
  }
  std::array<std::uint32_t, 3> node_coords(index_t v) const {
    const std::uint32_t ix = v % n_axis;
    const std::uint32_t iy = (v / n_axis) % n_axis;
    const std::uint32_t iz = v / (std::uint32_t(n_axis) * n_axis);
    return {ix, iy, iz};
  }
};

/// Throws std::invalid_argument for n_e == 0 or sizes whose node count
/// would overflow 32-bit indexing.
StructuredMesh build_mesh(std::uint32_t n_e);

/// Global node ids of element e, local ordering x fastest then y then z
/// (local node a = ax + 3*ay + 9*az). Throws std::out_of_range for bad e.
std::array<index_t, 27> element_nodes(const StructuredMesh& mesh, std::uint64_t e);

NodeClass classify_node(const StructuredMesh& mesh, index_t v);

/// True for rows that carry an equation (everything except DirichletXY).
inline bool is_free_node(const StructuredMesh& mesh, index_t v) {
  return classify_node(mesh, v) != NodeClass::DirichletXY;
}

}  // namespace dgmres
