#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "modalfit/pencil.hpp"
#include "modalfit/sparse_matrix.hpp"

namespace modalfit::fe {

/// 4-node quadrilateral (dim 2) or 8-node hexahedron (dim 3) with a region tag.
struct Element {
  std::array<Index, 8> nodes{};
  int region = 1;
};

/// Structured-or-not linear element mesh. Degree of freedom `node * dim + component`.
struct Mesh {
  int dim = 2;
  std::vector<std::array<double, 3>> nodes;
  std::vector<Element> elements;
  std::vector<Index> constrained_dofs;  // sorted, unique

  Index node_count() const { return static_cast<Index>(nodes.size()); }
  Index element_count() const { return static_cast<Index>(elements.size()); }
  int nodes_per_element() const { return dim == 2 ? 4 : 8; }
  Index total_dofs() const { return node_count() * dim; }
  Index free_dofs() const { return total_dofs() - static_cast<Index>(constrained_dofs.size()); }
  /// Largest region id; regions are 1..region_count().
  int region_count() const;

  /// Fixes every component of the given node.
  void clamp_node(Index node);
  /// Sorts and deduplicates constraints, then checks every invariant: valid node
  /// references, contiguous region ids from 1, constraint indices in range, positive
  /// Jacobian at all quadrature points. Throws InvalidArgument.
  void validate();
};

struct Material {
  double youngs_modulus = 1.0;  // MPa
  double density = 1.0;         // kg/m^3
  double poisson = 0.0;
  bool free_modulus = false;
  bool free_density = false;

  void validate() const;
};

/// Physical volume of each region (index r - 1) by Gauss quadrature.
std::vector<double> region_volumes(const Mesh& mesh);

/// Element matrices for unit material scale: stiffness at E = 1 Pa, mass at rho = 1.
struct ElementMatrices {
  Matrix stiffness;
  Matrix mass;
};
ElementMatrices element_matrices(const Mesh& mesh, Index element, double poisson);

/// Full (unconstrained) K and M at the materials' current values; rigid-body modes intact.
std::pair<SparseSymMatrix, SparseSymMatrix> assemble_unconstrained(
    const Mesh& mesh, const std::vector<Material>& materials);

/// Parametric pencil with constrained DOFs eliminated. Free moduli become parameters
/// "E<r>" in MPa, free densities "rho<r>" in kg/m^3, ordered by region and E before rho.
ParametricPencil assemble_parametric(const Mesh& mesh, const std::vector<Material>& materials);

/// Index of each unconstrained DOF in the eliminated system, -1 for fixed DOFs.
std::vector<Index> free_dof_map(const Mesh& mesh);

struct ArchResolution {
  int radial = 3;        // elements through the arch ring; piers get twice as many across
  int arc = 76;          // elements along the semicircle
  int pier_height = 9;   // elements along each pier
};

/// Semicircular arch (4 m clear span, 0.5 m ring) on two 1 m x 4 m piers, plane strain,
/// unit thickness. Region 1 = arch, 2 = left pier, 3 = right pier. Pier bases clamped.
/// Materials carry the reference values with E2, rho2, E3 flagged free.
std::pair<Mesh, std::vector<Material>> generate_arch_on_piers(const ArchResolution& res = {});

struct VaultResolution {
  int wall = 2;          // elements through wall thickness
  int span = 8;          // elements along each side between corner blocks
  int pillar = 7;        // elements along the pillar height
  int drum = 2;          // elements per drum band (upper and lower)
  int vault = 4;         // elements along the vault rise
};

/// Rectangular cloister-vault analogue: four 1 m x 1 m x 14 m corner pillars carrying a
/// 10 m x 11 m drum ring (1 m wall; lower band 14-16 m, upper band 16-18 m) closed by a
/// vault rising 5 m to an oculus. Hexahedral elements. Regions: 1 vault, 2 upper drum,
/// 3 lower drum, 4 pillars. Pillar bases clamped. Materials carry reference values with
/// all moduli and densities free except rho3.
std::pair<Mesh, std::vector<Material>> generate_pillared_vault(const VaultResolution& res = {});

/// Plain-text mesh format ("modalfit-mesh 1"): see mesh_io.cpp.
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::filesystem::path& path, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::filesystem::path& path);

}  // namespace modalfit::fe
