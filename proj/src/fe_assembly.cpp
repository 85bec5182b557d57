#include <string>

#include "modalfit/errors.hpp"
#include "modalfit/fe.hpp"

namespace modalfit::fe {

namespace {

constexpr double kPascalPerMegapascal = 1.0e6;

std::vector<Index> element_dofs(const Mesh& mesh, const Element& el) {
  std::vector<Index> dofs;
  for (int a = 0; a < mesh.nodes_per_element(); ++a) {
    for (int d = 0; d < mesh.dim; ++d) dofs.push_back(el.nodes[static_cast<std::size_t>(a)] * mesh.dim + d);
  }
  return dofs;
}

void check_materials(const Mesh& mesh, const std::vector<Material>& materials) {
  const int regions = mesh.region_count();
  if (static_cast<int>(materials.size()) < regions) {
    throw InvalidArgument("missing material for region " + std::to_string(materials.size() + 1) +
                          " (mesh has " + std::to_string(regions) + " regions, " +
                          std::to_string(materials.size()) + " materials given)");
  }
  for (std::size_t r = 0; r < materials.size(); ++r) {
    try {
      materials[r].validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("material of region " + std::to_string(r + 1) + ": " + e.what());
    }
  }
}

// Per-region unit-scale stiffness and mass values scattered into a shared pattern.
struct RegionValues {
  std::shared_ptr<const SymPattern> pattern;
  std::vector<std::vector<double>> stiffness;  // E = 1 Pa
  std::vector<std::vector<double>> mass;       // rho = 1
};

RegionValues assemble_regions(const Mesh& mesh, const std::vector<Material>& materials,
                              const std::vector<Index>& map, Index n) {
  std::vector<std::pair<Index, Index>> coords;
  for (const auto& el : mesh.elements) {
    const auto dofs = element_dofs(mesh, el);
    for (Index a : dofs) {
      for (Index b : dofs) {
        const Index i = map[static_cast<std::size_t>(a)];
        const Index j = map[static_cast<std::size_t>(b)];
        if (i >= 0 && j >= 0 && i >= j) coords.emplace_back(i, j);
      }
    }
  }
  RegionValues rv;
  rv.pattern = SymPattern::from_coordinates(n, coords);
  const auto regions = static_cast<std::size_t>(mesh.region_count());
  const auto nnz = static_cast<std::size_t>(rv.pattern->nonzeros());
  rv.stiffness.assign(regions, std::vector<double>(nnz, 0.0));
  rv.mass.assign(regions, std::vector<double>(nnz, 0.0));

  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    const auto r = static_cast<std::size_t>(el.region - 1);
    const auto em = element_matrices(mesh, e, materials[r].poisson);
    const auto dofs = element_dofs(mesh, el);
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      const Index i = map[static_cast<std::size_t>(dofs[a])];
      if (i < 0) continue;
      for (std::size_t b = 0; b < dofs.size(); ++b) {
        const Index j = map[static_cast<std::size_t>(dofs[b])];
        if (j < 0 || i < j) continue;
        const auto p = static_cast<std::size_t>(rv.pattern->find(i, j));
        rv.stiffness[r][p] += em.stiffness(static_cast<Index>(a), static_cast<Index>(b));
        rv.mass[r][p] += em.mass(static_cast<Index>(a), static_cast<Index>(b));
      }
    }
  }
  return rv;
}

std::vector<double> combine(const std::vector<std::vector<double>>& parts,
                            const std::vector<double>& weights) {
  std::vector<double> out(parts.empty() ? 0 : parts.front().size(), 0.0);
  for (std::size_t r = 0; r < parts.size(); ++r) {
    if (weights[r] == 0.0) continue;
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += weights[r] * parts[r][p];
  }
  return out;
}

}  // namespace

std::vector<Index> free_dof_map(const Mesh& mesh) {
  std::vector<Index> map(static_cast<std::size_t>(mesh.total_dofs()), 0);
  for (Index d : mesh.constrained_dofs) {
    if (d < 0 || d >= mesh.total_dofs()) throw InvalidArgument("constrained DOF out of range");
    map[static_cast<std::size_t>(d)] = -1;
  }
  Index next = 0;
  for (auto& m : map) {
    if (m == 0) m = next++;
  }
  return map;
}

std::pair<SparseSymMatrix, SparseSymMatrix> assemble_unconstrained(
    const Mesh& mesh, const std::vector<Material>& materials) {
  check_materials(mesh, materials);
  std::vector<Index> identity(static_cast<std::size_t>(mesh.total_dofs()));
  for (Index i = 0; i < mesh.total_dofs(); ++i) identity[static_cast<std::size_t>(i)] = i;
  const auto rv = assemble_regions(mesh, materials, identity, mesh.total_dofs());
  std::vector<double> ew, rw;
  for (int r = 0; r < mesh.region_count(); ++r) {
    ew.push_back(materials[static_cast<std::size_t>(r)].youngs_modulus * kPascalPerMegapascal);
    rw.push_back(materials[static_cast<std::size_t>(r)].density);
  }
  return {SparseSymMatrix(rv.pattern, combine(rv.stiffness, ew)),
          SparseSymMatrix(rv.pattern, combine(rv.mass, rw))};
}

ParametricPencil assemble_parametric(const Mesh& mesh, const std::vector<Material>& materials) {
  check_materials(mesh, materials);
  const auto map = free_dof_map(mesh);
  const auto rv = assemble_regions(mesh, materials, map, mesh.free_dofs());
  const int regions = mesh.region_count();

  std::vector<double> k0w(static_cast<std::size_t>(regions), 0.0);
  std::vector<double> m0w(static_cast<std::size_t>(regions), 0.0);
  std::vector<SparseSymMatrix> dk, dm;
  std::vector<ParameterInfo> params;
  const auto zero = std::vector<double>(static_cast<std::size_t>(rv.pattern->nonzeros()), 0.0);
  for (int r = 0; r < regions; ++r) {
    const auto& mat = materials[static_cast<std::size_t>(r)];
    const auto ri = static_cast<std::size_t>(r);
    const std::string tag = std::to_string(r + 1);
    if (mat.free_modulus) {
      std::vector<double> v = rv.stiffness[ri];
      for (double& a : v) a *= kPascalPerMegapascal;
      dk.emplace_back(rv.pattern, std::move(v));
      dm.emplace_back(rv.pattern, zero);
      params.push_back({"E" + tag, "MPa"});
    } else {
      k0w[ri] = mat.youngs_modulus * kPascalPerMegapascal;
    }
    if (mat.free_density) {
      dk.emplace_back(rv.pattern, zero);
      dm.emplace_back(rv.pattern, rv.mass[ri]);
      params.push_back({"rho" + tag, "kg/m^3"});
    } else {
      m0w[ri] = mat.density;
    }
  }
  return ParametricPencil(SparseSymMatrix(rv.pattern, combine(rv.stiffness, k0w)),
                          SparseSymMatrix(rv.pattern, combine(rv.mass, m0w)), std::move(dk),
                          std::move(dm), std::move(params));
}

}  // namespace modalfit::fe
