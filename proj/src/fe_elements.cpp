#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "modalfit/errors.hpp"
#include "modalfit/fe.hpp"

namespace modalfit::fe {

namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

template <int D>
constexpr int kNodes = D == 2 ? 4 : 8;

// Reference-node signs of the bilinear / trilinear shape functions.
constexpr int kSign2[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
constexpr int kSign3[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                              {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

template <int D>
int sign(int a, int d) {
  if constexpr (D == 2) {
    return kSign2[a][d];
  } else {
    return kSign3[a][d];
  }
}

template <int D>
struct ShapeAt {
  Eigen::Matrix<double, kNodes<D>, 1> n;
  Eigen::Matrix<double, kNodes<D>, D> dn;  // derivatives w.r.t. reference coordinates
};

template <int D>
ShapeAt<D> shape(const std::array<double, D>& xi) {
  ShapeAt<D> s;
  constexpr double scale = D == 2 ? 0.25 : 0.125;
  for (int a = 0; a < kNodes<D>; ++a) {
    double prod = scale;
    for (int d = 0; d < D; ++d) prod *= 1.0 + sign<D>(a, d) * xi[d];
    s.n[a] = prod;
    for (int d = 0; d < D; ++d) {
      double g = scale * sign<D>(a, d);
      for (int e = 0; e < D; ++e) {
        if (e != d) g *= 1.0 + sign<D>(a, e) * xi[e];
      }
      s.dn(a, d) = g;
    }
  }
  return s;
}

template <int D>
std::vector<std::array<double, D>> gauss_points() {
  std::vector<std::array<double, D>> pts;
  for (int a = 0; a < kNodes<D>; ++a) {
    std::array<double, D> p{};
    for (int d = 0; d < D; ++d) p[d] = sign<D>(a, d) * kGauss;
    pts.push_back(p);
  }
  return pts;  // unit weights
}

template <int D>
Eigen::Matrix<double, kNodes<D>, D> element_coords(const Mesh& mesh, Index e) {
  Eigen::Matrix<double, kNodes<D>, D> x;
  const auto& el = mesh.elements[static_cast<std::size_t>(e)];
  for (int a = 0; a < kNodes<D>; ++a) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(a)])];
    for (int d = 0; d < D; ++d) x(a, d) = p[static_cast<std::size_t>(d)];
  }
  return x;
}

template <int D>
Matrix elasticity(double nu) {
  const double c = 1.0 / ((1.0 + nu) * (1.0 - 2.0 * nu));
  constexpr int kStrain = D == 2 ? 3 : 6;
  Matrix dmat = Matrix::Zero(kStrain, kStrain);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) dmat(i, j) = c * (i == j ? 1.0 - nu : nu);
  }
  for (int i = D; i < kStrain; ++i) dmat(i, i) = c * 0.5 * (1.0 - 2.0 * nu);
  return dmat;
}

template <int D>
ElementMatrices element_matrices_impl(const Mesh& mesh, Index e, double nu) {
  constexpr int nn = kNodes<D>;
  constexpr int ndof = nn * D;
  constexpr int kStrain = D == 2 ? 3 : 6;
  const auto x = element_coords<D>(mesh, e);
  const Matrix dmat = elasticity<D>(nu);
  ElementMatrices out{Matrix::Zero(ndof, ndof), Matrix::Zero(ndof, ndof)};
  for (const auto& xi : gauss_points<D>()) {
    const auto s = shape<D>(xi);
    const Eigen::Matrix<double, D, D> jac = x.transpose() * s.dn;
    const double det = jac.determinant();
    if (!(det > 0.0)) {
      throw InvalidArgument("element " + std::to_string(e) +
                            " has a non-positive Jacobian determinant " + std::to_string(det));
    }
    const Eigen::Matrix<double, nn, D> dx = s.dn * jac.inverse();
    Matrix b = Matrix::Zero(kStrain, ndof);
    for (int a = 0; a < nn; ++a) {
      for (int d = 0; d < D; ++d) b(d, a * D + d) = dx(a, d);
      if constexpr (D == 2) {
        b(2, a * 2 + 0) = dx(a, 1);
        b(2, a * 2 + 1) = dx(a, 0);
      } else {
        b(3, a * 3 + 0) = dx(a, 1);
        b(3, a * 3 + 1) = dx(a, 0);
        b(4, a * 3 + 1) = dx(a, 2);
        b(4, a * 3 + 2) = dx(a, 1);
        b(5, a * 3 + 0) = dx(a, 2);
        b(5, a * 3 + 2) = dx(a, 0);
      }
    }
    out.stiffness.noalias() += det * b.transpose() * dmat * b;
    for (int a = 0; a < nn; ++a) {
      for (int c = 0; c < nn; ++c) {
        const double v = det * s.n[a] * s.n[c];
        for (int d = 0; d < D; ++d) out.mass(a * D + d, c * D + d) += v;
      }
    }
  }
  return out;
}

template <int D>
double element_volume(const Mesh& mesh, Index e) {
  const auto x = element_coords<D>(mesh, e);
  double vol = 0.0;
  for (const auto& xi : gauss_points<D>()) {
    const auto s = shape<D>(xi);
    const Eigen::Matrix<double, D, D> jac = x.transpose() * s.dn;
    vol += jac.determinant();
  }
  return vol;
}

template <int D>
void check_jacobians(const Mesh& mesh, Index e) {
  const auto x = element_coords<D>(mesh, e);
  for (const auto& xi : gauss_points<D>()) {
    const auto s = shape<D>(xi);
    const Eigen::Matrix<double, D, D> jac = x.transpose() * s.dn;
    if (!(jac.determinant() > 0.0)) {
      throw InvalidArgument("element " + std::to_string(e) +
                            " is inverted or degenerate (Jacobian determinant " +
                            std::to_string(jac.determinant()) + ")");
    }
  }
}

}  // namespace

int Mesh::region_count() const {
  int r = 0;
  for (const auto& el : elements) r = std::max(r, el.region);
  return r;
}

void Mesh::clamp_node(Index node) {
  for (int d = 0; d < dim; ++d) constrained_dofs.push_back(node * dim + d);
}

void Mesh::validate() {
  if (dim != 2 && dim != 3) throw InvalidArgument("mesh dimension must be 2 or 3");
  std::sort(constrained_dofs.begin(), constrained_dofs.end());
  constrained_dofs.erase(std::unique(constrained_dofs.begin(), constrained_dofs.end()),
                         constrained_dofs.end());
  if (!constrained_dofs.empty() &&
      (constrained_dofs.front() < 0 || constrained_dofs.back() >= total_dofs())) {
    throw InvalidArgument("constrained degree of freedom out of range");
  }
  const int regions = region_count();
  std::vector<bool> seen(static_cast<std::size_t>(regions) + 1, false);
  for (Index e = 0; e < element_count(); ++e) {
    const auto& el = elements[static_cast<std::size_t>(e)];
    if (el.region < 1) {
      throw InvalidArgument("element " + std::to_string(e) + " has region id " +
                            std::to_string(el.region) + " (ids start at 1)");
    }
    seen[static_cast<std::size_t>(el.region)] = true;
    for (int a = 0; a < nodes_per_element(); ++a) {
      const Index node = el.nodes[static_cast<std::size_t>(a)];
      if (node < 0 || node >= node_count()) {
        throw InvalidArgument("element " + std::to_string(e) + " references node " +
                              std::to_string(node) + " outside [0, " +
                              std::to_string(node_count()) + ")");
      }
    }
    if (dim == 2) {
      check_jacobians<2>(*this, e);
    } else {
      check_jacobians<3>(*this, e);
    }
  }
  for (int r = 1; r <= regions; ++r) {
    if (!seen[static_cast<std::size_t>(r)]) {
      throw InvalidArgument("region ids are not contiguous: region " + std::to_string(r) +
                            " has no elements");
    }
  }
}

void Material::validate() const {
  if (!(youngs_modulus > 0.0)) throw InvalidArgument("Young's modulus must be positive");
  if (!(density > 0.0)) throw InvalidArgument("density must be positive");
  if (!(poisson >= 0.0 && poisson < 0.5)) {
    throw InvalidArgument("Poisson's ratio must lie in [0, 0.5)");
  }
}

ElementMatrices element_matrices(const Mesh& mesh, Index element, double poisson) {
  if (element < 0 || element >= mesh.element_count()) {
    throw IndexError("element index " + std::to_string(element) + " out of range");
  }
  return mesh.dim == 2 ? element_matrices_impl<2>(mesh, element, poisson)
                       : element_matrices_impl<3>(mesh, element, poisson);
}

std::vector<double> region_volumes(const Mesh& mesh) {
  std::vector<double> vol(static_cast<std::size_t>(mesh.region_count()), 0.0);
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const double v = mesh.dim == 2 ? element_volume<2>(mesh, e) : element_volume<3>(mesh, e);
    vol[static_cast<std::size_t>(mesh.elements[static_cast<std::size_t>(e)].region - 1)] += v;
  }
  return vol;
}

}  // namespace modalfit::fe
