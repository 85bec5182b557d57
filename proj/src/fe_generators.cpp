#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "modalfit/errors.hpp"
#include "modalfit/fe.hpp"

namespace modalfit::fe {

namespace {

void require_positive(int value, const char* name) {
  if (value <= 0) {
    throw InvalidArgument(std::string("resolution parameter '") + name + "' must be positive");
  }
}

Index add_node(Mesh& mesh, double x, double y, double z = 0.0) {
  mesh.nodes.push_back({x, y, z});
  return mesh.node_count() - 1;
}

}  // namespace

std::pair<Mesh, std::vector<Material>> generate_arch_on_piers(const ArchResolution& res) {
  require_positive(res.radial, "radial");
  require_positive(res.arc, "arc");
  require_positive(res.pier_height, "pier_height");

  constexpr double kIntrados = 2.0;
  constexpr double kRing = 0.5;
  constexpr double kPierWidth = 1.0;
  constexpr double kPierHeight = 4.0;

  Mesh mesh;
  mesh.dim = 2;
  const int across = 2 * res.radial;  // pier width is twice the ring thickness

  // Pier node grids, indexed [i across][j up]; x runs outward-to-inward for the left pier.
  auto pier = [&](double x0) {
    std::vector<std::vector<Index>> ids(static_cast<std::size_t>(across) + 1);
    for (int i = 0; i <= across; ++i) {
      for (int j = 0; j <= res.pier_height; ++j) {
        ids[static_cast<std::size_t>(i)].push_back(
            add_node(mesh, x0 + kPierWidth * i / across, kPierHeight * j / res.pier_height));
      }
    }
    return ids;
  };
  const auto left = pier(-kIntrados - kPierWidth);
  const auto right = pier(kIntrados);

  // Arch ring nodes [i radial][j arc]; theta = 0 on the right springing.
  std::vector<std::vector<Index>> ring(static_cast<std::size_t>(res.radial) + 1,
                                       std::vector<Index>(static_cast<std::size_t>(res.arc) + 1));
  for (int i = 0; i <= res.radial; ++i) {
    const double r = kIntrados + kRing * i / res.radial;
    for (int j = 0; j <= res.arc; ++j) {
      Index id = -1;
      if (j == 0) {
        id = right[static_cast<std::size_t>(i)].back();
      } else if (j == res.arc) {
        id = left[static_cast<std::size_t>(across - i)].back();
      } else {
        const double t = std::numbers::pi * j / res.arc;
        id = add_node(mesh, r * std::cos(t), kPierHeight + r * std::sin(t));
      }
      ring[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = id;
    }
  }

  auto quad = [&](Index a, Index b, Index c, Index d, int region) {
    Element el;
    el.nodes = {a, b, c, d, 0, 0, 0, 0};
    el.region = region;
    mesh.elements.push_back(el);
  };
  for (int i = 0; i < res.radial; ++i) {
    for (int j = 0; j < res.arc; ++j) {
      const auto& r0 = ring[static_cast<std::size_t>(i)];
      const auto& r1 = ring[static_cast<std::size_t>(i) + 1];
      quad(r0[static_cast<std::size_t>(j)], r1[static_cast<std::size_t>(j)],
           r1[static_cast<std::size_t>(j) + 1], r0[static_cast<std::size_t>(j) + 1], 1);
    }
  }
  auto pier_elements = [&](const std::vector<std::vector<Index>>& ids, int region) {
    for (int i = 0; i < across; ++i) {
      for (int j = 0; j < res.pier_height; ++j) {
        const auto& c0 = ids[static_cast<std::size_t>(i)];
        const auto& c1 = ids[static_cast<std::size_t>(i) + 1];
        quad(c0[static_cast<std::size_t>(j)], c1[static_cast<std::size_t>(j)],
             c1[static_cast<std::size_t>(j) + 1], c0[static_cast<std::size_t>(j) + 1], region);
      }
    }
    for (int i = 0; i <= across; ++i) mesh.clamp_node(ids[static_cast<std::size_t>(i)].front());
  };
  pier_elements(left, 2);
  pier_elements(right, 3);
  mesh.validate();

  std::vector<Material> materials = {
      {3250.0, 1800.0, 0.2, false, false},
      {5000.0, 2200.0, 0.2, true, true},
      {4800.0, 2100.0, 0.2, true, false},
  };
  return {std::move(mesh), std::move(materials)};
}

std::pair<Mesh, std::vector<Material>> generate_pillared_vault(const VaultResolution& res) {
  require_positive(res.wall, "wall");
  require_positive(res.span, "span");
  require_positive(res.pillar, "pillar");
  require_positive(res.drum, "drum");
  require_positive(res.vault, "vault");

  constexpr double kHalfX = 5.0;
  constexpr double kHalfY = 5.5;
  constexpr double kWall = 1.0;
  constexpr double kPillarTop = 14.0;
  constexpr double kDrumBand = 2.0;
  constexpr double kRise = 5.0;
  constexpr double kMaxAngle = std::numbers::pi / 3.0;  // oculus where the ring has halved

  // Plan grid lines: wall band, span, wall band in each direction.
  auto grid = [&](double half) {
    std::vector<double> g;
    for (int i = 0; i < res.wall; ++i) g.push_back(-half + kWall * i / res.wall);
    for (int i = 0; i < res.span; ++i) g.push_back(-half + kWall + (2.0 * (half - kWall)) * i / res.span);
    for (int i = 0; i <= res.wall; ++i) g.push_back(half - kWall + kWall * i / res.wall);
    return g;
  };
  const auto gx = grid(kHalfX);
  const auto gy = grid(kHalfY);
  const int nx = static_cast<int>(gx.size()) - 1;
  const int ny = static_cast<int>(gy.size()) - 1;
  const int w = res.wall;

  auto in_ring_cell = [&](int i, int j) { return i < w || i >= nx - w || j < w || j >= ny - w; };
  auto in_corner_cell = [&](int i, int j) {
    return (i < w || i >= nx - w) && (j < w || j >= ny - w);
  };
  auto ring_node = [&](int i, int j) {
    return i <= w || i >= nx - w || j <= w || j >= ny - w;
  };
  auto corner_node = [&](int i, int j) {
    return (i <= w || i >= nx - w) && (j <= w || j >= ny - w);
  };

  // Vertical levels: pillar levels (z < 14) carry only corner nodes.
  struct Level {
    double z;
    double shrink;
    bool full;
  };
  std::vector<Level> levels;
  for (int k = 0; k < res.pillar; ++k) levels.push_back({kPillarTop * k / res.pillar, 1.0, false});
  for (int k = 0; k <= 2 * res.drum; ++k) {
    levels.push_back({kPillarTop + kDrumBand * k / res.drum, 1.0, true});
  }
  const double drum_top = kPillarTop + 2.0 * kDrumBand;
  for (int k = 1; k <= res.vault; ++k) {
    const double t = kMaxAngle * k / res.vault;
    levels.push_back({drum_top + kRise * std::sin(t) / std::sin(kMaxAngle), std::cos(t), true});
  }

  Mesh mesh;
  mesh.dim = 3;
  std::map<std::tuple<int, int, int>, Index> ids;
  for (int k = 0; k < static_cast<int>(levels.size()); ++k) {
    const auto& lv = levels[static_cast<std::size_t>(k)];
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        if (lv.full ? !ring_node(i, j) : !corner_node(i, j)) continue;
        ids[{i, j, k}] = add_node(mesh, lv.shrink * gx[static_cast<std::size_t>(i)],
                                  lv.shrink * gy[static_cast<std::size_t>(j)], lv.z);
      }
    }
  }
  auto id = [&](int i, int j, int k) { return ids.at({i, j, k}); };

  const int first_drum = res.pillar;
  for (int k = 0; k + 1 < static_cast<int>(levels.size()); ++k) {
    int region = 1;
    if (k < first_drum) {
      region = 4;
    } else if (k < first_drum + res.drum) {
      region = 3;
    } else if (k < first_drum + 2 * res.drum) {
      region = 2;
    }
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (region == 4 ? !in_corner_cell(i, j) : !in_ring_cell(i, j)) continue;
        Element el;
        el.nodes = {id(i, j, k),         id(i + 1, j, k),         id(i + 1, j + 1, k),
                    id(i, j + 1, k),     id(i, j, k + 1),         id(i + 1, j, k + 1),
                    id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1)};
        el.region = region;
        mesh.elements.push_back(el);
      }
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (corner_node(i, j)) mesh.clamp_node(id(i, j, 0));
    }
  }
  mesh.validate();

  std::vector<Material> materials = {
      {3000.0, 1800.0, 0.25, true, true},
      {4000.0, 2000.0, 0.25, true, true},
      {3500.0, 1900.0, 0.25, true, false},
      {5000.0, 2200.0, 0.25, true, true},
  };
  return {std::move(mesh), std::move(materials)};
}

}  // namespace modalfit::fe
