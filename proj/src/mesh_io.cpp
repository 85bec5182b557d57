// Mesh text format, whitespace separated, '#' starts a comment line:
//
//   modalfit-mesh 1
//   dim <2|3>
//   nodes <N>
//   <x> <y> [<z>]                     N lines, coordinates in metres
//   elements <E>
//   <region> <n0> ... <n3|n7>         E lines, 0-based node ids, region ids from 1
//   constraints <C>
//   <node> <component>                C lines, component in [0, dim)
//
// Node order inside an element follows the usual counter-clockwise (quad) or
// bottom-face-then-top-face (hex) convention.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "modalfit/errors.hpp"
#include "modalfit/fe.hpp"

namespace modalfit::fe {

namespace {

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word(const char* what) {
    std::string w;
    while (true) {
      if (!(in_ >> w)) throw InvalidArgument(std::string("mesh: unexpected end of input reading ") + what);
      if (w[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return w;
    }
  }

  template <typename T>
  T number(const char* what) {
    const std::string w = word(what);
    std::istringstream ss(w);
    T v{};
    if (!(ss >> v) || !ss.eof()) throw InvalidArgument("mesh: bad " + std::string(what) + " '" + w + "'");
    return v;
  }

  void expect(const std::string& keyword) {
    const std::string w = word(keyword.c_str());
    if (w != keyword) throw InvalidArgument("mesh: expected '" + keyword + "', found '" + w + "'");
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "modalfit-mesh 1\n";
  out << "dim " << mesh.dim << '\n';
  out << "nodes " << mesh.node_count() << '\n' << std::setprecision(17);
  for (const auto& p : mesh.nodes) {
    out << p[0] << ' ' << p[1];
    if (mesh.dim == 3) out << ' ' << p[2];
    out << '\n';
  }
  out << "elements " << mesh.element_count() << '\n';
  for (const auto& el : mesh.elements) {
    out << el.region;
    for (int a = 0; a < mesh.nodes_per_element(); ++a) out << ' ' << el.nodes[static_cast<std::size_t>(a)];
    out << '\n';
  }
  out << "constraints " << mesh.constrained_dofs.size() << '\n';
  for (Index d : mesh.constrained_dofs) out << d / mesh.dim << ' ' << d % mesh.dim << '\n';
}

void write_mesh(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  write_mesh(out, mesh);
}

Mesh read_mesh(std::istream& in) {
  Reader r(in);
  r.expect("modalfit-mesh");
  if (const int version = r.number<int>("format version"); version != 1) {
    throw InvalidArgument("mesh: unsupported format version " + std::to_string(version));
  }
  Mesh mesh;
  r.expect("dim");
  mesh.dim = r.number<int>("dimension");
  if (mesh.dim != 2 && mesh.dim != 3) throw InvalidArgument("mesh: dimension must be 2 or 3");
  r.expect("nodes");
  const auto nn = r.number<Index>("node count");
  for (Index i = 0; i < nn; ++i) {
    std::array<double, 3> p{};
    for (int d = 0; d < mesh.dim; ++d) p[static_cast<std::size_t>(d)] = r.number<double>("coordinate");
    mesh.nodes.push_back(p);
  }
  r.expect("elements");
  const auto ne = r.number<Index>("element count");
  for (Index e = 0; e < ne; ++e) {
    Element el;
    el.region = r.number<int>("region id");
    for (int a = 0; a < mesh.nodes_per_element(); ++a) el.nodes[static_cast<std::size_t>(a)] = r.number<Index>("node id");
    mesh.elements.push_back(el);
  }
  r.expect("constraints");
  const auto nc = r.number<Index>("constraint count");
  for (Index c = 0; c < nc; ++c) {
    const auto node = r.number<Index>("constrained node");
    const auto comp = r.number<int>("constrained component");
    if (node < 0 || node >= mesh.node_count() || comp < 0 || comp >= mesh.dim) {
      throw InvalidArgument("mesh: constraint (" + std::to_string(node) + ", " + std::to_string(comp) +
                            ") out of range");
    }
    mesh.constrained_dofs.push_back(node * mesh.dim + comp);
  }
  mesh.validate();
  return mesh;
}

Mesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open mesh file " + path.string());
  return read_mesh(in);
}

}  // namespace modalfit::fe
