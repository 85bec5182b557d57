#include "modalfit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseSymMatrix& a) {
  const auto& pat = a.pattern();
  const auto vals = a.values();
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.dim() << ' ' << a.dim() << ' ' << a.nonzeros() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < a.dim(); ++j) {
    for (Index p = pat.col_ptr[j]; p < pat.col_ptr[j + 1]; ++p) {
      out << pat.row_idx[p] + 1 << ' ' << j + 1 << ' ' << vals[static_cast<std::size_t>(p)]
          << '\n';
    }
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseSymMatrix& a) {
  auto out = open_out(path);
  write_matrix_market(out, a);
}

void write_matrix_market(std::ostream& out, const Matrix& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) out << a(i, j) << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& a) {
  auto out = open_out(path);
  write_matrix_market(out, a);
}

SparseSymMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("matrix market: empty input");
  std::istringstream header(lower(line));
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix" || format != "coordinate") {
    throw InvalidArgument("matrix market: only 'matrix coordinate' files are supported");
  }
  if (field != "real" && field != "integer") {
    throw InvalidArgument("matrix market: unsupported field '" + field + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw InvalidArgument("matrix market: unsupported symmetry '" + symmetry + "'");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  Index rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz)) throw InvalidArgument("matrix market: bad size line");
  }
  if (rows != cols) throw DimensionError("matrix market: matrix is not square");

  std::map<std::pair<Index, Index>, double> entries;
  for (Index e = 0; e < nnz; ++e) {
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) {
      throw InvalidArgument("matrix market: expected " + std::to_string(nnz) + " entries, got " +
                            std::to_string(e));
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw IndexError("matrix market: entry (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") out of range");
    }
    entries[{i - 1, j - 1}] += v;
  }

  std::vector<Triplet> lower_entries;
  for (const auto& [key, v] : entries) {
    auto [i, j] = key;
    if (symmetry == "general") {
      if (i < j) continue;
      const auto mirror = entries.find({j, i});
      const double other = mirror == entries.end() ? 0.0 : mirror->second;
      if (other != v) {
        throw InvalidArgument("matrix market: general matrix is not symmetric at (" +
                              std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
      }
    } else if (entries.count({j, i}) && i != j) {
      throw InvalidArgument("matrix market: symmetric file stores both (" + std::to_string(i + 1) +
                            ", " + std::to_string(j + 1) + ") and its mirror");
    }
    lower_entries.push_back({std::max(i, j), std::min(i, j), v});
  }
  if (symmetry == "general") {
    for (const auto& [key, v] : entries) {
      if (key.first < key.second && !entries.count({key.second, key.first}) && v != 0.0) {
        throw InvalidArgument("matrix market: general matrix is not symmetric");
      }
    }
  }
  return SparseSymMatrix::from_triplets(rows, lower_entries);
}

SparseSymMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return read_matrix_market(in);
}

}  // namespace modalfit
