#include "derham/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

namespace derham {

namespace {

std::vector<std::vector<int>> subsets(const std::vector<int>& v, int size) {
  std::vector<std::vector<int>> out;
  for (const auto& idx : form_indices(static_cast<int>(v.size()), size)) {
    std::vector<int> s;
    for (int i : idx) s.push_back(v[i]);
    out.push_back(s);
  }
  return out;
}

Vec cross3(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
  return c;
}

std::atomic<double> g_rotation{0.0};

}  // namespace

int SimplicialMesh::find(const std::vector<int>& sorted) const {
  const int d = static_cast<int>(sorted.size()) - 1;
  if (d < 0 || d > dim) return -1;
  auto it = lookup[d].find(sorted);
  return it == lookup[d].end() ? -1 : it->second;
}

Simplex SimplicialMesh::cell_simplex(int c) const { return simplex(dim, c); }

Simplex SimplicialMesh::simplex(int d, int id) const {
  std::vector<Vec> pts;
  for (int v : simplices[d][id]) pts.push_back(vertices[v]);
  return Simplex(pts);
}

bool SimplicialMesh::has_boundary() const {
  if (dim == 0) return false;
  return std::any_of(on_boundary[dim - 1].begin(), on_boundary[dim - 1].end(), [](bool b) { return b; });
}

SimplicialMesh build_mesh(std::vector<Vec> vertices, std::vector<std::vector<int>> cells) {
  if (cells.empty()) throw std::invalid_argument("build_mesh: no cells");
  const int n = static_cast<int>(cells[0].size()) - 1;
  if (n < 1 || n > 3) throw std::invalid_argument("build_mesh: cells must have 2, 3 or 4 vertices");
  for (const auto& v : vertices)
    if (v.size() != n) throw std::invalid_argument("build_mesh: vertex dimension differs from cell dimension");

  SimplicialMesh m;
  m.dim = n;
  m.vertices = std::move(vertices);
  std::set<std::vector<int>> seen;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto cell = cells[c];
    if (static_cast<int>(cell.size()) != n + 1)
      throw std::invalid_argument("build_mesh: cell " + std::to_string(c) + " has the wrong vertex count");
    for (int v : cell)
      if (v < 0 || v >= static_cast<int>(m.vertices.size()))
        throw std::invalid_argument("build_mesh: cell " + std::to_string(c) + " references a missing vertex");
    std::sort(cell.begin(), cell.end());
    if (std::adjacent_find(cell.begin(), cell.end()) != cell.end() || !seen.insert(cell).second)
      throw std::invalid_argument("build_mesh: duplicate cell " + std::to_string(c));
    std::vector<Vec> pts;
    for (int v : cell) pts.push_back(m.vertices[v]);
    Mat e(n, n);
    for (int i = 1; i <= n; ++i) e.col(i - 1) = pts[i] - pts[0];
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale *= e.col(i).norm();
    if (scale == 0.0 || std::abs(e.determinant()) <= 1e-12 * scale)
      throw std::invalid_argument("build_mesh: cell " + std::to_string(c) + " is degenerate");
    m.cells.push_back(cell);
  }

  m.simplices.assign(n + 1, {});
  m.lookup.assign(n + 1, {});
  for (int d = 0; d <= n; ++d) {
    std::set<std::vector<int>> all;
    for (const auto& cell : m.cells)
      for (auto& s : subsets(cell, d + 1)) all.insert(s);
    for (const auto& s : all) {
      m.lookup[d][s] = static_cast<int>(m.simplices[d].size());
      m.simplices[d].push_back(s);
    }
  }
  // Keep top cells in the skeleton order so cell ids agree with simplices[n].
  m.cells = m.simplices[n];

  m.faces_of.assign(n + 1, {});
  m.cofaces.assign(n + 1, {});
  m.cells_around.assign(n + 1, {});
  for (int d = 0; d <= n; ++d) {
    m.faces_of[d].assign(m.count(d), {});
    m.cofaces[d].assign(m.count(d), {});
    m.cells_around[d].assign(m.count(d), {});
  }
  for (int d = 1; d <= n; ++d)
    for (int id = 0; id < m.count(d); ++id) {
      const auto& s = m.simplices[d][id];
      for (int j = 0; j <= d; ++j) {
        std::vector<int> f = s;
        f.erase(f.begin() + j);
        const int fid = m.lookup[d - 1].at(f);
        m.faces_of[d][id].push_back(fid);
        m.cofaces[d - 1][fid].push_back(id);
      }
    }
  for (int c = 0; c < m.count(n); ++c)
    for (int d = 0; d <= n; ++d)
      for (const auto& s : subsets(m.simplices[n][c], d + 1)) m.cells_around[d][m.lookup[d].at(s)].push_back(c);

  m.on_boundary.assign(n + 1, {});
  for (int d = 0; d <= n; ++d) m.on_boundary[d].assign(m.count(d), false);
  for (int f = 0; f < m.count(n - 1); ++f) {
    const auto nc = m.cofaces[n - 1][f].size();
    if (nc > 2) throw std::invalid_argument("build_mesh: facet shared by more than two cells");
    if (nc == 1) {
      m.on_boundary[n - 1][f] = true;
      const auto& s = m.simplices[n - 1][f];
      for (int d = 0; d < n - 1; ++d)
        for (const auto& t : subsets(s, d + 1)) m.on_boundary[d][m.lookup[d].at(t)] = true;
    }
  }
  return m;
}

int euler_characteristic(const SimplicialMesh& m) {
  int chi = 0;
  for (int d = 0; d <= m.dim; ++d) chi += (d % 2 ? -1 : 1) * m.count(d);
  return chi;
}

// ---------------------------------------------------------------- frames

void set_edge_normal_rotation(double angle) { g_rotation.store(angle); }
double edge_normal_rotation() { return g_rotation.load(); }

Frame edge_frame(const Vec& a, const Vec& b) {
  Frame f;
  Vec t = b - a;
  f.tangent = t / t.norm();
  const long n = a.size();
  if (n == 2) {
    Vec nu(2);
    nu << -f.tangent(1), f.tangent(0);
    f.normals.push_back(nu);
  } else if (n == 3) {
    Vec ref = Vec::Zero(3);
    ref(0) = 1.0;
    if (std::abs(f.tangent.dot(ref)) > 0.9) {
      ref.setZero();
      ref(1) = 1.0;
    }
    Vec n1 = ref - ref.dot(f.tangent) * f.tangent;
    n1 /= n1.norm();
    Vec n2 = cross3(f.tangent, n1);
    const double th = g_rotation.load();
    if (th != 0.0) {
      Vec r1 = std::cos(th) * n1 + std::sin(th) * n2;
      Vec r2 = -std::sin(th) * n1 + std::cos(th) * n2;
      n1 = r1;
      n2 = r2;
    }
    f.normals = {n1, n2};
  }
  return f;
}

Frame face_frame(const Vec& a, const Vec& b, const Vec& c) {
  if (a.size() != 3) throw std::invalid_argument("face_frame: faces carry frames only in 3D");
  Frame f;
  Vec nu = cross3(b - a, c - a);
  f.normal = nu / nu.norm();
  Vec t1 = (b - a) / (b - a).norm();
  f.tangents = {t1, cross3(f.normal, t1)};
  return f;
}

Frame simplex_frame(const SimplicialMesh& m, int d, int id) {
  const auto& s = m.simplices.at(d).at(id);
  if (d == 1) return edge_frame(m.vertices[s[0]], m.vertices[s[1]]);
  if (d == 2 && m.dim == 3) return face_frame(m.vertices[s[0]], m.vertices[s[1]], m.vertices[s[2]]);
  throw std::invalid_argument("simplex_frame: only edges and 3D faces carry frames");
}

// ---------------------------------------------------------------- boundary

BoundaryClassification classify_boundary(const SimplicialMesh& m, double tol) {
  BoundaryClassification bc;
  const int n = m.dim;
  for (int v = 0; v < m.count(0); ++v)
    if (m.on_boundary[0][v]) bc.boundary_vertices.push_back(v);
  if (n == 1) {
    bc.has_corner_notion = false;
    return bc;
  }
  for (int e = 0; e < m.count(1); ++e)
    if (m.on_boundary[1][e]) bc.boundary_edges.push_back(e);
  if (n == 3)
    for (int f = 0; f < m.count(2); ++f)
      if (m.on_boundary[2][f]) bc.boundary_faces.push_back(f);

  auto facet_normal = [&](int f) {
    const auto& s = m.simplices[n - 1][f];
    if (n == 2) {
      Vec t = m.vertices[s[1]] - m.vertices[s[0]];
      Vec nu(2);
      nu << -t(1), t(0);
      return Vec(nu / nu.norm());
    }
    Vec nu = cross3(m.vertices[s[1]] - m.vertices[s[0]], m.vertices[s[2]] - m.vertices[s[0]]);
    return Vec(nu / nu.norm());
  };
  auto parallel = [&](const Vec& a, const Vec& b) {
    const double s = n == 2 ? std::abs(a(0) * b(1) - a(1) * b(0)) : cross3(a, b).norm();
    return s <= tol;
  };

  for (int v : bc.boundary_vertices) {
    std::vector<Vec> normals;
    for (int f = 0; f < m.count(n - 1); ++f) {
      if (!m.on_boundary[n - 1][f]) continue;
      const auto& s = m.simplices[n - 1][f];
      if (std::find(s.begin(), s.end(), v) != s.end()) normals.push_back(facet_normal(f));
    }
    bool corner = normals.size() < 2;
    for (std::size_t i = 1; i < normals.size() && !corner; ++i)
      if (!parallel(normals[0], normals[i])) corner = true;
    (corner ? bc.corner_vertices : bc.noncorner_vertices).push_back(v);
  }
  if (n == 3)
    for (int e : bc.boundary_edges) {
      std::vector<Vec> normals;
      for (int f : m.cofaces[1][e])
        if (m.on_boundary[2][f]) normals.push_back(facet_normal(f));
      bool corner = normals.size() != 2 || !parallel(normals[0], normals[1]);
      (corner ? bc.corner_edges : bc.noncorner_edges).push_back(e);
    }
  return bc;
}

// ---------------------------------------------------------------- generators

SimplicialMesh fourteen_tet_grid(int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("fourteen_tet_grid: counts must be >= 1");
  std::vector<Vec> verts;
  auto corner = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) verts.push_back(Eigen::Vector3d(i, j, k));
  const int base = static_cast<int>(verts.size());
  auto centre = [&](int i, int j, int k) { return base + (k * ny + j) * nx + i; };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) verts.push_back(Eigen::Vector3d(i + 0.5, j + 0.5, k + 0.5));

  std::vector<std::vector<int>> cells;
  const int dims[3] = {nx, ny, nz};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int c = centre(i, j, k);
        const int idx[3] = {i, j, k};
        for (int axis = 0; axis < 3; ++axis)
          for (int side = 0; side < 2; ++side) {
            // the four corners of this face, in cyclic order
            const int a1 = (axis + 1) % 3;
            const int a2 = (axis + 2) % 3;
            std::vector<int> quad;
            const int cyc[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
            for (const auto& uv : cyc) {
              int p[3];
              p[axis] = idx[axis] + side;
              p[a1] = idx[a1] + uv[0];
              p[a2] = idx[a2] + uv[1];
              quad.push_back(corner(p[0], p[1], p[2]));
            }
            int nb[3] = {i, j, k};
            nb[axis] += side ? 1 : -1;
            const bool interior = nb[axis] >= 0 && nb[axis] < dims[axis];
            int apex;
            if (interior) {
              if (side == 0) continue;  // handled from the lower neighbour
              apex = centre(nb[0], nb[1], nb[2]);
            } else {
              Vec fc = Vec::Zero(3);
              for (int q : quad) fc += verts[q];
              fc /= 4.0;
              apex = static_cast<int>(verts.size());
              verts.push_back(fc);
            }
            for (int e = 0; e < 4; ++e) cells.push_back({c, apex, quad[e], quad[(e + 1) % 4]});
          }
      }
  return build_mesh(verts, cells);
}

namespace meshes {

namespace {
Vec v2(double x, double y) { return Eigen::Vector2d(x, y); }
Vec v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }
}  // namespace

SimplicialMesh single_simplex(int n) {
  Simplex r = Simplex::reference(n);
  std::vector<int> cell;
  for (int i = 0; i <= n; ++i) cell.push_back(i);
  return build_mesh(r.vertices(), {cell});
}

SimplicialMesh interval_chain(int segments) {
  std::vector<Vec> v;
  std::vector<std::vector<int>> c;
  double x = 0.0;
  for (int i = 0; i <= segments; ++i) {
    Vec p(1);
    p << x;
    v.push_back(p);
    x += 0.7 + 0.15 * i;
    if (i < segments) c.push_back({i, i + 1});
  }
  return build_mesh(v, c);
}

SimplicialMesh two_triangle_square() {
  return build_mesh({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)}, {{0, 1, 2}, {0, 2, 3}});
}

SimplicialMesh three_triangle_square() {
  return build_mesh({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1), v2(0.5, 0)}, {{0, 4, 3}, {4, 1, 2}, {4, 2, 3}});
}

SimplicialMesh annulus() {
  return build_mesh({v2(0, 0), v2(3, 0), v2(3, 3), v2(0, 3), v2(1, 1), v2(2, 1), v2(2, 2), v2(1, 2)},
                    {{0, 1, 5}, {0, 5, 4}, {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}});
}

SimplicialMesh two_tets() {
  return build_mesh({v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1), v3(1, 1, 1)}, {{0, 1, 2, 3}, {1, 2, 3, 4}});
}

SimplicialMesh three_tets_edge() {
  return build_mesh({v3(0, 0, 0), v3(0, 0, 1), v3(1, 0, 0.5), v3(0, 1, 0.4), v3(-1, 0.1, 0.5), v3(0.1, -1, 0.6)},
                    {{0, 1, 2, 3}, {0, 1, 3, 4}, {0, 1, 4, 5}});
}

std::vector<std::pair<std::string, SimplicialMesh>> contractible(int n) {
  if (n == 1) return {{"interval", single_simplex(1)}, {"chain2", interval_chain(2)}, {"chain3", interval_chain(3)}};
  if (n == 2)
    return {{"triangle", single_simplex(2)}, {"square2", two_triangle_square()}, {"square3", three_triangle_square()}};
  return {{"tet", single_simplex(3)}, {"two_tets", two_tets()}, {"three_tets", three_tets_edge()}};
}

SimplicialMesh by_name(const std::string& name) {
  if (name == "interval") return single_simplex(1);
  if (name == "chain2") return interval_chain(2);
  if (name == "chain3") return interval_chain(3);
  if (name == "triangle") return single_simplex(2);
  if (name == "square2") return two_triangle_square();
  if (name == "square3") return three_triangle_square();
  if (name == "annulus") return annulus();
  if (name == "tet") return single_simplex(3);
  if (name == "two_tets") return two_tets();
  if (name == "three_tets") return three_tets_edge();
  throw std::invalid_argument("unknown builtin mesh '" + name + "'");
}

}  // namespace meshes

}  // namespace derham
