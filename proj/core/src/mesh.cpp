#include "uweno/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "uweno/errors.hpp"
#include "uweno/geometry.hpp"

namespace uweno {

namespace {

std::array<Vec2, 4> cell_polygon(const Mesh& mesh, const Cell& c) {
  std::array<Vec2, 4> p{};
  for (int k = 0; k < c.n_nodes(); ++k) p[k] = {mesh.nodes[c.nodes[k]].x, mesh.nodes[c.nodes[k]].y};
  return p;
}

}  // namespace

int Mesh::tag_id(const std::string& name) const {
  for (size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == name) return static_cast<int>(i);
  return -1;
}

Mesh build_connectivity(std::vector<Node> nodes, const std::vector<CellSpec>& cells,
                        const std::vector<BoundarySpec>& boundary) {
  Mesh mesh;
  mesh.nodes = std::move(nodes);
  const int n_nodes = static_cast<int>(mesh.nodes.size());

  mesh.cells.reserve(cells.size());
  mesh.cell_face_offset.assign(cells.size() + 1, 0);

  // Pass 1: validate cells, compute geometry.
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    const CellSpec& spec = cells[ci];
    Cell c;
    c.kind = spec.kind;
    c.nodes = spec.nodes;
    std::array<Vec2, 4> poly{};
    for (int k = 0; k < c.n_nodes(); ++k) {
      const int nid = c.nodes[k];
      if (nid < 0 || nid >= n_nodes)
        throw topology_error("cell " + std::to_string(ci) + " references invalid node " +
                             std::to_string(nid));
      poly[k] = {mesh.nodes[nid].x, mesh.nodes[nid].y};
    }
    const double area = polygon_area(std::span<const Vec2>(poly.data(), c.n_nodes()));
    if (!(area > 0.0))
      throw geometry_error("cell " + std::to_string(ci) +
                           " has non-positive area (nodes must be counter-clockwise)");
    c.area = area;
    c.centroid = polygon_centroid(std::span<const Vec2>(poly.data(), c.n_nodes()));
    mesh.cells.push_back(c);
    mesh.total_area += area;
    mesh.cell_face_offset[ci + 1] = mesh.cell_face_offset[ci] + c.n_nodes();
  }
  mesh.cell_face_ids.assign(mesh.cell_face_offset.back(), -1);

  // Pass 2: enumerate faces once, keyed by the unordered node pair.
  std::map<std::pair<int, int>, int> by_pair;
  for (int ci = 0; ci < mesh.n_cells(); ++ci) {
    const Cell& c = mesh.cells[ci];
    const int k = c.n_nodes();
    for (int e = 0; e < k; ++e) {
      const int a = c.nodes[e];
      const int b = c.nodes[(e + 1) % k];
      const auto key = std::minmax(a, b);
      auto it = by_pair.find(key);
      if (it == by_pair.end()) {
        Face f;
        f.nodes = {a, b};
        f.left = ci;
        f.left_local = static_cast<int8_t>(e);
        const Vec2 pa{mesh.nodes[a].x, mesh.nodes[a].y};
        const Vec2 pb{mesh.nodes[b].x, mesh.nodes[b].y};
        const Vec2 d = pb - pa;
        f.length = norm(d);
        if (f.length < 1e-300) throw geometry_error("zero-length face");
        f.normal = {d.y / f.length, -d.x / f.length};
        f.midpoint = 0.5 * (pa + pb);
        by_pair.emplace(key, mesh.n_faces());
        mesh.cell_face_ids[mesh.cell_face_offset[ci] + e] = mesh.n_faces();
        mesh.faces.push_back(f);
      } else {
        Face& f = mesh.faces[it->second];
        if (f.right >= 0)
          throw topology_error("face (" + std::to_string(a) + "," + std::to_string(b) +
                               ") shared by more than two cells");
        if (f.nodes[0] == a)
          throw topology_error("cells " + std::to_string(f.left) + " and " + std::to_string(ci) +
                               " traverse a shared face in the same direction");
        f.right = ci;
        f.right_local = static_cast<int8_t>(e);
        mesh.cell_face_ids[mesh.cell_face_offset[ci] + e] = it->second;
      }
    }
  }

  // Boundary tags.
  for (const BoundarySpec& bs : boundary) {
    const auto key = std::minmax(bs.a, bs.b);
    auto it = by_pair.find(key);
    if (it == by_pair.end())
      throw topology_error("boundary tag '" + bs.tag + "' names a nonexistent face");
    Face& f = mesh.faces[it->second];
    if (!f.is_boundary())
      throw topology_error("boundary tag '" + bs.tag + "' names an interior face");
    int tid = mesh.tag_id(bs.tag);
    if (tid < 0) {
      tid = static_cast<int>(mesh.tags.size());
      mesh.tags.push_back(bs.tag);
    }
    f.tag = tid;
  }

  return mesh;
}

// ---------------------------------------------------------------------------
// Stencil selection.
// ---------------------------------------------------------------------------

namespace {

struct Member {
  int id = -1;
  Vec2 shift{};
};

// Neighbor of `cell` across its local face `lf`, with the periodic shift
// accumulated on top of the cell's own shift.
Member neighbor_member(const Mesh& mesh, int cell, int lf, Vec2 base_shift) {
  const Face& f = mesh.faces[mesh.face_of(cell, lf)];
  Member m;
  if (f.left == cell) {
    m.id = f.right;
    m.shift = base_shift + f.shift;
  } else {
    m.id = f.left;
    m.shift = base_shift - f.shift;
  }
  return m;
}

bool same_member(const Member& a, int id, Vec2 shift) {
  return a.id == id && a.shift.x == shift.x && a.shift.y == shift.y;
}

// The two "children" of a first-ring member: its neighbors across the faces
// counter-clockwise after the face it shares with the owner. Enumerating
// relative to the shared face keeps the choice independent of where the
// parent's node list happens to start.
std::array<Member, 2> children_of(const Mesh& mesh, const Member& parent, int shared_local) {
  const int k = mesh.cells[parent.id].n_nodes();
  std::array<Member, 2> out;
  out[0] = neighbor_member(mesh, parent.id, (shared_local + 1) % k, parent.shift);
  out[1] = neighbor_member(mesh, parent.id, (shared_local + 2) % k, parent.shift);
  return out;
}

}  // namespace

Stencil select_stencil(const Mesh& mesh, int cell, StencilPolicy policy) {
  const Cell& c = mesh.cells[cell];
  const bool quad = c.kind == CellKind::quadrilateral;
  const int ring1 = quad ? 4 : 3;

  Stencil st;
  st.owner = cell;
  st.m = quad ? 12 : 9;

  // First ring: neighbors across the owner's local faces, in order.
  std::array<int, 4> shared_local{};  // local index of the shared face inside the neighbor
  for (int j = 1; j <= ring1; ++j) {
    const Face& f = mesh.faces[mesh.face_of(cell, j - 1)];
    Member nb = neighbor_member(mesh, cell, j - 1, {0, 0});
    if (nb.id < 0) {
      if (policy == StencilPolicy::strict)
        throw topology_error("cell " + std::to_string(cell) +
                             " lacks a face neighbor; stencil requires the full first ring");
      st.id[j - 1] = cell;
      st.exists[j - 1] = 0;
      st.canon[j - 1] = 0;
      continue;
    }
    st.id[j - 1] = nb.id;
    st.exists[j - 1] = 1;
    st.shift[j - 1] = nb.shift;
    st.canon[j - 1] = static_cast<int8_t>(j);
    shared_local[j - 1] = f.left == cell ? f.right_local : f.left_local;
  }

  // Children per parent slot, counter-clockwise after the shared face.
  std::array<std::array<Member, 2>, 4> kids{};
  std::array<bool, 4> have_kids{};
  for (int p = 0; p < ring1; ++p) {
    if (!st.exists[p]) continue;
    kids[p] = children_of(mesh, Member{st.id[p], st.shift[p]}, shared_local[p]);
    have_kids[p] = true;
  }

  // Second ring slot -> (parent slot, which child). Quads fill 5,6 from i1 and
  // 7,8 from i3 first, then 10,11 from i2 and 9,12 from i4; missing entries of
  // the first group fall back to the owner, of the second group to slot j-4.
  // Triangles: 4,5,6 are the first children of i1,i2,i3 (owner fallback),
  // 7,8,9 the second children of i3,i1,i2 (fallback to slot j-3).
  struct SlotPlan {
    int slot, parent, child, fallback;  // fallback < 0: owner
  };
  std::array<SlotPlan, 8> plan{};
  int n_plan = 0;
  if (quad) {
    plan = {{{5, 1, 0, -1},
             {6, 1, 1, -1},
             {7, 3, 0, -1},
             {8, 3, 1, -1},
             {10, 2, 0, 6},
             {11, 2, 1, 7},
             {9, 4, 0, 5},
             {12, 4, 1, 8}}};
    n_plan = 8;
  } else {
    plan = {{{4, 1, 0, -1},
             {5, 2, 0, -1},
             {6, 3, 0, -1},
             {7, 3, 1, 4},
             {8, 1, 1, 5},
             {9, 2, 1, 6}}};
    n_plan = 6;
  }

  for (int q = 0; q < n_plan; ++q) {
    const SlotPlan& sp = plan[q];
    const int s = sp.slot - 1;
    Member cand{-1, {0, 0}};
    if (have_kids[sp.parent - 1]) cand = kids[sp.parent - 1][sp.child];

    bool ok = cand.id >= 0;
    // The owner itself or a repeat of an already chosen member counts as
    // absent; a duplicate row would only degrade the least-squares rank.
    if (ok && same_member(cand, cell, {0, 0})) ok = false;
    if (ok) {
      for (int j = 0; j < st.m && ok; ++j)
        if (st.exists[j] && same_member(cand, st.id[j], st.shift[j])) ok = false;
    }

    if (ok) {
      st.id[s] = cand.id;
      st.exists[s] = 1;
      st.shift[s] = cand.shift;
      st.canon[s] = static_cast<int8_t>(sp.slot);
    } else {
      st.exists[s] = 0;
      if (sp.fallback < 0) {
        st.id[s] = cell;
        st.shift[s] = {0, 0};
        st.canon[s] = 0;
      } else {
        st.id[s] = st.id[sp.fallback - 1];
        st.shift[s] = st.shift[sp.fallback - 1];
        st.canon[s] = st.canon[sp.fallback - 1];
      }
    }
  }

  return st;
}

Stencil select_stencil_quad(const Mesh& mesh, int cell, StencilPolicy policy) {
  if (mesh.cells[cell].kind != CellKind::quadrilateral)
    throw topology_error("select_stencil_quad on a non-quadrilateral cell");
  return select_stencil(mesh, cell, policy);
}

Stencil select_stencil_tri(const Mesh& mesh, int cell, StencilPolicy policy) {
  if (mesh.cells[cell].kind != CellKind::triangle)
    throw topology_error("select_stencil_tri on a non-triangle cell");
  return select_stencil(mesh, cell, policy);
}

// ---------------------------------------------------------------------------
// Generation.
// ---------------------------------------------------------------------------

MeshKind mesh_kind_from_string(const std::string& s) {
  if (s == "quad-regular") return MeshKind::quad_regular;
  if (s == "quad-perturbed") return MeshKind::quad_perturbed;
  if (s == "tri-regular") return MeshKind::tri_regular;
  if (s == "tri-perturbed") return MeshKind::tri_perturbed;
  throw std::invalid_argument("unknown mesh kind '" + s +
                              "' (quad-regular|quad-perturbed|tri-regular|tri-perturbed)");
}

std::string to_string(MeshKind k) {
  switch (k) {
    case MeshKind::quad_regular: return "quad-regular";
    case MeshKind::quad_perturbed: return "quad-perturbed";
    case MeshKind::tri_regular: return "tri-regular";
    case MeshKind::tri_perturbed: return "tri-perturbed";
  }
  return "?";
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;  // [0,1), identical on every platform
}

Mesh generate_once(MeshKind kind, int nx, int ny, Rect dom, double amplitude, uint64_t seed) {
  const bool tri = kind == MeshKind::tri_regular || kind == MeshKind::tri_perturbed;
  const double hx = dom.width() / nx;
  const double hy = dom.height() / ny;

  std::vector<Node> nodes((nx + 1) * (ny + 1));
  auto nid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      nodes[nid(i, j)] = {dom.x0 + i * hx, dom.y0 + j * hy};

  if (amplitude > 0.0) {
    std::mt19937_64 rng(seed);
    for (int j = 1; j < ny; ++j)
      for (int i = 1; i < nx; ++i) {
        const double du = 2.0 * unit_uniform(rng) - 1.0;
        const double dv = 2.0 * unit_uniform(rng) - 1.0;
        nodes[nid(i, j)].x += amplitude * hx * du;
        nodes[nid(i, j)].y += amplitude * hy * dv;
      }
  }

  std::vector<CellSpec> cells;
  cells.reserve(size_t(nx) * ny * (tri ? 2 : 1));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = nid(i, j), b = nid(i + 1, j), c = nid(i + 1, j + 1), d = nid(i, j + 1);
      if (!tri) {
        cells.push_back({CellKind::quadrilateral, {a, b, c, d}});
      } else if ((i + j) % 2 == 0) {
        cells.push_back({CellKind::triangle, {a, b, c, -1}});
        cells.push_back({CellKind::triangle, {a, c, d, -1}});
      } else {
        cells.push_back({CellKind::triangle, {a, b, d, -1}});
        cells.push_back({CellKind::triangle, {b, c, d, -1}});
      }
    }

  Mesh mesh = build_connectivity(std::move(nodes), cells);
  mesh.nominal_h = hx;

  // Tag the four sides. Boundary nodes are never perturbed, so exact
  // coordinate comparison against the box is safe.
  mesh.tags = {"left", "right", "bottom", "top"};
  for (Face& f : mesh.faces) {
    if (!f.is_boundary()) continue;
    const Node& a = mesh.nodes[f.nodes[0]];
    const Node& b = mesh.nodes[f.nodes[1]];
    if (a.x == dom.x0 && b.x == dom.x0) f.tag = 0;
    else if (a.x == dom.x1 && b.x == dom.x1) f.tag = 1;
    else if (a.y == dom.y0 && b.y == dom.y0) f.tag = 2;
    else if (a.y == dom.y1 && b.y == dom.y1) f.tag = 3;
  }
  return mesh;
}

}  // namespace

Mesh generate_mesh(MeshKind kind, int nx, int ny, Rect dom, double amplitude, uint64_t seed) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("generate_mesh requires nx, ny >= 2");
  if (amplitude < 0.0 || amplitude > 0.4)
    throw std::invalid_argument("perturbation amplitude must lie in [0, 0.4]");
  if (kind == MeshKind::quad_regular || kind == MeshKind::tri_regular) amplitude = 0.0;

  double amp = amplitude;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    try {
      return generate_once(kind, nx, ny, dom, amp, seed);
    } catch (const geometry_error&) {
      if (attempt == 5) break;
      amp *= 0.5;  // jitter inverted a cell; retry gentler
    }
  }
  throw geometry_error("mesh generation kept producing inverted cells");
}

Mesh make_periodic(Mesh mesh, const std::string& tag_a, const std::string& tag_b) {
  const int ta = mesh.tag_id(tag_a);
  const int tb = mesh.tag_id(tag_b);
  if (ta < 0 || tb < 0)
    throw topology_error("make_periodic: unknown boundary tag '" + tag_a + "'/'" + tag_b + "'");

  std::vector<int> fa, fb;
  for (int i = 0; i < mesh.n_faces(); ++i) {
    if (mesh.faces[i].tag == ta) fa.push_back(i);
    if (mesh.faces[i].tag == tb) fb.push_back(i);
  }
  if (fa.empty() || fa.size() != fb.size())
    throw topology_error("make_periodic: mismatched face counts on '" + tag_a + "'/'" + tag_b +
                         "'");

  // Pair faces by the coordinate running along the seam.
  auto keyed = [&](int fi) {
    const Face& f = mesh.faces[fi];
    return std::make_pair(std::min(mesh.nodes[f.nodes[0]].x, mesh.nodes[f.nodes[1]].x) +
                              std::min(mesh.nodes[f.nodes[0]].y, mesh.nodes[f.nodes[1]].y),
                          fi);
  };
  std::vector<std::pair<double, int>> ka, kb;
  for (int fi : fa) ka.push_back(keyed(fi));
  for (int fi : fb) kb.push_back(keyed(fi));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());

  std::vector<int> face_remap(mesh.n_faces());
  for (int i = 0; i < mesh.n_faces(); ++i) face_remap[i] = i;

  const double tol = 1e-9 * (std::abs(mesh.total_area) + 1.0);
  for (size_t k = 0; k < ka.size(); ++k) {
    Face& A = mesh.faces[ka[k].second];
    Face& B = mesh.faces[kb[k].second];
    const Vec2 s = B.midpoint - A.midpoint;  // translation carrying side-a geometry onto side-b
    const double span = std::abs(s.x) > std::abs(s.y) ? std::abs(A.midpoint.y - B.midpoint.y)
                                                      : std::abs(A.midpoint.x - B.midpoint.x);
    if (span > tol || std::abs(A.length - B.length) > tol)
      throw topology_error("make_periodic: seam faces do not line up");
    A.right = B.left;
    A.right_local = B.left_local;
    // Face::shift translates the right cell's geometry so it sits adjacent
    // across the face; the paired cell lives at +s from A.
    A.shift = {-s.x, -s.y};
    A.periodic = true;
    A.tag = -1;
    face_remap[kb[k].second] = ka[k].second;
    B.left = -2;  // mark dead
  }

  // Compact the face list.
  std::vector<Face> kept;
  std::vector<int> new_id(mesh.n_faces(), -1);
  for (int i = 0; i < mesh.n_faces(); ++i) {
    if (mesh.faces[i].left == -2) continue;
    new_id[i] = static_cast<int>(kept.size());
    kept.push_back(mesh.faces[i]);
  }
  for (int& fid : mesh.cell_face_ids) fid = new_id[face_remap[fid]];
  mesh.faces = std::move(kept);
  return mesh;
}

// ---------------------------------------------------------------------------
// File I/O.
// ---------------------------------------------------------------------------

namespace {

// Reads logical lines: strips comments, CR, and blank lines.
struct LineReader {
  std::istream& in;
  int line_number = 0;

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_number;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
      std::istringstream ss(line);
      tokens.clear();
      std::string t;
      while (ss >> t) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }
};

long parse_int(const std::string& s, int line) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw parse_error("expected an integer, got '" + s + "'", line);
  }
}

double parse_double(const std::string& s, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw parse_error("expected a number, got '" + s + "'", line);
  }
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  LineReader rd{in};
  std::vector<std::string> tok;

  if (!rd.next(tok) || tok.size() != 2 || tok[0] != "umesh" || tok[1] != "1")
    throw parse_error("expected header 'umesh 1'", rd.line_number);

  if (!rd.next(tok) || tok.size() != 2 || tok[0] != "nodes")
    throw parse_error("expected 'nodes N'", rd.line_number);
  const long n_nodes = parse_int(tok[1], rd.line_number);
  if (n_nodes < 0) throw parse_error("negative node count", rd.line_number);

  std::vector<Node> nodes(n_nodes);
  std::vector<bool> seen(n_nodes, false);
  for (long k = 0; k < n_nodes; ++k) {
    if (!rd.next(tok) || tok.size() != 3) throw parse_error("expected 'id x y'", rd.line_number);
    const long id = parse_int(tok[0], rd.line_number);
    if (id < 1 || id > n_nodes) throw parse_error("node id out of range", rd.line_number);
    if (seen[id - 1]) throw parse_error("duplicate node id", rd.line_number);
    seen[id - 1] = true;
    nodes[id - 1] = {parse_double(tok[1], rd.line_number), parse_double(tok[2], rd.line_number)};
  }

  if (!rd.next(tok) || tok.size() != 2 || tok[0] != "cells")
    throw parse_error("expected 'cells M'", rd.line_number);
  const long n_cells = parse_int(tok[1], rd.line_number);

  std::vector<CellSpec> cells(n_cells);
  std::vector<bool> cseen(n_cells, false);
  for (long k = 0; k < n_cells; ++k) {
    if (!rd.next(tok) || tok.size() < 2)
      throw parse_error("expected 'id k n1..nk'", rd.line_number);
    const long id = parse_int(tok[0], rd.line_number);
    if (id < 1 || id > n_cells) throw parse_error("cell id out of range", rd.line_number);
    if (cseen[id - 1]) throw parse_error("duplicate cell id", rd.line_number);
    cseen[id - 1] = true;
    const long kk = parse_int(tok[1], rd.line_number);
    if (kk != 3 && kk != 4) throw parse_error("cell must have 3 or 4 nodes", rd.line_number);
    if (static_cast<long>(tok.size()) != 2 + kk)
      throw parse_error("cell node count does not match k", rd.line_number);
    CellSpec cs;
    cs.kind = kk == 3 ? CellKind::triangle : CellKind::quadrilateral;
    for (long q = 0; q < kk; ++q) {
      const long nid = parse_int(tok[2 + q], rd.line_number);
      if (nid < 1 || nid > n_nodes)
        throw parse_error("cell references node " + std::to_string(nid) + " of " +
                              std::to_string(n_nodes),
                          rd.line_number);
      cs.nodes[q] = static_cast<int>(nid - 1);
    }
    cells[id - 1] = cs;
  }

  std::vector<BoundarySpec> bcs;
  while (rd.next(tok)) {
    if (tok[0] != "boundary" || tok.size() != 4)
      throw parse_error("expected 'boundary TAG n1 n2'", rd.line_number);
    BoundarySpec bs;
    bs.tag = tok[1];
    const long a = parse_int(tok[2], rd.line_number);
    const long b = parse_int(tok[3], rd.line_number);
    if (a < 1 || a > n_nodes || b < 1 || b > n_nodes)
      throw parse_error("boundary references an invalid node", rd.line_number);
    bs.a = static_cast<int>(a - 1);
    bs.b = static_cast<int>(b - 1);
    bcs.push_back(bs);
  }

  return build_connectivity(std::move(nodes), cells, bcs);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  char buf[128];
  out << "umesh 1\n";
  out << "nodes " << mesh.nodes.size() << "\n";
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i + 1, mesh.nodes[i].x, mesh.nodes[i].y);
    out << buf;
  }
  out << "cells " << mesh.cells.size() << "\n";
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const Cell& c = mesh.cells[i];
    out << (i + 1) << ' ' << c.n_nodes();
    for (int k = 0; k < c.n_nodes(); ++k) out << ' ' << (c.nodes[k] + 1);
    out << '\n';
  }
  for (const Face& f : mesh.faces)
    if (f.is_boundary() && f.tag >= 0)
      out << "boundary " << mesh.tags[f.tag] << ' ' << (f.nodes[0] + 1) << ' ' << (f.nodes[1] + 1)
          << '\n';
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mesh(mesh, out);
}

}  // namespace uweno
