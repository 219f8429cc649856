#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uweno/geom2d.hpp"

namespace uweno {

struct Node {
  double x = 0, y = 0;
};

enum class CellKind : uint8_t { triangle = 3, quadrilateral = 4 };

struct Cell {
  CellKind kind = CellKind::triangle;
  std::array<int, 4> nodes{-1, -1, -1, -1};  // CCW; [3] unused for triangles
  double area = 0;
  Vec2 centroid;

  int n_nodes() const { return static_cast<int>(kind); }
};

struct Face {
  std::array<int, 2> nodes{-1, -1};  // as traversed by the left cell
  int left = -1;
  int right = -1;  // -1: boundary face
  int tag = -1;    // index into Mesh::tags; -1 for interior faces
  int8_t left_local = -1;
  int8_t right_local = -1;
  double length = 0;
  Vec2 normal;    // unit, outward from the left cell
  Vec2 midpoint;
  Vec2 shift;     // periodic: translation moving the right cell adjacent to this face
  bool periodic = false;

  bool is_boundary() const { return right < 0; }
};

struct CellSpec {
  CellKind kind;
  std::array<int, 4> nodes{-1, -1, -1, -1};
};

struct BoundarySpec {
  int a = -1, b = -1;  // node ids of the face
  std::string tag;
};

struct Mesh {
  std::vector<Node> nodes;
  std::vector<Cell> cells;
  std::vector<Face> faces;
  std::vector<int> cell_face_offset;  // size cells+1
  std::vector<int> cell_face_ids;     // grouped per cell, in local-face order
  std::vector<std::string> tags;
  double nominal_h = 0;  // generator cell scale; 0 when unknown (file meshes)
  double total_area = 0;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  std::span<const int> faces_of(int cell) const {
    return {cell_face_ids.data() + cell_face_offset[cell],
            size_t(cell_face_offset[cell + 1] - cell_face_offset[cell])};
  }
  int face_of(int cell, int local) const { return cell_face_ids[cell_face_offset[cell] + local]; }
  // Neighbor cell across a local face, or -1 on the boundary.
  int neighbor(int cell, int local) const {
    const Face& f = faces[face_of(cell, local)];
    return f.left == cell ? f.right : f.left;
  }
  int tag_id(const std::string& name) const;
};

/// Assemble faces, adjacency and cell geometry from raw node/cell lists.
/// Requires CCW cells and conforming connectivity; boundary tags are matched
/// by node pair. Throws topology_error / geometry_error / parse_error.
Mesh build_connectivity(std::vector<Node> nodes, const std::vector<CellSpec>& cells,
                        const std::vector<BoundarySpec>& boundary = {});

// ---------------------------------------------------------------------------
// Reconstruction stencils.
//
// Slots follow the selection procedure: 1..4 (quads) or 1..3 (triangles) are
// the face neighbors in local-face order; the remainder are their neighbors
// ("children"), two per parent, enumerated counter-clockwise starting after
// the face shared with the owner. A missing slot keeps E=0 and stores the
// prescribed replacement id instead.
// ---------------------------------------------------------------------------

constexpr int kMaxStencil = 12;

struct Stencil {
  int owner = -1;
  int m = 0;  // 12 for quads, 9 for triangles
  std::array<int, kMaxStencil> id{};
  std::array<uint8_t, kMaxStencil> exists{};
  std::array<Vec2, kMaxStencil> shift{};    // periodic translation into the owner frame
  std::array<int8_t, kMaxStencil> canon{};  // live data row (1..m or 0=owner) for each slot

  int slot_id(int j) const { return id[j - 1]; }          // paper index j = 1..m
  bool slot_exists(int j) const { return exists[j - 1]; }
  Vec2 slot_shift(int j) const { return shift[j - 1]; }
  int slot_canon(int j) const { return canon[j - 1]; }
};

enum class StencilPolicy {
  strict,   // all face neighbors must exist (interior cells)
  degrade,  // missing face neighbors become E=0 slots (boundary cells)
};

Stencil select_stencil(const Mesh& mesh, int cell, StencilPolicy policy = StencilPolicy::strict);
Stencil select_stencil_quad(const Mesh& mesh, int cell,
                            StencilPolicy policy = StencilPolicy::strict);
Stencil select_stencil_tri(const Mesh& mesh, int cell,
                           StencilPolicy policy = StencilPolicy::strict);

// ---------------------------------------------------------------------------
// Generation.
// ---------------------------------------------------------------------------

enum class MeshKind { quad_regular, quad_perturbed, tri_regular, tri_perturbed };

MeshKind mesh_kind_from_string(const std::string& s);
std::string to_string(MeshKind k);

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Structured quad grid or its alternating-diagonal triangulation, with
/// optional deterministic interior-node jitter of amplitude*h. Boundary faces
/// are tagged left/right/bottom/top. If the jitter inverts a cell the
/// amplitude is halved and generation retried, up to five times.
Mesh generate_mesh(MeshKind kind, int nx, int ny, Rect domain, double amplitude = 0.0,
                   uint64_t seed = 0);

/// Merge the boundary faces of two opposite tags into interior faces carrying
/// a periodic shift. Stencils then wrap across the seam.
Mesh make_periodic(Mesh mesh, const std::string& tag_a, const std::string& tag_b);

// ---------------------------------------------------------------------------
// Plain-text mesh files ("umesh 1"): nodes/cells sections with 1-based ids,
// optional boundary tag lines, '#' comments.
// ---------------------------------------------------------------------------

Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::string& path);

}  // namespace uweno
