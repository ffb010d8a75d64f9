#pragma once

#include "pinchlab/geometry.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace pinchlab {

struct GeodesicSphereTag {
  Vec4 center = Vec4::Zero();
  double radius = 0;
};

struct CliffordTorusTag {
  int p = 1, q = 1;
  double r1 = 0, r2 = 0;
};

struct PerturbedSphereTag {
  Vec4 center = Vec4::Zero();
  double radius = 0;
  double delta = 0;
  int mode = 1;
};

using FamilyTag =
    std::variant<std::monostate, GeodesicSphereTag, CliffordTorusTag, PerturbedSphereTag>;

std::string family_name(const FamilyTag& tag);

// Triangulated hypersurface immersed in the unit sphere S^3. Vertices are
// unit-norm ambient positions; faces are consistently oriented index triples.
struct ImmersedMesh {
  std::vector<Vec4> vertices;
  std::vector<std::array<int, 3>> faces;
  FamilyTag family;

  int dimension() const { return 2; }
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

struct MeshEdge {
  int a = -1, b = -1;       // a < b
  int left = -1, right = -1;  // incident faces
};

struct MeshTopology {
  std::vector<MeshEdge> edges;
  std::vector<std::vector<int>> vertex_faces;
  std::vector<std::vector<int>> vertex_ring;
  int euler_characteristic = 0;
  int genus = 0;
  double max_edge_length = 0;  // geodesic
};

// Builds connectivity while enforcing every mesh invariant: valid distinct
// indices, unit vertices, each edge shared by exactly two consistently
// oriented faces, one connected component. Throws MeshError on violation.
MeshTopology build_topology(const ImmersedMesh& mesh);

inline void validate_mesh(const ImmersedMesh& mesh) { (void)build_topology(mesh); }

// Icosahedral subdivision of the distance sphere around `center`, every vertex
// placed at geodesic distance `radius` along its radial geodesic.
ImmersedMesh make_geodesic_sphere(const Vec4& center, double radius, int refine);

// Structured-grid triangulation of S^1(r1) x S^1(r2), r1 = r2 = 1/sqrt(2).
ImmersedMesh make_clifford_torus(int p, int q, int res_u, int res_v);

// Radial graph over the distance sphere: r(u) = radius + delta * Y_mode(u),
// where Y_mode is a fixed degree-`mode` harmonic profile of unit amplitude.
// delta = 0 reproduces make_geodesic_sphere bit for bit.
ImmersedMesh make_perturbed_sphere(const Vec4& center, double radius, double delta,
                                   int mode, int refine);

// Ambient orthogonal transform. Sphere-family tags carry the rotated center;
// the torus tag is dropped (its closed-form curvature assumes the standard
// embedding).
ImmersedMesh rotate_mesh(const ImmersedMesh& mesh, const Mat4& Q);

// S4OFF text format: line 1 "S4OFF", line 2 "V F", V lines of 4 floats with
// 17 significant digits, F lines "3 i j k" with zero-based indices.
void write_s4off(const ImmersedMesh& mesh, std::ostream& os);
void write_s4off_file(const ImmersedMesh& mesh, const std::string& path);
ImmersedMesh read_s4off(std::istream& is);  // validates; throws IoError
ImmersedMesh read_s4off_file(const std::string& path);

}  // namespace pinchlab
