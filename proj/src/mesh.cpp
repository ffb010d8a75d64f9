#include "pinchlab/mesh.hpp"

#include "pinchlab/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace pinchlab {

std::string family_name(const FamilyTag& tag) {
  if (std::holds_alternative<GeodesicSphereTag>(tag)) return "geodesic_sphere";
  if (std::holds_alternative<CliffordTorusTag>(tag)) return "clifford_torus";
  if (std::holds_alternative<PerturbedSphereTag>(tag)) return "perturbed_sphere";
  return "untagged";
}

MeshTopology build_topology(const ImmersedMesh& mesh) {
  const int nv = mesh.vertex_count();
  const int nf = mesh.face_count();
  if (nv < 4 || nf < 4) throw MeshError("mesh: too few vertices or faces");

  for (int v = 0; v < nv; ++v) {
    const double len = mesh.vertices[v].norm();
    if (std::abs(len - 1.0) > 1e-12) {
      throw MeshError("mesh: vertex " + std::to_string(v) + " is not on the unit sphere");
    }
  }

  MeshTopology topo;
  topo.vertex_faces.assign(nv, {});
  topo.vertex_ring.assign(nv, {});

  // Directed-edge map: a consistently oriented closed surface uses every
  // directed edge exactly once and every undirected edge exactly twice.
  std::unordered_map<std::uint64_t, int> undirected;  // key -> edge index
  std::unordered_map<std::uint64_t, int> directed;    // key -> face
  undirected.reserve(static_cast<size_t>(nf) * 2);
  directed.reserve(static_cast<size_t>(nf) * 3);
  auto ukey = [nv](int a, int b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(nv) + b;
  };
  auto dkey = [nv](int a, int b) {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(nv) + b;
  };

  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) {
        throw MeshError("mesh: face " + std::to_string(f) + " has an invalid vertex index");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw MeshError("mesh: face " + std::to_string(f) + " repeats a vertex");
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (!directed.emplace(dkey(a, b), f).second) {
        throw MeshError("mesh: directed edge used twice (inconsistent orientation near face " +
                        std::to_string(f) + ")");
      }
      auto it = undirected.find(ukey(a, b));
      if (it == undirected.end()) {
        MeshEdge e;
        e.a = std::min(a, b);
        e.b = std::max(a, b);
        e.left = f;
        undirected.emplace(ukey(a, b), static_cast<int>(topo.edges.size()));
        topo.edges.push_back(e);
      } else {
        MeshEdge& e = topo.edges[it->second];
        if (e.right != -1) {
          throw MeshError("mesh: edge shared by more than two faces near face " +
                          std::to_string(f));
        }
        e.right = f;
      }
      topo.vertex_faces[a].push_back(f);
    }
  }

  for (const auto& e : topo.edges) {
    if (e.right == -1) {
      throw MeshError("mesh: boundary edge (" + std::to_string(e.a) + "," +
                      std::to_string(e.b) + "); surface must be closed");
    }
    // Orientation consistency: the opposite directed edge must exist.
    if (directed.find(static_cast<std::uint64_t>(e.b) * nv + e.a) == directed.end() ||
        directed.find(static_cast<std::uint64_t>(e.a) * nv + e.b) == directed.end()) {
      throw MeshError("mesh: inconsistent orientation across edge (" + std::to_string(e.a) +
                      "," + std::to_string(e.b) + ")");
    }
    topo.vertex_ring[e.a].push_back(e.b);
    topo.vertex_ring[e.b].push_back(e.a);
    topo.max_edge_length = std::max(
        topo.max_edge_length, geodesic_distance(mesh.vertices[e.a], mesh.vertices[e.b]));
  }

  // Single connected component.
  std::vector<char> seen(nv, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : topo.vertex_ring[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != nv) throw MeshError("mesh: more than one connected component");

  topo.euler_characteristic = nv - static_cast<int>(topo.edges.size()) + nf;
  if (topo.euler_characteristic % 2 != 0) {
    throw MeshError("mesh: odd Euler characteristic");
  }
  topo.genus = (2 - topo.euler_characteristic) / 2;
  if (topo.genus < 0) throw MeshError("mesh: negative genus");
  return topo;
}

ImmersedMesh rotate_mesh(const ImmersedMesh& mesh, const Mat4& Q) {
  ImmersedMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) out.vertices.push_back((Q * v).normalized());
  out.faces = mesh.faces;
  if (const auto* s = std::get_if<GeodesicSphereTag>(&mesh.family)) {
    out.family = GeodesicSphereTag{(Q * s->center).normalized(), s->radius};
  } else if (const auto* p = std::get_if<PerturbedSphereTag>(&mesh.family)) {
    out.family = PerturbedSphereTag{(Q * p->center).normalized(), p->radius, p->delta, p->mode};
  } else {
    out.family = std::monostate{};
  }
  return out;
}

}  // namespace pinchlab
