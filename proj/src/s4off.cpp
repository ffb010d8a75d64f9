#include "pinchlab/errors.hpp"
#include "pinchlab/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace pinchlab {

void write_s4off(const ImmersedMesh& mesh, std::ostream& os) {
  os << "S4OFF\n";
  os << mesh.vertex_count() << ' ' << mesh.face_count() << '\n';
  char buf[128];
  for (const Vec4& raw : mesh.vertices) {
    const Vec4 v = raw.normalized();
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", v[0], v[1], v[2], v[3]);
    os << buf;
  }
  for (const auto& f : mesh.faces) {
    os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  }
  if (!os) throw IoError("s4off: write failed");
}

void write_s4off_file(const ImmersedMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("s4off: cannot open '" + path + "' for writing");
  write_s4off(mesh, os);
}

ImmersedMesh read_s4off(std::istream& is) {
  std::string magic;
  if (!(is >> magic) || magic != "S4OFF") {
    throw IoError("s4off: missing S4OFF header");
  }
  long long nv = 0, nf = 0;
  if (!(is >> nv >> nf) || nv <= 0 || nf <= 0 || nv > 50'000'000 || nf > 100'000'000) {
    throw IoError("s4off: bad vertex/face counts");
  }
  ImmersedMesh mesh;
  mesh.vertices.resize(static_cast<size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    Vec4& v = mesh.vertices[static_cast<size_t>(i)];
    if (!(is >> v[0] >> v[1] >> v[2] >> v[3])) {
      throw IoError("s4off: truncated vertex section at vertex " + std::to_string(i));
    }
  }
  mesh.faces.resize(static_cast<size_t>(nf));
  for (long long i = 0; i < nf; ++i) {
    int arity = 0;
    auto& f = mesh.faces[static_cast<size_t>(i)];
    if (!(is >> arity >> f[0] >> f[1] >> f[2]) || arity != 3) {
      throw IoError("s4off: bad face record at face " + std::to_string(i));
    }
  }
  std::string tail;
  if (is >> tail) throw IoError("s4off: trailing data after face section");

  try {
    validate_mesh(mesh);
  } catch (const MeshError& e) {
    throw IoError(std::string("s4off: invalid mesh: ") + e.what());
  }
  return mesh;
}

ImmersedMesh read_s4off_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("s4off: cannot open '" + path + "'");
  return read_s4off(is);
}

}  // namespace pinchlab
