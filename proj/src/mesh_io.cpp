#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "cellforce/errors.hpp"
#include "cellforce/mesh.hpp"

namespace cellforce {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "MESH2 " << mesh.num_nodes() << ' ' << mesh.num_elements() << ' ' << mesh.edges.size() << '\n';
  out << std::setprecision(17);
  for (const Point2& p : mesh.nodes) out << p.x << ' ' << p.y << '\n';
  for (const Triangle& t : mesh.elements)
    out << t.nodes[0] << ' ' << t.nodes[1] << ' ' << t.nodes[2] << ' ' << static_cast<int>(t.region) << '\n';
  for (const TaggedEdge& e : mesh.edges) out << e.a << ' ' << e.b << ' ' << static_cast<int>(e.tag) << '\n';
}

Mesh read_mesh(std::istream& in) {
  std::string magic;
  std::size_t nn = 0, ne = 0, nb = 0;
  if (!(in >> magic >> nn >> ne >> nb) || magic != "MESH2") throw FormatError("mesh: bad MESH2 header");
  Mesh mesh;
  mesh.nodes.resize(nn);
  for (Point2& p : mesh.nodes)
    if (!(in >> p.x >> p.y)) throw FormatError("mesh: truncated node list");
  mesh.elements.resize(ne);
  for (Triangle& t : mesh.elements) {
    int region = 0;
    if (!(in >> t.nodes[0] >> t.nodes[1] >> t.nodes[2] >> region)) throw FormatError("mesh: truncated element list");
    if (region < 0 || region > 1) throw FormatError("mesh: unknown region tag");
    t.region = static_cast<Region>(region);
  }
  mesh.edges.resize(nb);
  for (TaggedEdge& e : mesh.edges) {
    int tag = 0;
    if (!(in >> e.a >> e.b >> tag)) throw FormatError("mesh: truncated edge list");
    if (tag < 0 || tag > 2) throw FormatError("mesh: unknown edge tag");
    e.tag = static_cast<EdgeTag>(tag);
  }
  for (const Triangle& t : mesh.elements)
    for (int v : t.nodes)
      if (v < 0 || static_cast<std::size_t>(v) >= nn) throw FormatError("mesh: node index out of range");
  for (const TaggedEdge& e : mesh.edges)
    if (e.a < 0 || e.b < 0 || static_cast<std::size_t>(std::max(e.a, e.b)) >= nn)
      throw FormatError("mesh: node index out of range");
  return mesh;
}

std::string mesh_to_string(const Mesh& mesh) {
  std::ostringstream out;
  write_mesh(out, mesh);
  return out.str();
}

}  // namespace cellforce
