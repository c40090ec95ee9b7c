#include "rotinv/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rotinv {

namespace {

[[noreturn]] void parse_fail(const std::string& op, const std::string& path, std::size_t line,
                             const std::string& message) {
  throw std::runtime_error(op + ": " + path + ":" + std::to_string(line) + ": " + message);
}

// Lines with 1-based numbers, comments and blank lines skipped.
struct LineReader {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t next = 0;

  LineReader(std::istream& in, char comment) {
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      const auto cut = raw.find(comment);
      if (cut != std::string::npos) raw.erase(cut);
      const auto begin = raw.find_first_not_of(" \t\r");
      if (begin == std::string::npos) continue;
      const auto end = raw.find_last_not_of(" \t\r");
      lines.emplace_back(number, raw.substr(begin, end - begin + 1));
    }
  }

  bool done() const { return next >= lines.size(); }
  const std::pair<std::size_t, std::string>& take() { return lines[next++]; }
};

double parse_double(const std::string& op, const std::string& path, std::size_t line,
                    std::istringstream& tokens, const char* what) {
  double v = 0.0;
  if (!(tokens >> v)) parse_fail(op, path, line, std::string("expected ") + what);
  return v;
}

std::size_t parse_count(const std::string& op, const std::string& path, std::size_t line,
                        std::istringstream& tokens, const char* what) {
  long long v = 0;
  if (!(tokens >> v) || v < 0) parse_fail(op, path, line, std::string("expected ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

TriangleMesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_off: cannot open " + path);
  LineReader reader(in, '#');
  if (reader.done()) throw std::runtime_error("load_off: " + path + ": empty input");

  {
    const auto& [line, text] = reader.take();
    if (text != "OFF") parse_fail("load_off", path, line, "expected OFF header");
  }
  if (reader.done()) throw std::runtime_error("load_off: " + path + ": missing counts line");

  std::size_t num_vertices = 0, num_faces = 0;
  {
    const auto& [line, text] = reader.take();
    std::istringstream tokens(text);
    num_vertices = parse_count("load_off", path, line, tokens, "vertex count");
    num_faces = parse_count("load_off", path, line, tokens, "face count");
    // The edge count is part of the format but carries no information.
  }

  TriangleMesh mesh;
  mesh.vertices.reserve(num_vertices);
  for (std::size_t i = 0; i < num_vertices; ++i) {
    if (reader.done()) throw std::runtime_error("load_off: " + path + ": truncated vertex list");
    const auto& [line, text] = reader.take();
    std::istringstream tokens(text);
    const double x = parse_double("load_off", path, line, tokens, "vertex coordinate");
    const double y = parse_double("load_off", path, line, tokens, "vertex coordinate");
    const double z = parse_double("load_off", path, line, tokens, "vertex coordinate");
    mesh.vertices.push_back({x, y, z});
  }

  for (std::size_t f = 0; f < num_faces; ++f) {
    if (reader.done()) throw std::runtime_error("load_off: " + path + ": truncated face list");
    const auto& [line, text] = reader.take();
    std::istringstream tokens(text);
    const std::size_t arity = parse_count("load_off", path, line, tokens, "face vertex count");
    if (arity < 3) parse_fail("load_off", path, line, "face needs at least 3 vertices");
    std::vector<std::size_t> face(arity);
    for (std::size_t& idx : face) {
      idx = parse_count("load_off", path, line, tokens, "vertex index");
      if (idx >= mesh.vertices.size()) parse_fail("load_off", path, line, "vertex index out of range");
    }
    for (std::size_t j = 1; j + 1 < arity; ++j)
      mesh.triangles.push_back({face[0], face[j], face[j + 1]});
  }
  return mesh;
}

PointCloud sample_mesh_surface(const TriangleMesh& mesh, std::size_t num_points,
                               std::uint64_t seed) {
  if (num_points < 1) throw std::invalid_argument("sample_mesh_surface: need at least one point");
  if (mesh.triangles.empty()) throw std::invalid_argument("sample_mesh_surface: empty mesh");

  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 ab = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    const Vec3 ac = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    total += 0.5 * norm(cross(ab, ac));
    cumulative[t] = total;
  }
  if (total <= 0.0) throw std::invalid_argument("sample_mesh_surface: zero surface area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(0.0, total);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud cloud;
  cloud.points.reserve(num_points);
  for (std::size_t i = 0; i < num_points; ++i) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick(rng));
    const std::size_t t = std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
    const auto& tri = mesh.triangles[t];
    double u = unit(rng);
    double v = unit(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    const Vec3 a = mesh.vertices[tri[0]];
    const Vec3 ab = mesh.vertices[tri[1]] - a;
    const Vec3 ac = mesh.vertices[tri[2]] - a;
    cloud.points.push_back(a + ab * u + ac * v);
  }
  return cloud;
}

PointCloud load_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_xyz: cannot open " + path);
  LineReader reader(in, '#');

  PointCloud cloud;
  while (!reader.done()) {
    const auto& [line, text] = reader.take();
    std::istringstream tokens(text);
    const double x = parse_double("load_xyz", path, line, tokens, "coordinate");
    const double y = parse_double("load_xyz", path, line, tokens, "coordinate");
    const double z = parse_double("load_xyz", path, line, tokens, "coordinate");
    cloud.points.push_back({x, y, z});
  }
  if (cloud.empty()) throw std::runtime_error("load_xyz: " + path + ": empty input");
  return cloud;
}

PointCloud load_ply_ascii(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_ply_ascii: cannot open " + path);

  std::string raw;
  std::size_t line = 0;
  auto next_line = [&]() {
    if (!std::getline(in, raw)) parse_fail("load_ply_ascii", path, line, "unexpected end of file");
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
  };

  next_line();
  if (raw != "ply") parse_fail("load_ply_ascii", path, line, "expected ply header");

  std::size_t vertex_count = 0;
  std::vector<std::string> vertex_properties;
  bool in_vertex_element = false;
  bool ascii = false;
  while (true) {
    next_line();
    std::istringstream tokens(raw);
    std::string word;
    tokens >> word;
    if (word == "comment" || word.empty()) continue;
    if (word == "format") {
      std::string kind;
      tokens >> kind;
      ascii = kind == "ascii";
      if (!ascii) parse_fail("load_ply_ascii", path, line, "only ascii format is supported");
      continue;
    }
    if (word == "element") {
      std::string name;
      long long count = 0;
      if (!(tokens >> name >> count) || count < 0)
        parse_fail("load_ply_ascii", path, line, "bad element record");
      in_vertex_element = name == "vertex";
      if (in_vertex_element) vertex_count = static_cast<std::size_t>(count);
      continue;
    }
    if (word == "property") {
      if (!in_vertex_element) continue;
      std::string type;
      tokens >> type;
      if (type == "list") parse_fail("load_ply_ascii", path, line, "list property on vertices");
      std::string name;
      if (!(tokens >> name)) parse_fail("load_ply_ascii", path, line, "property needs a name");
      vertex_properties.push_back(name);
      continue;
    }
    if (word == "end_header") break;
    parse_fail("load_ply_ascii", path, line, "unknown header record " + word);
  }
  if (!ascii) parse_fail("load_ply_ascii", path, line, "missing format record");

  const auto find_property = [&](const char* name) {
    const auto it = std::find(vertex_properties.begin(), vertex_properties.end(), name);
    if (it == vertex_properties.end())
      throw std::runtime_error("load_ply_ascii: " + path + ": missing vertex property " +
                               std::string(name));
    return static_cast<std::size_t>(it - vertex_properties.begin());
  };
  const std::size_t ix = find_property("x");
  const std::size_t iy = find_property("y");
  const std::size_t iz = find_property("z");

  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    next_line();
    std::istringstream tokens(raw);
    std::vector<double> row(vertex_properties.size());
    for (std::size_t p = 0; p < row.size(); ++p)
      row[p] = parse_double("load_ply_ascii", path, line, tokens, "vertex value");
    cloud.points.push_back({row[ix], row[iy], row[iz]});
  }
  if (cloud.empty()) throw std::runtime_error("load_ply_ascii: " + path + ": empty input");
  return cloud;
}

PointCloud load_cloud(const std::string& path, std::size_t mesh_samples, std::uint64_t seed) {
  const auto dot_pos = path.rfind('.');
  std::string ext = dot_pos == std::string::npos ? "" : path.substr(dot_pos + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "off") return sample_mesh_surface(load_off(path), mesh_samples, seed);
  if (ext == "ply") return load_ply_ascii(path);
  if (ext == "xyz" || ext == "txt") return load_xyz(path);
  throw std::runtime_error("load_cloud: unsupported extension ." + ext + " for " + path);
}

void save_xyz(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_xyz: cannot open " + path);
  out << std::setprecision(17);
  for (const Point3& p : cloud.points) out << p.x << " " << p.y << " " << p.z << "\n";
  if (!out) throw std::runtime_error("save_xyz: write failed for " + path);
}

}  // namespace rotinv
