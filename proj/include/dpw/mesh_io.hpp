#ifndef DPW_MESH_IO_HPP
#define DPW_MESH_IO_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "error.hpp"
#include "surface.hpp"

namespace dpw {

enum class MeshFormat { obj, ply };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Fixed-format decimal so identical meshes give identical bytes regardless of locale or stream state.
inline std::string fmt_coord(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", x == 0.0 ? 0.0 : x);
    return buf;
}

} // namespace detail

inline void write_obj(std::ostream& os, const SurfaceMesh& mesh) {
    for (const auto& v : mesh.vertices)
        os << "v " << detail::fmt_coord(v.x) << ' ' << detail::fmt_coord(v.y) << ' ' << detail::fmt_coord(v.z) << '\n';
    for (const auto& f : mesh.faces)
        os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << ' ' << f[3] + 1 << '\n';
}

inline void write_ply(std::ostream& os, const SurfaceMesh& mesh) {
    os << "ply\nformat ascii 1.0\n"
       << "element vertex " << mesh.vertices.size() << "\nproperty double x\nproperty double y\nproperty double z\n"
       << "element face " << mesh.faces.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
    for (const auto& v : mesh.vertices)
        os << detail::fmt_coord(v.x) << ' ' << detail::fmt_coord(v.y) << ' ' << detail::fmt_coord(v.z) << '\n';
    for (const auto& f : mesh.faces) os << "4 " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
}

inline std::string mesh_to_string(const SurfaceMesh& mesh, MeshFormat format) {
    std::ostringstream os;
    format == MeshFormat::obj ? write_obj(os, mesh) : write_ply(os, mesh);
    return os.str();
}

inline MeshFormat format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "ply") return MeshFormat::ply;
    return MeshFormat::obj;
}

inline void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write mesh to " + path);
    out << mesh_to_string(mesh, format);
    if (!out.flush()) throw IoError("failed while writing " + path);
}

} // namespace dpw

#endif // DPW_MESH_IO_HPP
