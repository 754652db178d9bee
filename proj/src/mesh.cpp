#include "meshpix/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "meshpix/errors.hpp"

namespace meshpix {
namespace {

// Line-oriented reader that skips blank lines and '#' comments.
class MeshReader {
  public:
    MeshReader(std::istream& in, const std::string& path) : in_(in), path_(path) {}

    std::istringstream line(const std::string& what) {
        std::string raw;
        while (std::getline(in_, raw)) {
            const auto first = raw.find_first_not_of(" \t\r");
            if (first == std::string::npos || raw[first] == '#') continue;
            return std::istringstream(raw);
        }
        throw InputError("malformed header: unexpected end of mesh file (expected " +
                         what + "): " + path_);
    }

    long counted_section(const std::string& keyword) {
        auto ls = line(keyword);
        std::string kw;
        long n = -1;
        ls >> kw >> n;
        if (kw != keyword || n < 0)
            throw InputError("malformed header: expected '" + keyword +
                             " <count>': " + path_);
        return n;
    }

  private:
    std::istream& in_;
    const std::string& path_;
};

void write_real(std::ofstream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

std::vector<Point2> triangle_centers(const TriMesh& mesh) {
    std::vector<Point2> centers;
    centers.reserve(mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        const Point2& a = mesh.vertices[t[0]];
        const Point2& b = mesh.vertices[t[1]];
        const Point2& c = mesh.vertices[t[2]];
        centers.push_back({(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0});
    }
    return centers;
}

void refresh_centers(TriMesh& mesh) { mesh.centers = triangle_centers(mesh); }

void save_mesh(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);

    out << "MESHPIX 1\n";
    out << "image " << mesh.image_width << " " << mesh.image_height << "\n";
    out << "vertices " << mesh.vertices.size() << "\n";
    for (const auto& v : mesh.vertices) {
        write_real(out, v.x);
        out << " ";
        write_real(out, v.y);
        out << "\n";
    }
    out << "triangles " << mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles)
        out << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "constrained " << mesh.constrained_edges.size() << "\n";
    for (const auto& e : mesh.constrained_edges) out << e[0] << " " << e[1] << "\n";
    out << "intensities " << mesh.center_intensity.size() << "\n";
    for (double f : mesh.center_intensity) {
        write_real(out, f);
        out << "\n";
    }
    if (!out) throw InputError("write failure: " + path);
}

TriMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("unreadable file: " + path);
    MeshReader rd(in, path);

    {
        auto ls = rd.line("MESHPIX magic");
        std::string magic;
        int version = 0;
        ls >> magic >> version;
        if (magic != "MESHPIX" || version != 1)
            throw InputError("malformed header: not a MESHPIX 1 file: " + path);
    }

    TriMesh mesh;
    {
        auto ls = rd.line("image dimensions");
        std::string kw;
        ls >> kw >> mesh.image_width >> mesh.image_height;
        if (kw != "image" || mesh.image_width <= 0 || mesh.image_height <= 0)
            throw InputError("malformed header: bad image dimensions: " + path);
    }

    const long nv = rd.counted_section("vertices");
    mesh.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        auto ls = rd.line("vertex");
        Point2 p;
        if (!(ls >> p.x >> p.y))
            throw InputError("malformed vertex line: " + path);
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InputError("non-finite coordinate: " + path);
        mesh.vertices.push_back(p);
    }

    const long nt = rd.counted_section("triangles");
    mesh.triangles.reserve(nt);
    for (long i = 0; i < nt; ++i) {
        auto ls = rd.line("triangle");
        std::array<int, 3> t{};
        if (!(ls >> t[0] >> t[1] >> t[2]))
            throw InputError("malformed triangle line: " + path);
        for (int k : t)
            if (k < 0 || k >= static_cast<int>(mesh.vertices.size()))
                throw InputError("index out of range: " + path);
        mesh.triangles.push_back(t);
    }

    const long nc = rd.counted_section("constrained");
    mesh.constrained_edges.reserve(nc);
    for (long i = 0; i < nc; ++i) {
        auto ls = rd.line("constrained edge");
        std::array<int, 2> e{};
        if (!(ls >> e[0] >> e[1]))
            throw InputError("malformed constrained-edge line: " + path);
        for (int k : e)
            if (k < 0 || k >= static_cast<int>(mesh.vertices.size()))
                throw InputError("index out of range: " + path);
        mesh.constrained_edges.push_back(e);
    }

    const long ni = rd.counted_section("intensities");
    if (ni != nt)
        throw InputError("malformed header: intensity count != triangle count: " + path);
    mesh.center_intensity.reserve(ni);
    for (long i = 0; i < ni; ++i) {
        auto ls = rd.line("intensity");
        double f = 0.0;
        if (!(ls >> f)) throw InputError("malformed intensity line: " + path);
        if (!std::isfinite(f)) throw InputError("non-finite coordinate: " + path);
        mesh.center_intensity.push_back(f);
    }

    refresh_centers(mesh);
    return mesh;
}

}  // namespace meshpix
