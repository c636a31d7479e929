#include "mvdfv/meshio.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mvd {

namespace {

class LineReader
{
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line)
    {
        if (!std::getline(in_, line))
            return false;
        ++lineno_;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return true;
    }

    /// Next line or MalformedSection at end of input.
    std::string expect(const char* context)
    {
        std::string line;
        if (!next(line))
            throw MalformedSection(std::string("unexpected end of file in ") + context, lineno_ + 1);
        return line;
    }

    std::size_t line() const { return lineno_; }

private:
    std::istream& in_;
    std::size_t lineno_ = 0;
};

std::vector<std::string_view> split(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t')
            ++i;
        if (i > start)
            out.push_back(s.substr(start, i - start));
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

long long to_int(std::string_view tok, std::size_t line, const char* what)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw MalformedSection(std::string("expected integer ") + what + ", got '" + std::string(tok) + "'",
                               line);
    return v;
}

double to_double(std::string_view tok, std::size_t line, const char* what)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw MalformedSection(std::string("expected real ") + what + ", got '" + std::string(tok) + "'", line);
    return v;
}

void expect_end(LineReader& r, const char* tag)
{
    const std::string line = r.expect(tag);
    if (trim(line) != tag)
        throw MalformedSection(std::string("expected ") + tag + ", got '" + line + "'", r.line());
}

} // namespace

TriMesh parse_msh(std::istream& in)
{
    LineReader reader(in);
    bool have_format = false;
    bool have_nodes = false;
    bool have_elements = false;
    std::size_t elements_line = 0;

    std::vector<Point2> nodes;
    std::unordered_map<long long, Index> tag_to_index;
    std::vector<std::array<Index, 3>> triangles;
    std::vector<std::size_t> triangle_lines;
    std::set<Index> line_nodes;
    bool have_lines = false;

    std::string line;
    while (reader.next(line)) {
        const std::string_view header = trim(line);
        if (header.empty())
            continue;
        if (header == "$MeshFormat") {
            const std::string fmt = reader.expect("$MeshFormat");
            const auto tok = split(fmt);
            if (tok.size() != 3)
                throw MalformedSection("expected 'version file-type data-size'", reader.line());
            if (tok[0] != "2.2")
                throw UnsupportedVersion("unsupported MSH version " + std::string(tok[0]) + " (need 2.2)",
                                         reader.line());
            if (to_int(tok[1], reader.line(), "file-type") != 0)
                throw UnsupportedVersion("binary MSH files are not supported", reader.line());
            to_int(tok[2], reader.line(), "data-size");
            expect_end(reader, "$EndMeshFormat");
            have_format = true;
        }
        else if (header == "$Nodes") {
            if (!have_format)
                throw MalformedSection("$Nodes before $MeshFormat", reader.line());
            if (have_nodes)
                throw MalformedSection("duplicate $Nodes section", reader.line());
            const std::string count_line = reader.expect("$Nodes");
            const auto ctok = split(count_line);
            if (ctok.size() != 1)
                throw MalformedSection("expected node count", reader.line());
            const long long count = to_int(ctok[0], reader.line(), "node count");
            if (count < 0)
                throw MalformedSection("negative node count", reader.line());
            nodes.reserve(static_cast<std::size_t>(count));
            for (long long k = 0; k < count; ++k) {
                const std::string rec = reader.expect("$Nodes");
                const auto tok = split(rec);
                if (tok.size() != 4)
                    throw MalformedSection("node record needs 'tag x y z', got '" + rec + "'", reader.line());
                const long long tag = to_int(tok[0], reader.line(), "node tag");
                const double x = to_double(tok[1], reader.line(), "x");
                const double y = to_double(tok[2], reader.line(), "y");
                const double z = to_double(tok[3], reader.line(), "z");
                if (std::abs(z) > 1e-12)
                    throw NonPlanarNode("node " + std::to_string(tag) + " has z = " + std::string(tok[3]),
                                        reader.line());
                if (!tag_to_index.emplace(tag, static_cast<Index>(nodes.size())).second)
                    throw MalformedSection("duplicate node tag " + std::to_string(tag), reader.line());
                nodes.push_back({x, y});
            }
            expect_end(reader, "$EndNodes");
            have_nodes = true;
        }
        else if (header == "$Elements") {
            if (!have_nodes)
                throw MalformedSection("$Elements before $Nodes", reader.line());
            if (have_elements)
                throw MalformedSection("duplicate $Elements section", reader.line());
            elements_line = reader.line();
            const std::string count_line = reader.expect("$Elements");
            const auto ctok = split(count_line);
            if (ctok.size() != 1)
                throw MalformedSection("expected element count", reader.line());
            const long long count = to_int(ctok[0], reader.line(), "element count");
            if (count < 0)
                throw MalformedSection("negative element count", reader.line());
            for (long long k = 0; k < count; ++k) {
                const std::string rec = reader.expect("$Elements");
                const auto tok = split(rec);
                if (tok.size() < 3)
                    throw MalformedSection("element record too short: '" + rec + "'", reader.line());
                to_int(tok[0], reader.line(), "element tag");
                const long long type = to_int(tok[1], reader.line(), "element type");
                const long long ntags = to_int(tok[2], reader.line(), "tag count");
                std::size_t nverts = 0;
                switch (type) {
                case 1: nverts = 2; break;
                case 2: nverts = 3; break;
                case 15: nverts = 1; break;
                default:
                    throw MalformedSection("unsupported element type " + std::to_string(type), reader.line());
                }
                if (ntags < 0 || tok.size() != 3 + static_cast<std::size_t>(ntags) + nverts)
                    throw MalformedSection("element record has wrong field count: '" + rec + "'", reader.line());
                for (long long t = 0; t < ntags; ++t)
                    to_int(tok[3 + t], reader.line(), "element tag value");
                std::array<Index, 3> v{};
                for (std::size_t q = 0; q < nverts; ++q) {
                    const long long tag = to_int(tok[3 + ntags + q], reader.line(), "node reference");
                    const auto it = tag_to_index.find(tag);
                    if (it == tag_to_index.end())
                        throw MalformedSection("reference to undefined node " + std::to_string(tag),
                                               reader.line());
                    v[q] = it->second;
                }
                if (type == 1) {
                    if (v[0] == v[1])
                        throw MalformedSection("line element with repeated node", reader.line());
                    line_nodes.insert(v[0]);
                    line_nodes.insert(v[1]);
                    have_lines = true;
                }
                else if (type == 2) {
                    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
                        throw MalformedSection("triangle with repeated node", reader.line());
                    triangles.push_back(v);
                    triangle_lines.push_back(reader.line());
                }
            }
            expect_end(reader, "$EndElements");
            have_elements = true;
        }
        else if (header.size() > 1 && header[0] == '$' && header.substr(0, 4) != "$End") {
            // unknown section such as $PhysicalNames: skip to its end tag
            const std::string end = "$End" + std::string(header.substr(1));
            for (;;) {
                const std::string body = reader.expect(std::string(header).c_str());
                if (trim(body) == end)
                    break;
            }
        }
        else {
            throw MalformedSection("unexpected content '" + line + "'", reader.line());
        }
    }

    const std::size_t eof_line = reader.line() + 1;
    if (!have_format)
        throw MalformedSection("missing $MeshFormat section", eof_line);
    if (!have_nodes)
        throw MalformedSection("missing $Nodes section", eof_line);
    if (!have_elements)
        throw MalformedSection("missing $Elements section", eof_line);
    if (triangles.empty())
        throw NoTriangles("no triangle elements (type 2)", elements_line);

    const double scale = bbox_diagonal(nodes);
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        auto& tri = triangles[t];
        const double area2 = orient2d(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
        if (std::abs(0.5 * area2) <= area_eps(scale))
            throw MalformedSection("degenerate triangle", triangle_lines[t]);
        if (area2 < 0.0)
            std::swap(tri[1], tri[2]);
    }

    TriMesh mesh;
    mesh.nodes = std::move(nodes);
    mesh.triangles = std::move(triangles);
    if (have_lines) {
        mesh.boundary_nodes.assign(line_nodes.begin(), line_nodes.end());
    }
    else {
        std::set<Index> b;
        for (const EdgeCount& e : count_edges(mesh)) {
            if (e.count == 1) {
                b.insert(e.lo);
                b.insert(e.hi);
            }
        }
        mesh.boundary_nodes.assign(b.begin(), b.end());
    }
    std::vector<Point2> bpts;
    bpts.reserve(mesh.boundary_nodes.size());
    for (Index i : mesh.boundary_nodes)
        bpts.push_back(mesh.nodes[i]);
    mesh.domain = convex_hull(bpts);
    try {
        check_trimesh(mesh);
    }
    catch (const InvalidMesh& e) {
        throw MalformedSection(std::string("invalid mesh: ") + e.what(), elements_line);
    }
    return mesh;
}

TriMesh parse_msh_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw MalformedSection("cannot open '" + path + "'", 0);
    return parse_msh(in);
}

TriMesh parse_msh_string(const std::string& text)
{
    std::istringstream in(text);
    return parse_msh(in);
}

} // namespace mvd
