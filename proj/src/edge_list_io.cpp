#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "dwalk/digraph.hpp"
#include "dwalk/error.hpp"

namespace dwalk {

void write_edge_list(std::ostream& os, const Digraph& g) {
    std::string buf;
    buf.reserve(g.edge_count() * 12 + 32);
    buf += std::to_string(g.n());
    buf += ' ';
    buf += std::to_string(g.edge_count());
    buf += '\n';
    char num[24];
    for (Vertex u = 0; u < g.n(); ++u) {
        for (Vertex v : g.out(u)) {
            buf.append(num, std::to_chars(num, num + sizeof num, u).ptr);
            buf += ' ';
            buf.append(num, std::to_chars(num, num + sizeof num, v).ptr);
            buf += '\n';
        }
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string to_edge_list(const Digraph& g) {
    std::ostringstream os;
    write_edge_list(os, g);
    return os.str();
}

namespace {

// Parses exactly two space-separated unsigned decimals.
bool parse_pair(std::string_view line, std::uint64_t& a, std::uint64_t& b) {
    const char* p = line.data();
    const char* end = p + line.size();
    auto r1 = std::from_chars(p, end, a);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') return false;
    auto r2 = std::from_chars(r1.ptr + 1, end, b);
    return r2.ec == std::errc{} && r2.ptr == end;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw ValidationError("edge list line " + std::to_string(line_no) + ": " + what);
}

} // namespace

Digraph read_edge_list(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ValidationError("edge list: empty input");
    }
    if (!line.empty() && line.back() == '\r') fail(1, "CRLF line endings are not accepted");
    std::uint64_t n = 0, m = 0;
    if (!parse_pair(line, n, m)) fail(1, "expected header 'n m'");
    if (n == 0) fail(1, "n must be positive");

    std::vector<Edge> edges;
    edges.reserve(m);
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() && is.peek() == std::char_traits<char>::eof()) break;
        std::uint64_t u = 0, v = 0;
        if (!parse_pair(line, u, v)) fail(line_no, "expected 'u v'");
        if (u >= n || v >= n) fail(line_no, "vertex id out of range");
        if (u == v) fail(line_no, "self-loop");
        Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
        if (!edges.empty() && !(edges.back() < e)) fail(line_no, "edges must be strictly increasing (sorted, no duplicates)");
        edges.push_back(e);
    }
    if (edges.size() != m) {
        throw ValidationError("edge list: header declares " + std::to_string(m) + " edges, found " +
                              std::to_string(edges.size()));
    }
    return Digraph::from_edges(static_cast<std::size_t>(n), std::move(edges));
}

Digraph parse_edge_list(const std::string& text) {
    std::istringstream is(text);
    return read_edge_list(is);
}

Digraph load_edge_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return read_edge_list(in);
}

void save_edge_list(const std::string& path, const Digraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeError("cannot write '" + path + "'");
    write_edge_list(out, g);
}

} // namespace dwalk
