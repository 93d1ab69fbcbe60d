#include "drg/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

#include "drg/errors.hpp"
#include "drg/kernels.hpp"

namespace drg {

namespace {

std::vector<long> parse_integers(const std::string& line, int line_no) {
    std::istringstream in(line);
    std::vector<long> out;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            throw ParseError("expected an integer, got '" + tok + "'", line_no);
        }
        if (used != tok.size()) throw ParseError("expected an integer, got '" + tok + "'", line_no);
        out.push_back(v);
    }
    return out;
}

void check_edge(int n, long u, long v, int line_no) {
    if (u < 0 || v < 0 || u >= n || v >= n)
        throw ParseError("vertex label out of range 0.." + std::to_string(n - 1), line_no);
    if (u == v) throw GraphError("loop at vertex " + std::to_string(u), line_no);
    if (u > v) throw ParseError("edge endpoints must satisfy u < v", line_no);
}

Graph assemble(int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& lines) {
    Graph g;
    g.n = n;
    g.edges = edges;
    g.adjacency.assign(static_cast<std::size_t>(n), {});
    std::set<std::pair<int, int>> seen;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [u, v] = edges[e];
        if (!seen.insert({u, v}).second)
            throw GraphError("duplicate edge " + std::to_string(u) + " " + std::to_string(v),
                             lines.empty() ? 0 : lines[e]);
        g.adjacency[static_cast<std::size_t>(u)].push_back(v);
        g.adjacency[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    // connectivity
    std::vector<bool> reached(static_cast<std::size_t>(n), false);
    std::vector<int> stack{0};
    reached[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : g.adjacency[static_cast<std::size_t>(u)])
            if (!reached[static_cast<std::size_t>(w)]) {
                reached[static_cast<std::size_t>(w)] = true;
                ++count;
                stack.push_back(w);
            }
    }
    if (count != n) throw GraphError("graph is disconnected");
    return g;
}

}  // namespace

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw ParseError("graph must have at least one vertex");
    std::vector<std::pair<int, int>> norm;
    for (auto [u, v] : edges) {
        if (u > v) std::swap(u, v);
        check_edge(n, u, v, 0);
        norm.emplace_back(u, v);
    }
    return assemble(n, norm, {});
}

Graph load_graph(std::istream& in) {
    std::string line;
    int line_no = 0;
    long n = -1;
    long m = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') continue;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto ints = parse_integers(line, line_no);
        if (ints.size() != 2) throw ParseError("expected two integers", line_no);
        if (n < 0) {
            n = ints[0];
            m = ints[1];
            if (n < 1 || m < 0) throw ParseError("header must be 'n m' with n >= 1 and m >= 0", line_no);
            continue;
        }
        if (static_cast<long>(edges.size()) == m) throw ParseError("more edge lines than declared", line_no);
        check_edge(static_cast<int>(n), ints[0], ints[1], line_no);
        edges.emplace_back(static_cast<int>(ints[0]), static_cast<int>(ints[1]));
        lines.push_back(line_no);
    }
    if (n < 0) throw ParseError("missing 'n m' header");
    if (static_cast<long>(edges.size()) != m)
        throw ParseError("declared " + std::to_string(m) + " edges, found " + std::to_string(edges.size()), line_no);
    return assemble(static_cast<int>(n), edges, lines);
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open graph file '" + path + "'");
    return load_graph(in);
}

std::string write_graph(const Graph& g) {
    std::ostringstream out;
    out << g.n << ' ' << g.edges.size() << '\n';
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
    return out.str();
}

std::vector<int> DistanceData::sphere(int x, int i) const {
    std::vector<int> out;
    for (int y = 0; y < n; ++y)
        if ((*this)(x, y) == i) out.push_back(y);
    return out;
}

DistanceData distance_data(const Graph& g) {
    DistanceData dd;
    dd.n = g.n;
    dd.dist = parallel::all_pairs_bfs(g.adjacency);
    for (int d : dd.dist) {
        if (d < 0) throw GraphError("graph is disconnected");
        dd.diameter = std::max(dd.diameter, d);
    }
    return dd;
}

IntersectionNumbers verify_distance_regular(const Graph& g, const DistanceData& dd) {
    const int D = dd.diameter;
    const int w = D + 1;
    const std::size_t n = static_cast<std::size_t>(g.n);
    auto counts = parallel::pair_sphere_counts(dd.dist, n, D);
    auto cell = [&](std::size_t x, std::size_t y) { return counts.data() + (x * n + y) * w * w; };

    IntersectionNumbers in;
    in.diameter = D;
    in.p.assign(static_cast<std::size_t>(w * w * w), 0);
    std::vector<std::pair<int, int>> reference(static_cast<std::size_t>(w), {-1, -1});
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            int h = dd(static_cast<int>(x), static_cast<int>(y));
            const int* c = cell(x, y);
            auto& ref = reference[static_cast<std::size_t>(h)];
            if (ref.first < 0) {
                ref = {static_cast<int>(x), static_cast<int>(y)};
                for (int k = 0; k < w * w; ++k) in.p[static_cast<std::size_t>(h * w * w + k)] = c[k];
                continue;
            }
            for (int i = 0; i < w; ++i)
                for (int j = 0; j < w; ++j) {
                    long expected = in.P(h, i, j);
                    if (c[i * w + j] != expected) {
                        std::ostringstream msg;
                        msg << "p^" << h << "_{" << i << "," << j << "} is " << expected << " for vertices ("
                            << ref.first << "," << ref.second << ") but " << c[i * w + j] << " for vertices ("
                            << x << "," << y << ")";
                        throw NotDistanceRegular(msg.str());
                    }
                }
        }
    }

    in.b.assign(static_cast<std::size_t>(w), 0);
    in.c.assign(static_cast<std::size_t>(w), 0);
    in.a.assign(static_cast<std::size_t>(w), 0);
    in.k.assign(static_cast<std::size_t>(w), 0);
    for (int i = 0; i <= D; ++i) {
        in.k[i] = in.P(0, i, i);
        in.a[i] = in.P(i, 1, i);
        if (i > 0) in.c[i] = in.P(i, 1, i - 1);
        if (i < D) in.b[i] = in.P(i, 1, i + 1);
    }
    const long k = in.b[0];
    for (int i = 0; i <= D; ++i) {
        if (in.a[i] + in.b[i] + in.c[i] != k) throw InconsistencyError("c_i + a_i + b_i differs from the valency");
    }
    // k_i = b_0...b_{i-1} / (c_1...c_i)
    mpz_class num = 1, den = 1;
    for (int i = 0; i <= D; ++i) {
        if (i > 0) {
            num *= in.b[i - 1];
            den *= in.c[i];
        }
        if (mpz_class(in.k[i]) * den != num) throw InconsistencyError("sphere sizes disagree with b_i and c_i");
    }
    // A_i A_j = sum_h p^h_ij A_h as matrices
    std::vector<Matrix<double>> a;
    for (int i = 0; i <= D; ++i) a.push_back(dd.distance_matrix<double>(i));
    for (int i = 0; i <= D; ++i)
        for (int j = i; j <= D; ++j) {
            Matrix<double> lhs = a[i] * a[j];
            Matrix<double> rhs(n, n);
            for (int h = 0; h <= D; ++h) rhs += a[h] * static_cast<double>(in.P(h, i, j));
            if (!(lhs == rhs)) throw InconsistencyError("distance matrices do not multiply as p^h_ij predicts");
        }
    return in;
}

namespace graphs {

Graph hamming(int diameter, int q) {
    int n = 1;
    for (int i = 0; i < diameter; ++i) n *= q;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        int place = 1;
        for (int pos = 0; pos < diameter; ++pos, place *= q) {
            int digit = (u / place) % q;
            for (int other = digit + 1; other < q; ++other) edges.emplace_back(u, u + (other - digit) * place);
        }
    }
    std::sort(edges.begin(), edges.end());
    return make_graph(n, edges);
}

Graph johnson(int n, int k) {
    std::vector<unsigned> sets;
    for (unsigned s = 0; s < (1u << n); ++s)
        if (std::popcount(s) == k) sets.push_back(s);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j)
            if (std::popcount(sets[i] & sets[j]) == k - 1) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return make_graph(static_cast<int>(sets.size()), edges);
}

Graph path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return make_graph(n, edges);
}

Graph cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(0, n - 1);
    return make_graph(n, edges);
}

Graph complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return make_graph(n, edges);
}

Graph complete_multipartite(int parts, int part_size) {
    const int n = parts * part_size;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (i / part_size != j / part_size) edges.emplace_back(i, j);
    return make_graph(n, edges);
}

Graph petersen() {
    // Kneser graph K(5,2): 2-subsets of {0..4}, adjacent when disjoint.
    std::vector<unsigned> sets;
    for (unsigned s = 0; s < 32u; ++s)
        if (std::popcount(s) == 2) sets.push_back(s);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j)
            if ((sets[i] & sets[j]) == 0u) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return make_graph(static_cast<int>(sets.size()), edges);
}

Graph line_graph(const Graph& g) {
    std::vector<std::pair<int, int>> edges;
    const auto m = g.edges.size();
    for (std::size_t e = 0; e < m; ++e)
        for (std::size_t f = e + 1; f < m; ++f) {
            auto [a, b] = g.edges[e];
            auto [c, d] = g.edges[f];
            if (a == c || a == d || b == c || b == d) edges.emplace_back(static_cast<int>(e), static_cast<int>(f));
        }
    return make_graph(static_cast<int>(m), edges);
}

}  // namespace graphs

}  // namespace drg
