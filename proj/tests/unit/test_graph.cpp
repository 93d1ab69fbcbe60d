#include <doctest.h>

#include <queue>
#include <sstream>

#include "drg/errors.hpp"
#include "drg/graph.hpp"
#include "drg/kernels.hpp"

using namespace drg;
using namespace drg::graphs;

namespace {

std::vector<int> bfs_from(const Graph& g, int s) {
    std::vector<int> d(static_cast<std::size_t>(g.n), -1);
    std::queue<int> q;
    d[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int y : g.adjacency[static_cast<std::size_t>(x)])
            if (d[static_cast<std::size_t>(y)] < 0) {
                d[static_cast<std::size_t>(y)] = d[static_cast<std::size_t>(x)] + 1;
                q.push(y);
            }
    }
    return d;
}

Graph parse(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

}  // namespace

TEST_SUITE("graph_core") {
    TEST_CASE("edge-list parsing") {
        auto g = parse("# triangle\r\n3 3\r\n0 1\r\n1 2\r\n0 2\r\n");
        CHECK(g.n == 3);
        CHECK(g.edges.size() == 3);
        CHECK(parse(write_graph(g)).edges == g.edges);
        CHECK_THROWS_AS(parse("3 2\n0 0\n1 2\n"), ParseError);   // loop
        CHECK_THROWS_AS(parse("3 2\n0 1\n1 0\n"), ParseError);   // repeated edge
        CHECK_THROWS_AS(parse("4 2\n0 1\n2 3\n"), ParseError);   // disconnected
        CHECK_THROWS_AS(parse("3 2\n0 1\n1 5\n"), ParseError);   // label out of range
        CHECK_THROWS_AS(parse("3 3\n0 1\n1 2\n"), ParseError);   // missing edge line
    }

    TEST_CASE("distances match a plain BFS") {
        for (const Graph& g : {hamming(4, 2), johnson(6, 3), petersen(), path(5)}) {
            auto dd = distance_data(g);
            auto flat = serial::all_pairs_bfs(g.adjacency);
            CHECK(flat == parallel::all_pairs_bfs(g.adjacency));
            int diam = 0;
            for (int x = 0; x < g.n; ++x) {
                auto ref = bfs_from(g, x);
                for (int y = 0; y < g.n; ++y) {
                    CHECK(dd(x, y) == ref[static_cast<std::size_t>(y)]);
                    diam = std::max(diam, ref[static_cast<std::size_t>(y)]);
                }
            }
            CHECK(dd.diameter == diam);
        }
    }

    TEST_CASE("intersection numbers of known graphs") {
        auto cube = hypercube(3);
        auto in = verify_distance_regular(cube, distance_data(cube));
        CHECK(in.b == std::vector<long>{3, 2, 1, 0});
        CHECK(in.c == std::vector<long>{0, 1, 2, 3});
        CHECK(in.k == std::vector<long>{1, 3, 3, 1});
        auto j = johnson(6, 3);
        CHECK(j.n == 20);
        auto jn = verify_distance_regular(j, distance_data(j));
        CHECK(jn.diameter == 3);
        // J(n, k): b_i = (k - i)(n - k - i), c_i = i^2
        for (int i = 0; i <= 3; ++i) {
            CHECK(jn.b[static_cast<std::size_t>(i)] == (3 - i) * (3 - i));
            CHECK(jn.c[static_cast<std::size_t>(i)] == i * i);
        }
        auto pet = petersen();
        auto pn = verify_distance_regular(pet, distance_data(pet));
        CHECK(pn.b == std::vector<long>{3, 2, 0});
        CHECK(pn.c == std::vector<long>{0, 1, 1});
        auto p4 = path(4);
        CHECK_THROWS_AS(verify_distance_regular(p4, distance_data(p4)), NotDistanceRegular);
    }

    TEST_CASE("sphere counts") {
        auto g = hypercube(4);
        auto dd = distance_data(g);
        auto s = serial::pair_sphere_counts(dd.dist, static_cast<std::size_t>(g.n), dd.diameter);
        CHECK(s == parallel::pair_sphere_counts(dd.dist, static_cast<std::size_t>(g.n), dd.diameter));
        CHECK(dd.sphere(0, 2).size() == 6);
    }
}
