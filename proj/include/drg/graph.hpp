/**
 * @file graph.hpp
 * @brief Graph input, breadth-first distances, and distance-regularity verification.
 */
#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "drg/matrix.hpp"

namespace drg {

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  ///< u < v, in input order
    std::vector<std::vector<int>> adjacency; ///< sorted neighbour lists

    template <class T>
    Matrix<T> adjacency_matrix() const {
        Matrix<T> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (auto [u, v] : edges) {
            a(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = T(1);
            a(static_cast<std::size_t>(v), static_cast<std::size_t>(u)) = T(1);
        }
        return a;
    }
};

/// Builds a graph from an edge list; rejects loops, repeated edges, bad labels, disconnection.
Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges);

/// Reads the "n m" + m edge-line format ('#' comment lines, LF or CRLF).
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);

/// Writes a graph in the same format load_graph reads.
std::string write_graph(const Graph& g);

struct DistanceData {
    int n = 0;
    int diameter = 0;
    std::vector<int> dist;  ///< row-major n x n

    int operator()(int x, int y) const { return dist[static_cast<std::size_t>(x) * n + y]; }

    /// Vertices at distance i from x, ascending.
    std::vector<int> sphere(int x, int i) const;

    /// 0/1 matrix of the distance-i relation.
    template <class T>
    Matrix<T> distance_matrix(int i) const {
        Matrix<T> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < dist.size(); ++k)
            if (dist[k] == i) a(k / n, k % n) = T(1);
        return a;
    }
};

DistanceData distance_data(const Graph& g);

struct IntersectionNumbers {
    int diameter = 0;
    std::vector<long> b, c, a, k;  ///< b_0..b_D (b_D = 0), c_0..c_D (c_0 = 0), a_i, k_i
    std::vector<long> p;           ///< p^h_ij at index (h*(D+1) + i)*(D+1) + j

    long P(int h, int i, int j) const {
        const int w = diameter + 1;
        return p[static_cast<std::size_t>((h * w + i) * w + j)];
    }
    long valency() const { return b.empty() ? 0 : b[0]; }
};

/// Counts p^h_ij over every vertex pair; throws NotDistanceRegular naming the first mismatch.
IntersectionNumbers verify_distance_regular(const Graph& g, const DistanceData& dd);

namespace graphs {

Graph hamming(int diameter, int q);  ///< H(D, q)
inline Graph hypercube(int diameter) { return hamming(diameter, 2); }
Graph johnson(int n, int k);          ///< J(n, k)
Graph path(int n);
Graph cycle(int n);
Graph complete(int n);
Graph complete_multipartite(int parts, int part_size);
Graph petersen();
Graph line_graph(const Graph& g);

}  // namespace graphs

}  // namespace drg
