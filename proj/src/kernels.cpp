#include "drg/kernels.hpp"

#include <deque>

namespace drg {

namespace {

void bfs_from(const std::vector<std::vector<int>>& adjacency, std::size_t source, int* row) {
    const std::size_t n = adjacency.size();
    for (std::size_t v = 0; v < n; ++v) row[v] = -1;
    std::deque<int> queue;
    row[source] = 0;
    queue.push_back(static_cast<int>(source));
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int w : adjacency[static_cast<std::size_t>(u)]) {
            if (row[w] < 0) {
                row[w] = row[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

void count_row(const std::vector<int>& dist, std::size_t n, int diameter, std::size_t x, int* out) {
    const std::size_t w = static_cast<std::size_t>(diameter + 1);
    for (std::size_t y = 0; y < n; ++y) {
        int* cell = out + y * w * w;
        for (std::size_t z = 0; z < n; ++z) {
            int i = dist[x * n + z];
            int j = dist[y * n + z];
            ++cell[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)];
        }
    }
}

}  // namespace

namespace serial {

std::vector<int> all_pairs_bfs(const std::vector<std::vector<int>>& adjacency) {
    const std::size_t n = adjacency.size();
    std::vector<int> dist(n * n, -1);
    for (std::size_t s = 0; s < n; ++s) bfs_from(adjacency, s, dist.data() + s * n);
    return dist;
}

std::vector<int> pair_sphere_counts(const std::vector<int>& dist, std::size_t n, int diameter) {
    const std::size_t w = static_cast<std::size_t>(diameter + 1);
    std::vector<int> counts(n * n * w * w, 0);
    for (std::size_t x = 0; x < n; ++x) count_row(dist, n, diameter, x, counts.data() + x * n * w * w);
    return counts;
}

}  // namespace serial

namespace parallel {

std::vector<int> all_pairs_bfs(const std::vector<std::vector<int>>& adjacency) {
    const std::size_t n = adjacency.size();
    std::vector<int> dist(n * n, -1);
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long s = 0; s < count; ++s) {
        auto src = static_cast<std::size_t>(s);
        bfs_from(adjacency, src, dist.data() + src * n);
    }
    return dist;
}

std::vector<int> pair_sphere_counts(const std::vector<int>& dist, std::size_t n, int diameter) {
    const std::size_t w = static_cast<std::size_t>(diameter + 1);
    std::vector<int> counts(n * n * w * w, 0);
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long x = 0; x < count; ++x) {
        auto xs = static_cast<std::size_t>(x);
        count_row(dist, n, diameter, xs, counts.data() + xs * n * w * w);
    }
    return counts;
}

}  // namespace parallel

}  // namespace drg
