#pragma once

// Data-parallel inner loops. Every kernel has a serial reference next to its
// OpenMP version; both accumulate in the same order, so results are
// bit-identical and the serial one doubles as the test oracle.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace labelgcn::kernels {

/// Below this many multiply-adds the OpenMP version is not worth the fork.
inline constexpr std::size_t kParallelMatmulWork = 1u << 16;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// c (m×n) = a (m×k) · b (k×n), all row-major. c is overwritten.
void matmul_serial(std::span<const double> a, std::span<const double> b, std::span<double> c,
                   std::size_t m, std::size_t k, std::size_t n);
void matmul_parallel(std::span<const double> a, std::span<const double> b, std::span<double> c,
                     std::size_t m, std::size_t k, std::size_t n);
/// Picks serial or parallel by problem size and available threads.
void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c,
            std::size_t m, std::size_t k, std::size_t n);

/// Pairwise cosine of the rows of an n×d matrix into n×n `out`.
/// Diagonal is 0; rows with zero norm produce 0 rows/cols.
void cosine_rows_serial(std::span<const double> vectors, std::size_t n, std::size_t d,
                        std::span<double> out);
void cosine_rows_parallel(std::span<const double> vectors, std::size_t n, std::size_t d,
                          std::span<double> out);

/// Hop counts from every node, flattened n×n; kUnreachable marks disconnected pairs.
std::vector<std::uint32_t> all_pairs_bfs_serial(std::span<const std::vector<std::size_t>> adjacency);
std::vector<std::uint32_t> all_pairs_bfs_parallel(std::span<const std::vector<std::size_t>> adjacency);

/// Single-source BFS into `dist` (size n), reusing `queue` as scratch.
void bfs_from(std::span<const std::vector<std::size_t>> adjacency, std::size_t source,
              std::span<std::uint32_t> dist, std::vector<std::size_t>& queue);

int max_threads();

}  // namespace labelgcn::kernels
