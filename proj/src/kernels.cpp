#include "labelgcn/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace labelgcn::kernels {

namespace {

inline void matmul_row(std::span<const double> a, std::span<const double> b, std::span<double> c,
                       std::size_t i, std::size_t k, std::size_t n) {
  double* crow = c.data() + i * n;
  std::fill(crow, crow + n, 0.0);
  const double* arow = a.data() + i * k;
  for (std::size_t p = 0; p < k; ++p) {
    const double av = arow[p];
    if (av == 0.0) continue;
    const double* brow = b.data() + p * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
  }
}

inline double dot(const double* x, const double* y, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += x[i] * y[i];
  return s;
}

void cosine_row(std::span<const double> v, std::span<const double> norms, std::size_t n,
                std::size_t d, std::size_t i, std::span<double> out) {
  for (std::size_t j = 0; j < n; ++j) {
    double value = 0.0;
    if (i != j && norms[i] > 0.0 && norms[j] > 0.0) {
      value = dot(v.data() + i * d, v.data() + j * d, d) / (norms[i] * norms[j]);
      value = std::clamp(value, -1.0, 1.0);
    }
    out[i * n + j] = value;
  }
}

std::vector<double> row_norms(std::span<const double> v, std::size_t n, std::size_t d) {
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = std::sqrt(dot(v.data() + i * d, v.data() + i * d, d));
  return norms;
}

}  // namespace

void matmul_serial(std::span<const double> a, std::span<const double> b, std::span<double> c,
                   std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) matmul_row(a, b, c, i, k, n);
}

void matmul_parallel(std::span<const double> a, std::span<const double> b, std::span<double> c,
                     std::size_t m, std::size_t k, std::size_t n) {
  const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) matmul_row(a, b, c, static_cast<std::size_t>(i), k, n);
}

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c,
            std::size_t m, std::size_t k, std::size_t n) {
  if (m > 1 && m * k * n >= kParallelMatmulWork && !omp_in_parallel() && max_threads() > 1) {
    matmul_parallel(a, b, c, m, k, n);
  } else {
    matmul_serial(a, b, c, m, k, n);
  }
}

void cosine_rows_serial(std::span<const double> vectors, std::size_t n, std::size_t d,
                        std::span<double> out) {
  const auto norms = row_norms(vectors, n, d);
  for (std::size_t i = 0; i < n; ++i) cosine_row(vectors, norms, n, d, i, out);
}

void cosine_rows_parallel(std::span<const double> vectors, std::size_t n, std::size_t d,
                          std::span<double> out) {
  const auto norms = row_norms(vectors, n, d);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) cosine_row(vectors, norms, n, d, static_cast<std::size_t>(i), out);
}

void bfs_from(std::span<const std::vector<std::size_t>> adjacency, std::size_t source,
              std::span<std::uint32_t> dist, std::vector<std::size_t>& queue) {
  std::fill(dist.begin(), dist.end(), kUnreachable);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (std::size_t v : adjacency[u]) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
}

std::vector<std::uint32_t> all_pairs_bfs_serial(std::span<const std::vector<std::size_t>> adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::uint32_t> dist(n * n);
  std::vector<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) bfs_from(adjacency, s, {dist.data() + s * n, n}, queue);
  return dist;
}

std::vector<std::uint32_t> all_pairs_bfs_parallel(std::span<const std::vector<std::size_t>> adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::uint32_t> dist(n * n);
#pragma omp parallel
  {
    std::vector<std::size_t> queue;
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n); ++s) {
      const auto src = static_cast<std::size_t>(s);
      bfs_from(adjacency, src, {dist.data() + src * n, n}, queue);
    }
  }
  return dist;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace labelgcn::kernels
