#include "vsparse/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace vsparse {

std::vector<int> Rng::sample_without_replacement(int n, int m) {
  if (n < 0 || m < 0 || m > n) {
    throw std::invalid_argument("sample_without_replacement: need 0 <= m <= n");
  }
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace vsparse
