#pragma once

#include <cstddef>
#include <vector>

namespace mdgi::detail {

/// van Herk / Gil-Werman: out[i] = op(in[i], ..., in[i + k - 1]) for every i
/// in [0, n - k], with at most three applications of `op` per sample.
/// `prefix` and `suffix` are scratch buffers reused across calls.
template <class T, class Op>
void window_reduce(const T* in, std::size_t n, std::size_t k, T* out, Op op,
                   std::vector<T>& prefix, std::vector<T>& suffix) {
  if (k == 0 || n < k) return;
  if (k == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i];
    return;
  }
  prefix.resize(n);
  suffix.resize(n);
  for (std::size_t b = 0; b < n; b += k) {
    const std::size_t e = b + k < n ? b + k : n;
    prefix[b] = in[b];
    for (std::size_t i = b + 1; i < e; ++i) prefix[i] = op(prefix[i - 1], in[i]);
    suffix[e - 1] = in[e - 1];
    for (std::size_t i = e - 1; i-- > b;) suffix[i] = op(suffix[i + 1], in[i]);
  }
  for (std::size_t i = 0; i + k <= n; ++i) out[i] = op(suffix[i], prefix[i + k - 1]);
}

}  // namespace mdgi::detail
