#include "square_granulometry.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <limits>
#include <type_traits>

// Opening by the (2n+1)^2 square for every n. The erosion is carried from one
// scale to the next (nB = (n-1)B + B), so only the dilation is recomputed, on
// the bounding box of the eroded support grown by n. The run time is dominated
// by memory traffic, so each scale makes one pass that erodes a row and
// immediately max-filters it horizontally (per-row sparse table), then one
// van Herk/Gil-Werman pass over column strips for the vertical max and the
// masked sum. All inner loops run along memory rows and vectorize.

namespace mdgi::detail {

namespace {

struct Box {
  std::size_t r0 = 0, r1 = 0, c0 = 0, c1 = 0;  // inclusive
  bool empty = true;
};

constexpr std::size_t kStrip = 128;

template <class T>
class SquareGranulometry {
 public:
  explicit SquareGranulometry(const Dem& dem) : width_(dem.width()), height_(dem.height()) {
    eroded_.assign(dem.values().begin(), dem.values().end());
    mask_.resize(eroded_.size());
    for (std::size_t i = 0; i < mask_.size(); ++i) mask_[i] = dem.mask()[i] ? T(~T{0}) : T{0};
    // Rows whose domain is one interval are summed without reading the mask.
    interval_.resize(height_);
    for (std::size_t r = 0; r < height_; ++r) {
      const std::uint8_t* m = dem.mask().data() + r * width_;
      std::size_t first = width_, last = 0, cells = 0;
      for (std::size_t c = 0; c < width_; ++c) {
        if (!m[c]) continue;
        first = std::min(first, c);
        last = c;
        ++cells;
      }
      interval_[r] = {first, cells == 0 ? 0 : last + 1, cells == 0 || cells == last + 1 - first};
    }
    col_any_.assign(width_, T{0});
    for (auto& h : hmin_) h.assign(width_, T{0});
  }

  std::vector<std::uint64_t> run(std::uint64_t initial_volume) {
    std::vector<std::uint64_t> volumes{initial_volume};
    Box box = initial_support();
    for (std::size_t n = 1; !box.empty; ++n) {
      const Box next = erode_and_filter_rows(box, n);
      // The rows just filtered cover the old box shrunk by one; cells there
      // outside the new support are 0 and do not change the dilation.
      volumes.push_back(next.empty ? 0 : vertical_volume(shrunk(box), n));
      box = next;
    }
    return volumes;
  }

 private:
  // Partial sums over one strip row cannot overflow this type.
  using Acc = std::conditional_t<sizeof(T) == 2, std::uint32_t, std::uint64_t>;

  struct Interval {
    std::size_t begin, end;  // [begin, end) of domain cells
    bool contiguous;
  };

  static Box shrunk(const Box& b) { return {b.r0 + 1, b.r1 - 1, b.c0 + 1, b.c1 - 1, false}; }

  Box initial_support() {
    Box box{height_, 0, width_, 0, true};
    for (std::size_t r = 0; r < height_; ++r) {
      const T* row = eroded_.data() + r * width_;
      for (std::size_t c = 0; c < width_; ++c) {
        if (row[c] == 0) continue;
        box.empty = false;
        box.r0 = std::min(box.r0, r);
        box.r1 = std::max(box.r1, r);
        box.c0 = std::min(box.c0, c);
        box.c1 = std::max(box.c1, c);
      }
    }
    return box;
  }

  void horizontal_min(std::size_t r, std::size_t a, std::size_t b, T* __restrict out) const {
    // Rebased pointers: indexing in[c - 1] directly defeats the vectorizer.
    const T* __restrict left = eroded_.data() + r * width_ + a - 1;
    const T* __restrict mid = left + 1;
    const T* __restrict right = left + 2;
    T* __restrict dst = out + a;
    for (std::size_t c = 0; c < b - a; ++c) dst[c] = std::min(std::min(left[c], mid[c]), right[c]);
  }

  void zero_row(std::size_t r, const Box& box) {
    T* row = eroded_.data() + r * width_;
    std::fill(row + box.c0, row + box.c1 + 1, T{0});
  }

  // eroded_ <- eroded_ minimum-filtered by the 3x3 square with pad 0, and each
  // new row max-filtered over [c - n, c + n] into rows_. Cells on the border of
  // `box` have a zero neighbour and become 0, so only the interior is
  // computed. Returns the bounding box of the new support.
  Box erode_and_filter_rows(const Box& box, std::size_t n) {
    if (box.r1 - box.r0 < 2 || box.c1 - box.c0 < 2) {
      for (std::size_t r = box.r0; r <= box.r1; ++r) zero_row(r, box);
      return {};
    }
    const Box inner = shrunk(box);
    const std::size_t a = inner.c0, b = inner.c1 + 1;  // [a, b)
    prepare_row_filter(inner, n);
    std::fill(col_any_.begin() + static_cast<std::ptrdiff_t>(a),
              col_any_.begin() + static_cast<std::ptrdiff_t>(b), T{0});

    T* up = hmin_[0].data();
    T* mid = hmin_[1].data();
    T* down = hmin_[2].data();
    horizontal_min(box.r0, a, b, up);
    horizontal_min(box.r0 + 1, a, b, mid);
    zero_row(box.r0, box);
    Box next{box.r1, box.r0, box.c1, box.c0, true};
    for (std::size_t r = inner.r0; r <= inner.r1; ++r) {
      horizontal_min(r + 1, a, b, down);
      T* __restrict out = eroded_.data() + r * width_;
      T* __restrict any = col_any_.data();
      const T* __restrict u = up;
      const T* __restrict m = mid;
      const T* __restrict d = down;
      T row_any = 0;
      for (std::size_t c = a; c < b; ++c) {
        const T v = std::min(std::min(u[c], m[c]), d[c]);
        out[c] = v;
        any[c] |= v;
        row_any |= v;
      }
      out[box.c0] = 0;
      out[box.c1] = 0;
      if (row_any != 0) {
        next.empty = false;
        next.r0 = std::min(next.r0, r);
        next.r1 = std::max(next.r1, r);
        filter_row(out, rows_.data() + (r - inner.r0) * filtered_cols_);
      } else {
        std::fill_n(rows_.data() + (r - inner.r0) * filtered_cols_, filtered_cols_, T{0});
      }
      std::swap(up, mid);
      std::swap(mid, down);
    }
    zero_row(box.r1, box);
    if (next.empty) return next;
    std::size_t c = a;
    while (col_any_[c] == 0) ++c;
    next.c0 = c;
    c = b - 1;
    while (col_any_[c] == 0) --c;
    next.c1 = c;
    return next;
  }

  // Output columns [c0 - n, c1 + n] of `inner`, clipped to the grid.
  void prepare_row_filter(const Box& inner, std::size_t n) {
    const std::size_t w = 2 * n + 1;
    seg_c0_ = inner.c0;
    seg_c1_ = inner.c1;
    out_c0_ = inner.c0 >= n ? inner.c0 - n : 0;
    filtered_cols_ = std::min(width_ - 1, inner.c1 + n) - out_c0_ + 1;
    line_len_ = filtered_cols_ + 2 * n;
    level_ = static_cast<std::size_t>(std::bit_width(w)) - 1;
    shift_ = w - (std::size_t{1} << level_);
    line_a_.assign(line_len_, T{0});
    line_b_.resize(line_len_);
    rows_.resize((inner.r1 - inner.r0 + 1) * filtered_cols_);
    frame_ = seg_c0_ - out_c0_ + n;
  }

  // The row segment is placed in a zero-framed buffer covering columns
  // [out_c0 - n, out_c1 + n]; after step t of the sparse table, cur[j] is the
  // max of buffer[j .. j + 2^t - 1].
  void filter_row(const T* row, T* __restrict out) {
    const std::size_t seg_end = frame_ + (seg_c1_ - seg_c0_ + 1);
    std::fill_n(line_a_.data(), frame_, T{0});
    std::copy(row + seg_c0_, row + seg_c1_ + 1, line_a_.data() + frame_);
    std::fill(line_a_.data() + seg_end, line_a_.data() + line_len_, T{0});
    T* cur = line_a_.data();
    T* nxt = line_b_.data();
    for (std::size_t t = 0, step = 1; t < level_; ++t, step <<= 1) {
      const std::size_t valid = line_len_ - 2 * step + 1;
      const T* __restrict src = cur;
      T* __restrict dst = nxt;
      for (std::size_t j = 0; j < valid; ++j) dst[j] = std::max(src[j], src[j + step]);
      std::swap(cur, nxt);
    }
    const T* __restrict src = cur;
    for (std::size_t j = 0; j < filtered_cols_; ++j) out[j] = std::max(src[j], src[j + shift_]);
  }

  // Vertical max over the filtered rows [r - n, r + n] clipped to [r0, r1],
  // summed over the domain. Rows are taken in blocks of w: a window of at most
  // w rows is either split across two adjacent blocks, starts a block, or
  // (clipped at the bottom) ends the last one.
  std::uint64_t vertical_volume(const Box& inner, std::size_t n) {
    const std::size_t w = 2 * n + 1;
    const std::size_t r_lo = inner.r0 >= n ? inner.r0 - n : 0;
    const std::size_t r_hi = std::min(height_ - 1, inner.r1 + n);
    const std::size_t m = inner.r1 - inner.r0 + 1;
    const std::size_t cols = filtered_cols_;
    std::uint64_t total = 0;
    prefix_.resize(m * kStrip);
    suffix_.resize(m * kStrip);
    for (std::size_t s0 = 0; s0 < cols; s0 += kStrip) {
      const std::size_t sw = std::min(kStrip, cols - s0);
      for (std::size_t b0 = 0; b0 < m; b0 += w) {
        const std::size_t b1 = std::min(b0 + w, m);
        std::copy_n(rows_.data() + b0 * cols + s0, sw, prefix_.data() + b0 * kStrip);
        for (std::size_t i = b0 + 1; i < b1; ++i) {
          const T* __restrict in = rows_.data() + i * cols + s0;
          const T* __restrict prev = prefix_.data() + (i - 1) * kStrip;
          T* __restrict out = prefix_.data() + i * kStrip;
          for (std::size_t c = 0; c < sw; ++c) out[c] = std::max(prev[c], in[c]);
        }
        std::copy_n(rows_.data() + (b1 - 1) * cols + s0, sw, suffix_.data() + (b1 - 1) * kStrip);
        for (std::size_t i = b1 - 1; i-- > b0;) {
          const T* __restrict in = rows_.data() + i * cols + s0;
          const T* __restrict next = suffix_.data() + (i + 1) * kStrip;
          T* __restrict out = suffix_.data() + i * kStrip;
          for (std::size_t c = 0; c < sw; ++c) out[c] = std::max(next[c], in[c]);
        }
      }
      const std::size_t g0 = out_c0_ + s0;  // grid column of strip entry 0
      for (std::size_t r = r_lo; r <= r_hi; ++r) {
        const Interval& iv = interval_[r];
        if (iv.begin >= g0 + sw || iv.end <= g0) continue;
        const std::size_t a = r >= inner.r0 + n ? r - n - inner.r0 : 0;
        const std::size_t b = std::min(r + n, inner.r1) - inner.r0;
        const T* s;
        const T* p;
        if (a / w != b / w) {
          s = suffix_.data() + a * kStrip;
          p = prefix_.data() + b * kStrip;
        } else {
          s = p = a % w == 0 ? prefix_.data() + b * kStrip : suffix_.data() + a * kStrip;
        }
        Acc row_sum = 0;
        if (iv.contiguous) {
          const std::size_t lo = std::max(iv.begin, g0) - g0;
          const std::size_t hi = std::min(iv.end, g0 + sw) - g0;
          for (std::size_t c = lo; c < hi; ++c) row_sum += std::max(s[c], p[c]);
        } else {
          const T* __restrict msk = mask_.data() + r * width_ + g0;
          for (std::size_t c = 0; c < sw; ++c) row_sum += static_cast<T>(std::max(s[c], p[c]) & msk[c]);
        }
        total += row_sum;
      }
    }
    return total;
  }

  std::size_t width_;
  std::size_t height_;
  std::vector<T> eroded_;
  std::vector<T> mask_;
  std::vector<Interval> interval_;
  std::vector<T> col_any_;
  std::vector<T> hmin_[3];

  std::size_t seg_c0_ = 0, seg_c1_ = 0, out_c0_ = 0, filtered_cols_ = 0;
  std::size_t line_len_ = 0, level_ = 0, shift_ = 0, frame_ = 0;
  std::vector<T> line_a_, line_b_, rows_;
  std::vector<T> prefix_, suffix_;
};

}  // namespace

std::vector<std::uint64_t> square_volumes(const Dem& dem) {
  std::uint64_t v0 = 0;
  for (Elevation e : dem.values()) v0 += e;
  if (v0 == 0) return {0};
  if (dem.max_elevation() <= std::numeric_limits<std::uint16_t>::max())
    return SquareGranulometry<std::uint16_t>(dem).run(v0);
  return SquareGranulometry<std::uint32_t>(dem).run(v0);
}

}  // namespace mdgi::detail
