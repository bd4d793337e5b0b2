#include "chromaknn/array_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chromaknn {

namespace {

int color_bound_of(std::span<const Color> a) {
  int hi = -1;
  for (Color c : a) {
    if (c < 0) throw std::invalid_argument("colors must be non-negative");
    hi = std::max(hi, c);
  }
  return hi + 1;
}

}  // namespace

BlockModeTable::BlockModeTable(std::vector<Color> colors, long block_size)
    : a_(std::move(colors)), n_(static_cast<long>(a_.size())) {
  ncolors_ = color_bound_of(a_);
  if (block_size < 0) throw std::invalid_argument("block size must be positive");
  t_ = block_size > 0 ? block_size
                      : std::max<long>(1, static_cast<long>(std::ceil(std::sqrt(
                                              static_cast<double>(std::max<long>(n_, 1))))));
  nblocks_ = (n_ + t_ - 1) / t_;

  occ_.assign(ncolors_, {});
  rank_.resize(n_);
  for (long i = 0; i < n_; ++i) {
    rank_[i] = static_cast<int>(occ_[a_[i]].size());
    occ_[a_[i]].push_back(static_cast<int>(i));
  }

  span_.assign(static_cast<std::size_t>(nblocks_ * nblocks_), ModeAnswer{});
  std::vector<long> counts(ncolors_, 0);
  std::vector<Color> touched;
  for (long bi = 0; bi < nblocks_; ++bi) {
    for (Color c : touched) counts[c] = 0;
    touched.clear();
    ModeAnswer best{-1, 0};
    for (long pos = bi * t_; pos < n_; ++pos) {
      const Color c = a_[pos];
      if (counts[c] == 0) touched.push_back(c);
      if (++counts[c] > best.freq) best = {c, counts[c]};
      const long bj = pos / t_;
      if (pos == n_ - 1 || pos == (bj + 1) * t_ - 1)
        span_[static_cast<std::size_t>(bi * nblocks_ + bj)] = best;
    }
  }
}

void BlockModeTable::check_range(long i, long j) const {
  if (i < 0 || j < i || j >= n_)
    throw std::out_of_range("mode query range out of bounds");
}

ModeAnswer BlockModeTable::block_span_mode(long bi, long bj) const {
  if (bi < 0 || bj < bi || bj >= nblocks_)
    throw std::out_of_range("block span out of bounds");
  return span_[static_cast<std::size_t>(bi * nblocks_ + bj)];
}

long BlockModeTable::color_count(Color c, long i, long j) const {
  check_range(i, j);
  if (c < 0 || c >= ncolors_) return 0;
  const auto& occ = occ_[c];
  const auto lo = std::lower_bound(occ.begin(), occ.end(), static_cast<int>(i));
  const auto hi = std::upper_bound(occ.begin(), occ.end(), static_cast<int>(j));
  return hi - lo;
}

ModeAnswer BlockModeTable::mode(long i, long j, ModeQueryStats* stats) const {
  check_range(i, j);
  ModeQueryStats local;
  ModeQueryStats& st = stats ? *stats : local;

  const long inner_lo = (i + t_ - 1) / t_;       // first block fully inside
  const long inner_hi = (j + 1) / t_ - 1;        // last block fully inside
  ModeAnswer best{-1, 0};
  long pre_end, suf_begin;
  if (inner_lo <= inner_hi) {
    best = span_[static_cast<std::size_t>(inner_lo * nblocks_ + inner_hi)];
    pre_end = inner_lo * t_;        // prefix is [i, pre_end)
    suf_begin = (inner_hi + 1) * t_;  // suffix is [suf_begin, j]
  } else {
    pre_end = j + 1;
    suf_begin = j + 1;
  }

  // A prefix element challenges only at its first occurrence inside the
  // range; from there, its occurrence list is probed forward one step past
  // the current best frequency so every successful probe raises it by one.
  for (long p = i; p < pre_end; ++p) {
    ++st.candidate_scans;
    const Color c = a_[p];
    const auto& occ = occ_[c];
    const long idx = rank_[p];
    if (idx > 0 && occ[idx - 1] >= i) continue;
    while (idx + best.freq < static_cast<long>(occ.size()) &&
           occ[idx + best.freq] <= j) {
      best = {c, best.freq + 1};
      ++st.candidate_scans;
    }
  }

  // Suffix mirror image: challenge at the last in-range occurrence, probe
  // backward.
  for (long p = suf_begin; p <= j; ++p) {
    ++st.candidate_scans;
    const Color c = a_[p];
    const auto& occ = occ_[c];
    const long idx = rank_[p];
    if (idx + 1 < static_cast<long>(occ.size()) && occ[idx + 1] <= j) continue;
    while (idx - best.freq >= 0 && occ[idx - best.freq] >= i) {
      best = {c, best.freq + 1};
      ++st.candidate_scans;
    }
  }

  return best;
}

JumpListSet::JumpListSet(std::span<const Color> colors, double epsilon)
    : n_(static_cast<long>(colors.size())), eps_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  const int ncolors = color_bound_of(colors);

  // Threshold ladder ceil(x^t), x = 1/(1-eps), deduplicated. The walk below
  // additionally enforces (1-eps)*(next - 1) <= current so the approximation
  // guarantee survives any rounding in pow; for sane eps it never fires.
  const double x = 1.0 / (1.0 - eps_);
  double p = 1.0;
  while (true) {
    const long v = static_cast<long>(std::ceil(p));
    if (v > n_) break;
    if (thresholds_.empty()) {
      thresholds_.push_back(v);
    } else if (v > thresholds_.back()) {
      while ((1.0 - eps_) * static_cast<double>(v - 1) >
                 static_cast<double>(thresholds_.back()) &&
             thresholds_.back() + 1 < v) {
        const long fill = std::min<long>(
            v - 1, static_cast<long>(std::floor(
                       static_cast<double>(thresholds_.back()) / (1.0 - eps_))) +
                       1);
        thresholds_.push_back(fill);
      }
      thresholds_.push_back(v);
    }
    p *= x;
  }

  occ_.assign(ncolors, {});
  for (long i = 0; i < n_; ++i) occ_[colors[i]].push_back(static_cast<int>(i));

  lists_.assign(static_cast<std::size_t>(n_), {});
  std::vector<long> counts(ncolors, 0);
  std::vector<Color> touched;
  for (long i = 0; i < n_; ++i) {
    for (Color c : touched) counts[c] = 0;
    touched.clear();
    long f = 0;
    std::size_t next = 0;
    auto& list = lists_[static_cast<std::size_t>(i)];
    for (long j = i; j < n_; ++j) {
      const Color c = colors[j];
      if (counts[c] == 0) touched.push_back(c);
      if (++counts[c] > f) {
        f = counts[c];
        if (next < thresholds_.size() && f == thresholds_[next]) {
          list.push_back({static_cast<int>(j), c, f});
          ++next;
        }
      }
    }
  }
}

JumpListSet::ApproxAnswer JumpListSet::query(long i, long j) const {
  if (i < 0 || j < i || j >= n_)
    throw std::out_of_range("mode query range out of bounds");
  const auto& list = lists_[static_cast<std::size_t>(i)];
  // Deepest entry with pos <= j; the first entry sits at pos == i.
  std::size_t lo = 0, hi = list.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (list[mid].pos <= j) lo = mid + 1;
    else hi = mid;
  }
  const Jump& jump = list[lo - 1];

  const auto& occ = occ_[jump.color];
  const auto first = std::lower_bound(occ.begin(), occ.end(), static_cast<int>(i));
  const auto last = std::upper_bound(occ.begin(), occ.end(), static_cast<int>(j));

  ApproxAnswer ans;
  ans.color = jump.color;
  ans.freq = last - first;
  ans.threshold = jump.threshold;
  if (lo < list.size()) {
    ans.next_threshold = list[lo].threshold;
  } else {
    const auto it =
        std::upper_bound(thresholds_.begin(), thresholds_.end(), jump.threshold);
    ans.next_threshold =
        it == thresholds_.end() ? std::numeric_limits<long>::max() : *it;
  }
  return ans;
}

}  // namespace chromaknn
