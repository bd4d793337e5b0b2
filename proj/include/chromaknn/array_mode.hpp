#pragma once

#include <span>
#include <vector>

#include "chromaknn/oracle.hpp"

namespace chromaknn {

struct ModeQueryStats {
  long candidate_scans = 0;
};

// Exact range-mode structure over an array of colors: a table of modes for
// every run of whole blocks (block size about sqrt(n)) plus per-color sorted
// occurrence lists. A query takes the stored mode of the inner block run as
// the starting candidate and lets the at most 2*block_size fringe elements
// challenge it, probing occurrence lists so that every probe either rejects a
// challenger or durably raises the best frequency.
class BlockModeTable {
 public:
  // block_size == 0 picks ceil(sqrt(n)).
  explicit BlockModeTable(std::vector<Color> colors, long block_size = 0);

  long size() const { return n_; }
  long block_size() const { return t_; }
  long block_count() const { return nblocks_; }
  int color_bound() const { return ncolors_; }

  // Mode of the closed index range [i, j].
  ModeAnswer mode(long i, long j, ModeQueryStats* stats = nullptr) const;

  // Occurrences of color c inside [i, j], by binary search on its list.
  long color_count(Color c, long i, long j) const;

  ModeAnswer block_span_mode(long bi, long bj) const;
  const std::vector<int>& occurrences(Color c) const { return occ_[c]; }
  Color at(long i) const { return a_[i]; }

 private:
  void check_range(long i, long j) const;

  std::vector<Color> a_;
  long n_ = 0;
  long t_ = 1;
  long nblocks_ = 0;
  int ncolors_ = 0;
  std::vector<ModeAnswer> span_;        // mode of blocks [bi, bj], row-major
  std::vector<std::vector<int>> occ_;   // per color, ascending positions
  std::vector<int> rank_;               // position -> index into its occ_ list
};

// Approximate range-mode structure: for every left endpoint i, the positions
// where the running mode frequency of A[i..j] first reaches each threshold
// ceil((1/(1-eps))^t). A query reads the deepest reached threshold entry not
// past j; the recorded color is returned with its exact in-range frequency,
// which is never below ceil((1-eps) * true mode frequency).
class JumpListSet {
 public:
  struct Jump {
    int pos;
    Color color;
    long threshold;
  };

  struct ApproxAnswer {
    Color color = -1;
    long freq = 0;
    long threshold = 0;       // threshold entry the answer came from
    long next_threshold = 0;  // first threshold the range did not reach
  };

  JumpListSet(std::span<const Color> colors, double epsilon);

  ApproxAnswer query(long i, long j) const;

  double epsilon() const { return eps_; }
  long size() const { return n_; }
  const std::vector<long>& thresholds() const { return thresholds_; }
  std::span<const Jump> jumps_at(long i) const { return lists_[i]; }

 private:
  long n_ = 0;
  double eps_ = 0.0;
  std::vector<long> thresholds_;
  std::vector<std::vector<Jump>> lists_;
  std::vector<std::vector<int>> occ_;
};

}  // namespace chromaknn
