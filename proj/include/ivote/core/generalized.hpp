#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "ivote/core/box.hpp"
#include "ivote/core/canonize.hpp"
#include "ivote/core/counters.hpp"
#include "ivote/core/grid.hpp"
#include "ivote/core/intersect.hpp"
#include "ivote/core/naive.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/core/tolerance.hpp"
#include "ivote/core/vote_result.hpp"

namespace ivote {

// Recursion statistics, indexed by depth (root = 0). Surface counts are
// taken after canonization, so level_surfaces[q] / level_nodes[q] is the
// mean surviving list size at depth q.
struct EngineStats {
  static constexpr int kMaxLevels = 64;
  std::array<std::uint64_t, kMaxLevels> level_nodes{};
  std::array<std::uint64_t, kMaxLevels> level_surfaces{};
  std::uint64_t canonize_calls = 0;
  std::uint64_t merged = 0;
  std::uint64_t fallback = 0;
  int max_level = 0;

  EngineStats& operator+=(const EngineStats& o) {
    for (int q = 0; q < kMaxLevels; ++q) {
      level_nodes[q] += o.level_nodes[q];
      level_surfaces[q] += o.level_surfaces[q];
    }
    canonize_calls += o.canonize_calls;
    merged += o.merged;
    fallback += o.fallback;
    max_level = std::max(max_level, o.max_level);
    return *this;
  }
};

// canonize       round surfaces to per-box lattices and merge duplicates
//                (the approximate algorithm); off gives exact subdivision.
// prune          skip children whose pooled weight cannot beat the best
//                count already found in the same root-child subtree. Never
//                changes the winning count; with several tied cells it may
//                report a different one of them.
// threads        worker threads over the root's children. Tasks are fixed
//                and results merge in a fixed order, so the output is
//                identical for every thread count.
// canonize_gate  multiplier on the lattice-capacity threshold deciding when
//                a node's list is long enough to be worth canonizing.
// keep_top       also return the keep_top highest-count cells in
//                VoteResult::candidates (0 = winner only). With pruning the
//                cutoff drops to the k-th best count, so subtrees survive
//                longer; among cells tied at the cutoff the kept set may
//                differ, as for the winner.
struct GeneralizedConfig {
  bool canonize = true;
  bool prune = false;
  int threads = 1;
  double canonize_gate = 1.0;
  std::size_t keep_top = 0;
  EngineStats* stats = nullptr;
};

namespace detail {

struct IndexRange {
  std::int64_t a = 0, b = 0;  // [a, b) on the padded index grid
};

struct Candidate {
  bool valid = false;
  std::uint64_t count = 0;
  std::array<std::int64_t, kMaxDim> cell{};
  std::vector<std::uint32_t> ids;
};

inline bool cell_less(const std::array<std::int64_t, kMaxDim>& a,
                      const std::array<std::int64_t, kMaxDim>& b, int d) {
  for (int j = 0; j < d; ++j)
    if (a[j] != b[j]) return a[j] < b[j];
  return false;
}

inline bool beats(const Candidate& cand, const Candidate& best, int d) {
  if (!best.valid) return true;
  if (cand.count != best.count) return cand.count > best.count;
  return cell_less(cand.cell, best.cell, d);
}

struct CellCount {
  std::uint64_t count = 0;
  std::array<std::int64_t, kMaxDim> cell{};
};

// Bounded best-k store: a min-heap on (count, cell) whose top is the worst
// kept entry. Cells are globally unique (each belongs to one leaf), so the
// merged order is a total one and thread-count independent.
class TopCells {
 public:
  void init(std::size_t cap, int d) {
    cap_ = cap;
    d_ = d;
  }
  bool active() const { return cap_ > 0; }
  std::uint64_t floor_count() const {
    return heap_.size() == cap_ && cap_ > 0 ? heap_.front().count : 0;
  }
  void offer(const CellCount& cc) {
    if (cap_ == 0) return;
    if (heap_.size() == cap_) {
      if (!worse(heap_.front(), cc)) return;
      std::pop_heap(heap_.begin(), heap_.end(),
                    [this](const CellCount& a, const CellCount& b) { return worse(b, a); });
      heap_.back() = cc;
    } else {
      heap_.push_back(cc);
    }
    std::push_heap(heap_.begin(), heap_.end(),
                   [this](const CellCount& a, const CellCount& b) { return worse(b, a); });
  }
  std::vector<CellCount>& entries() { return heap_; }

 private:
  // strict "a ranks below b": smaller count, ties broken toward larger cells
  bool worse(const CellCount& a, const CellCount& b) const {
    if (a.count != b.count) return a.count < b.count;
    return cell_less(b.cell, a.cell, d_);
  }
  std::size_t cap_ = 0;
  int d_ = 6;
  std::vector<CellCount> heap_;
};

// Hierarchical voting over a power-of-two padding of the effective grid.
// Node = per-axis index ranges; every axis with more than one cell splits at
// its midpoint, children visited in lexicographic order (axis 0 most
// significant), children lying wholly in the padding are dropped, and node
// boxes are clipped back to the real grid. A leaf is exactly one grid cell
// and admits a surface with the same index arithmetic as the dense scan,
// widened by the surface's accumulated drift bound, so with canonization off
// the winning count matches the dense scan exactly.
template <SurfaceModel M>
class VoteEngine {
 public:
  using Ranges = std::array<IndexRange, kMaxDim>;

  struct Task {
    Ranges r{};
    std::vector<CanonSurface> list;
  };

  struct TaskState {
    Candidate best;
    TopCells top;
    OperationCounts ops;
    EngineStats stats;
    bool truncated = false;
  };

  VoteEngine(const M& m, const GridSpec& grid, const GeneralizedConfig& cfg,
             const std::array<double, kMaxDependent>& epsp, int depth_cap)
      : m_(m),
        grid_(grid),
        cfg_(cfg),
        epsp_(epsp),
        depth_cap_(depth_cap),
        d_(m.ambient_dim()),
        k_(m.surface_dim()),
        nd_(d_ - k_) {
    for (int j = 0; j < nd_; ++j) base_slack_[j] = 1.5 * grid_.eff[k_ + j];
  }

  VoteResult run(const std::vector<ParametricSurface>& surfaces) {
    Ranges root{};
    bool root_leaf = true;
    for (int j = 0; j < d_; ++j) {
      root[j] = {0, static_cast<std::int64_t>(
                        std::bit_ceil(static_cast<std::uint64_t>(grid_.cells[j])))};
      root_leaf = root_leaf && root[j].b == 1;
    }

    std::vector<CanonSurface> list;
    list.reserve(surfaces.size());
    for (const ParametricSurface& s : surfaces) {
      CanonSurface cs;
      cs.s = s;
      list.push_back(std::move(cs));
    }

    TaskState root_ts;
    root_ts.top.init(cfg_.keep_top, d_);
    std::vector<Task> tasks;
    if (list.empty()) {
      // nothing to do
    } else if (root_leaf) {
      if (cfg_.canonize) maybe_canonize(node_box(root), list, root_ts);
      record(0, list.size(), root_ts);
      leaf(root, list, root_ts);
    } else {
      // Root phase runs serially: canonize once, then split the children
      // into independent tasks. Pruning never crosses task boundaries.
      if (cfg_.canonize) maybe_canonize(node_box(root), list, root_ts);
      record(0, list.size(), root_ts);
      expand(root, list, 0, root_ts, &tasks);
    }

    std::vector<TaskState> slots(tasks.size());
    for (TaskState& s : slots) s.top.init(cfg_.keep_top, d_);
    if (!tasks.empty()) {
      const std::size_t nt = tasks.size();
      const int workers = static_cast<int>(
          std::min<std::size_t>(std::max(cfg_.threads, 1), nt));
      if (workers <= 1) {
        for (std::size_t i = 0; i < nt; ++i)
          descend(tasks[i].r, std::move(tasks[i].list), 1, slots[i]);
      } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errs(nt);
        auto work = [&] {
          for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= nt) return;
            try {
              descend(tasks[i].r, std::move(tasks[i].list), 1, slots[i]);
            } catch (...) {
              errs[i] = std::current_exception();
            }
          }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
        for (std::exception_ptr& e : errs)
          if (e) std::rethrow_exception(e);
      }
    }

    for (TaskState& s : slots) {
      root_ts.ops += s.ops;
      root_ts.stats += s.stats;
      root_ts.truncated = root_ts.truncated || s.truncated;
      if (s.best.valid && beats(s.best, root_ts.best, d_)) root_ts.best = std::move(s.best);
    }
    if (cfg_.stats) *cfg_.stats += root_ts.stats;

    VoteResult res;
    res.ops = root_ts.ops;
    res.truncated = root_ts.truncated;
    if (cfg_.keep_top > 0) {
      std::vector<CellCount> all = std::move(root_ts.top.entries());
      for (TaskState& s : slots) {
        std::vector<CellCount>& e = s.top.entries();
        all.insert(all.end(), e.begin(), e.end());
      }
      std::sort(all.begin(), all.end(), [this](const CellCount& a, const CellCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return cell_less(a.cell, b.cell, d_);
      });
      if (all.size() > cfg_.keep_top) all.resize(cfg_.keep_top);
      res.candidates.reserve(all.size());
      for (const CellCount& cc : all) {
        VoteCandidate vc;
        vc.count = cc.count;
        vc.point.resize(d_);
        for (int j = 0; j < d_; ++j) vc.point[j] = grid_.center(j, cc.cell[j]);
        res.candidates.push_back(std::move(vc));
      }
    }
    res.point.resize(d_);
    if (root_ts.best.valid) {
      res.count = root_ts.best.count;
      res.inlier_ids = std::move(root_ts.best.ids);
      std::sort(res.inlier_ids.begin(), res.inlier_ids.end());
      res.inlier_ids.erase(std::unique(res.inlier_ids.begin(), res.inlier_ids.end()),
                           res.inlier_ids.end());
      for (int j = 0; j < d_; ++j) res.point[j] = grid_.center(j, root_ts.best.cell[j]);
    } else {
      for (int j = 0; j < d_; ++j) res.point[j] = grid_.center(j, 0);
    }
    return res;
  }

 private:
  Box node_box(const Ranges& r) const {
    Box b;
    b.dim = d_;
    for (int j = 0; j < d_; ++j) {
      const std::int64_t hi = std::min(r[j].b, grid_.cells[j]);
      b.lo[j] = r[j].a == 0
                    ? grid_.box.lo[j]
                    : grid_.box.lo[j] + static_cast<double>(r[j].a) * grid_.eff[j];
      b.hi[j] = hi == grid_.cells[j]
                    ? grid_.box.hi[j]
                    : grid_.box.lo[j] + static_cast<double>(hi) * grid_.eff[j];
    }
    return b;
  }

  bool is_leaf(const Ranges& r) const {
    for (int j = 0; j < d_; ++j)
      if (r[j].b - r[j].a != 1) return false;
    return true;
  }

  void record(int depth, std::size_t nsurf, TaskState& ts) const {
    ts.stats.level_nodes[depth] += 1;
    ts.stats.level_surfaces[depth] += nsurf;
    ts.stats.max_level = std::max(ts.stats.max_level, depth);
  }

  void maybe_canonize(const Box& nb, std::vector<CanonSurface>& list, TaskState& ts) {
    double slack[kMaxDependent];
    for (int j = 0; j < nd_; ++j) slack[j] = base_slack_[j] + epsp_[j];
    const double cap = canonical_capacity(m_, nb, epsp_.data(), slack);
    if (static_cast<double>(list.size()) <= cfg_.canonize_gate * cap) return;
    CanonizeStats cst;
    list = canonize_surfaces(m_, std::move(list), nb, epsp_.data(), ts.ops, &cst);
    ++ts.stats.canonize_calls;
    ts.stats.merged += cst.merged;
    ts.stats.fallback += cst.fallback;
  }

  void descend(const Ranges& r, std::vector<CanonSurface> list, int depth, TaskState& ts) {
    if (is_leaf(r)) {
      if (cfg_.canonize) maybe_canonize(node_box(r), list, ts);
      record(depth, list.size(), ts);
      leaf(r, list, ts);
      return;
    }
    if (depth >= depth_cap_) {
      ts.truncated = true;
      record(depth, list.size(), ts);
      coarse_leaf(r, list, ts);
      return;
    }
    if (cfg_.canonize) maybe_canonize(node_box(r), list, ts);
    record(depth, list.size(), ts);
    expand(r, list, depth, ts, nullptr);
  }

  void expand(const Ranges& r, const std::vector<CanonSurface>& list, int depth,
              TaskState& ts, std::vector<Task>* tasks) {
    int split_axes[kMaxDim], ns = 0;
    for (int j = 0; j < d_; ++j)
      if (r[j].b - r[j].a > 1) split_axes[ns++] = j;
    const bool want_bound = !tasks && cfg_.prune;
    double slack[kMaxDependent];
    for (unsigned o = 0; o < (1u << ns); ++o) {
      Ranges cr = r;
      bool padding = false;
      for (int s = 0; s < ns; ++s) {
        const int j = split_axes[s];
        const std::int64_t mid = (r[j].a + r[j].b) / 2;
        cr[j] = (o >> (ns - 1 - s)) & 1u ? IndexRange{mid, r[j].b}
                                         : IndexRange{r[j].a, mid};
        if (cr[j].a >= grid_.cells[j]) {
          padding = true;
          break;
        }
      }
      if (padding) continue;
      const Box cb = node_box(cr);
      std::vector<CanonSurface> clist;
      std::uint64_t bound = 0;
      for (const CanonSurface& cs : list) {
        for (int j = 0; j < nd_; ++j)
          slack[j] = base_slack_[j] + cs.drift[j] + 1e-9 * grid_.eff[k_ + j];
        ++ts.ops.box_intersection_calls;
        if (!surface_intersects_box(m_, cs.s.t.data(), cs.s.f.data(), cb, slack)) continue;
        clist.push_back(cs);
        if (want_bound) bound += cs.weight;
      }
      if (clist.empty()) continue;
      if (tasks) {
        tasks->push_back(Task{cr, std::move(clist)});
        continue;
      }
      if (want_bound) {
        const std::uint64_t cut = ts.top.active()
                                      ? ts.top.floor_count()
                                      : (ts.best.valid ? ts.best.count : 0);
        if (cut > 0 && bound <= cut) continue;
      }
      descend(cr, std::move(clist), depth + 1, ts);
    }
  }

  // One grid cell: the admission test is the dense scan's index arithmetic
  // with the vote radius widened by each surface's drift bound.
  void leaf(const Ranges& r, const std::vector<CanonSurface>& list, TaskState& ts) {
    std::array<std::int64_t, kMaxDim> cell{};
    for (int j = 0; j < d_; ++j) cell[j] = r[j].a;
    double x[kMaxDim] = {}, dep[kMaxDependent] = {};
    for (int j = 0; j < k_; ++j) x[j] = grid_.center(j, cell[j]);
    std::uint64_t cnt = 0;
    std::vector<const CanonSurface*> voters;
    for (const CanonSurface& cs : list) {
      ++ts.ops.surface_evaluations;
      if (!evaluate_surface(m_, cs.s, x, dep)) continue;
      bool in = true;
      for (int j = 0; j < nd_ && in; ++j) {
        const auto [l, h] = vote_index_range(grid_, k_ + j, dep[j],
                                             1.5 * grid_.eff[k_ + j] + cs.drift[j]);
        in = l <= cell[k_ + j] && cell[k_ + j] <= h;
      }
      if (!in) continue;
      ++ts.ops.cells_touched;
      cnt += cs.weight;
      voters.push_back(&cs);
    }
    submit(cell, cnt, voters, ts);
  }

  // Depth-capped node: score the whole box at its center cell using the
  // conservative box test. Only reachable when the cap is smaller than the
  // grid needs, which the cap formula rules out for unit-scale boxes; the
  // result is flagged truncated.
  void coarse_leaf(const Ranges& r, const std::vector<CanonSurface>& list, TaskState& ts) {
    const Box nb = node_box(r);
    std::array<std::int64_t, kMaxDim> cell{};
    for (int j = 0; j < d_; ++j) cell[j] = grid_.clamp_index(j, grid_.index(j, nb.center(j)));
    double slack[kMaxDependent];
    std::uint64_t cnt = 0;
    std::vector<const CanonSurface*> voters;
    for (const CanonSurface& cs : list) {
      for (int j = 0; j < nd_; ++j) slack[j] = base_slack_[j] + cs.drift[j];
      ++ts.ops.box_intersection_calls;
      if (!surface_intersects_box(m_, cs.s.t.data(), cs.s.f.data(), nb, slack)) continue;
      ++ts.ops.cells_touched;
      cnt += cs.weight;
      voters.push_back(&cs);
    }
    submit(cell, cnt, voters, ts);
  }

  void submit(const std::array<std::int64_t, kMaxDim>& cell, std::uint64_t cnt,
              const std::vector<const CanonSurface*>& voters, TaskState& ts) const {
    if (cnt == 0) return;
    if (ts.top.active()) ts.top.offer(CellCount{cnt, cell});
    Candidate cand;
    cand.valid = true;
    cand.count = cnt;
    cand.cell = cell;
    if (!beats(cand, ts.best, d_)) return;
    for (const CanonSurface* p : voters)
      cand.ids.insert(cand.ids.end(), p->s.source_ids.begin(), p->s.source_ids.end());
    ts.best = std::move(cand);
  }

  const M& m_;
  const GridSpec& grid_;
  GeneralizedConfig cfg_;
  std::array<double, kMaxDependent> epsp_{};
  std::array<double, kMaxDependent> base_slack_{};
  int depth_cap_;
  int d_, k_, nd_;
};

}  // namespace detail

// Hierarchical voting on the effective grid of (box, tol). With canonization
// off the winning count (and, absent ties, the winning cell) equals the
// dense scan's; with canonization on, merged surfaces vote through their
// representative with their pooled weight and the admission window widens by
// the tracked drift bound, so planted structure is never lost to rounding.
template <SurfaceModel M>
VoteResult generalized_vote(const M& m, const std::vector<ParametricSurface>& surfaces,
                            const Box& box, const Tolerance& tol,
                            const GeneralizedConfig& cfg = {}) {
  const GridSpec grid = GridSpec::make(box, tol);
  const int d = m.ambient_dim(), k = m.surface_dim(), nd = d - k;
  const int l = m.essential_count();
  for (const ParametricSurface& s : surfaces)
    if (s.d != d || s.k != k || static_cast<int>(s.t.size()) != l ||
        static_cast<int>(s.f.size()) != nd)
      throw std::invalid_argument("generalized_vote: surface does not match model shape");

  const double c =
      tol.eps_prime_scale > 0.0 ? tol.eps_prime_scale : m.default_eps_prime_scale();
  std::array<double, kMaxDependent> epsp{};
  for (int j = 0; j < nd; ++j) epsp[j] = eps_prime(grid.eff[k + j], c);

  double mineps = grid.eff[0];
  for (int j = 1; j < d; ++j) mineps = std::fmin(mineps, grid.eff[j]);
  int depth_cap = 2;
  if (mineps < 1.0)
    depth_cap = static_cast<int>(std::ceil(std::log2(1.0 / mineps))) + 2;
  depth_cap = std::min(depth_cap, EngineStats::kMaxLevels - 1);

  detail::VoteEngine<M> eng(m, grid, cfg, epsp, depth_cap);
  return eng.run(surfaces);
}

}  // namespace ivote
