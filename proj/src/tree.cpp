#include "dyadic_forge/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

namespace {

BigInt lcm_of(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Coord scaled_floor(const Rational& x, const BigInt& D) { return bigint_to_coord(floor_of(x * Rational(D))); }
Coord scaled_ceil(const Rational& x, const BigInt& D) { return bigint_to_coord(ceil_of(x * Rational(D))); }

using CellRanges = std::vector<std::pair<BigInt, BigInt>>;

// Inclusive ranges of cells of C met by the parts of S.
CellRanges cell_ranges(const Partition& C, const PointSet& S) {
  CellRanges out;
  for (const auto& h : S.parts()) {
    BigInt j0 = C.cell_of(h.a);
    BigInt j1 = C.cell_of(h.b);
    if (C.is_breakpoint(h.b)) j1 -= 1;
    if (!out.empty() && out.back().second + 1 >= j0)
      out.back().second = std::max(out.back().second, j1);
    else
      out.emplace_back(j0, j1);
  }
  return out;
}

bool ranges_overlap(const CellRanges& a, const CellRanges& b) {
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    if (a[i].second < b[k].first) ++i;
    else if (b[k].second < a[i].first) ++k;
    else return true;
  }
  return false;
}

CoordRuns ranges_to_runs(const Partition& C, const CellRanges& r, const BigInt& D) {
  CoordRuns out;
  for (const auto& [j0, j1] : r) {
    Coord a = bigint_to_coord(BigInt(C.cell_left(j0) * Rational(D)));
    Coord b = bigint_to_coord(BigInt(C.cell_right(j1) * Rational(D)));
    if (!out.empty() && out.back().second >= a) out.back().second = std::max(out.back().second, b);
    else out.emplace_back(a, b);
  }
  return out;
}

bool set_inside_runs(const PointSet& S, const CoordRuns& r, const BigInt& D) {
  for (const auto& h : S.parts())
    if (!runs_contain(r, scaled_floor(h.a, D), scaled_ceil(h.b, D))) return false;
  return true;
}

CoordRuns point_set_to_runs(const PointSet& S, const BigInt& D) {
  CoordRuns r;
  for (const auto& h : S.parts())
    r.emplace_back(bigint_to_coord(BigInt(h.a * Rational(D))), bigint_to_coord(BigInt(h.b * Rational(D))));
  return r;
}

PointSet runs_to_point_set(const CoordRuns& r, const BigInt& D) {
  std::vector<HalfOpen> parts;
  for (const auto& [a, b] : r)
    parts.push_back({Rational(coord_to_bigint(a)) / Rational(D), Rational(coord_to_bigint(b)) / Rational(D)});
  return PointSet::from_intervals(std::move(parts));
}

}  // namespace

// ---- runs ----

bool runs_subset(const CoordRuns& a, const CoordRuns& b) {
  std::size_t k = 0;
  for (const auto& [lo, hi] : a) {
    while (k < b.size() && b[k].second <= lo) ++k;
    if (k == b.size() || b[k].first > lo || b[k].second < hi) return false;
  }
  return true;
}

bool runs_intersect(const CoordRuns& a, const CoordRuns& b) {
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    if (a[i].first < b[k].second && b[k].first < a[i].second) return true;
    if (a[i].second <= b[k].second) ++i;
    else ++k;
  }
  return false;
}

CoordRuns runs_union(const CoordRuns& a, const CoordRuns& b) {
  CoordRuns all;
  all.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
  CoordRuns out;
  for (const auto& r : all) {
    if (!out.empty() && r.first <= out.back().second) out.back().second = std::max(out.back().second, r.second);
    else out.push_back(r);
  }
  return out;
}

// ---- partitions ----

Partition Partition::explicit_points(std::vector<Rational> points, const Rational& W) {
  if (W <= 0) throw PreconditionError("window half-width must be positive");
  Partition P;
  P.W_ = W;
  std::erase_if(points, [&](const Rational& x) { return x < -W || x > W; });
  points.push_back(-W);
  points.push_back(W);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  P.points_ = std::move(points);
  return P;
}

Partition Partition::grid(long m, const Rational& tau, const Rational& W) {
  if (W <= 0) throw PreconditionError("window half-width must be positive");
  Partition P;
  P.is_grid_ = true;
  P.grid_ = ShiftedGrid{m, tau};
  P.W_ = W;
  return P;
}

BigInt Partition::cell_of(const Rational& x) const {
  if (is_grid_) return grid_.index_of(x);
  auto it = std::upper_bound(points_.begin(), points_.end(), x);
  return BigInt(static_cast<unsigned long>(it - points_.begin()));
}

Rational Partition::cell_left(const BigInt& j) const {
  if (is_grid_) return grid_.cell_left(j);
  if (j < 1 || j >= BigInt(static_cast<unsigned long>(points_.size())))
    throw PreconditionError("cell index outside the window");
  return points_[j.get_ui() - 1];
}

Rational Partition::cell_right(const BigInt& j) const {
  if (is_grid_) return grid_.cell_right(j);
  if (j < 1 || j >= BigInt(static_cast<unsigned long>(points_.size())))
    throw PreconditionError("cell index outside the window");
  return points_[j.get_ui()];
}

bool Partition::is_breakpoint(const Rational& x) const {
  if (is_grid_) return grid_.is_breakpoint(x);
  return std::binary_search(points_.begin(), points_.end(), x);
}

BigInt Partition::denominator() const {
  if (is_grid_) {
    BigInt d = grid_.tau.get_den();
    if (grid_.m > 0) d = lcm_of(d, BigInt(1) << static_cast<mp_bitcnt_t>(grid_.m));
    return d;
  }
  BigInt d = 1;
  for (const auto& x : points_) d = lcm_of(d, x.get_den());
  return d;
}

bool refines(const Partition& F, const Partition& C) {
  if (F.window() != C.window()) throw PreconditionError("partitions use different windows");
  const Rational& W = F.window();
  if (F.is_grid() && C.is_grid()) {
    const auto& f = F.shifted_grid();
    const auto& c = C.shifted_grid();
    if (f.m > c.m) return false;
    return Rational((f.tau - c.tau) * pow2(c.m)).get_den() == 1;
  }
  if (!F.is_grid()) {
    for (const auto& x : F.points())
      if (x > -W && x < W && !C.is_breakpoint(x)) return false;
    return true;
  }
  const auto& f = F.shifted_grid();
  BigInt j0 = f.index_of(-W), j1 = f.index_of(W);
  if (j1 - j0 > 1'000'000) throw ResourceError("grid too fine to enumerate against explicit breakpoints");
  for (BigInt j = j0; j <= j1 + 1; ++j) {
    Rational x = f.cell_left(j);
    if (x > -W && x < W && !C.is_breakpoint(x)) return false;
  }
  return true;
}

bool sign_preserving(const Partition& C, const PLFunction& f) {
  return !ranges_overlap(cell_ranges(C, f.positive_set()), cell_ranges(C, f.negative_set()));
}

bool sign_preserving(const Partition& C, const StepFunction& f) {
  return !ranges_overlap(cell_ranges(C, f.positive_set()), cell_ranges(C, f.negative_set()));
}

// ---- systems ----

TreeFunction TreeFunction::of(PLFunction f) {
  TreeFunction t;
  t.base = std::make_shared<const PLFunction>(std::move(f));
  return t;
}

PLFunction TreeFunction::materialize() const {
  if (!base) return PLFunction();
  if (n == 0 && shift == 0 && scale == Quad2(1)) return *base;
  return base->affine(n, shift, scale);
}

PointSet TreeSystem::plus_set(std::size_t i) const { return runs_to_point_set(nodes.at(i).plus, denom); }
PointSet TreeSystem::minus_set(std::size_t i) const { return runs_to_point_set(nodes.at(i).minus, denom); }

TreeSystem make_tree_system(const std::vector<ExplicitNode>& nodes) {
  TreeSystem sys;
  BigInt D = 1;
  for (const auto& nd : nodes)
    for (const PointSet* S : {&nd.plus, &nd.minus})
      for (const auto& h : S->parts()) D = lcm_of(lcm_of(D, h.a.get_den()), h.b.get_den());
  sys.denom = D;
  for (const auto& nd : nodes) {
    TreeNode t;
    t.f = TreeFunction::of(nd.f);
    t.plus = point_set_to_runs(nd.plus, D);
    t.minus = point_set_to_runs(nd.minus, D);
    sys.nodes.push_back(std::move(t));
  }
  return sys;
}

void LayeredIndex::insert(std::size_t id, Coord lo, Coord hi) {
  for (auto& layer : layers_) {
    auto it = layer.lower_bound(lo);
    if (it != layer.end() && it->first < hi) continue;
    if (it != layer.begin() && std::prev(it)->second.first > lo) continue;
    layer.emplace(lo, std::make_pair(hi, id));
    return;
  }
  layers_.emplace_back();
  layers_.back().emplace(lo, std::make_pair(hi, id));
}

namespace {

std::vector<CoordRuns> supports(const TreeSystem& sys) {
  std::vector<CoordRuns> U;
  U.reserve(sys.nodes.size());
  for (const auto& nd : sys.nodes) U.push_back(runs_union(nd.plus, nd.minus));
  return U;
}

}  // namespace

TreeVerdict verify_tree_axioms(const TreeSystem& sys) {
  TreeVerdict v;
  auto fail = [&](std::size_t k, std::size_t n, const char* clause) {
    v.ok = false;
    v.k = k + 1;
    v.n = n + 1;
    v.clause = clause;
    return v;
  };
  for (std::size_t i = 0; i < sys.nodes.size(); ++i) {
    const auto& nd = sys.nodes[i];
    if (runs_intersect(nd.plus, nd.minus)) return fail(i, i, "plus and minus sets overlap");
    PLFunction g = nd.f.materialize();
    if (!set_inside_runs(g.positive_set(), nd.plus, sys.denom)) return fail(i, i, "{f > 0} not inside U+");
    if (!set_inside_runs(g.negative_set(), nd.minus, sys.denom)) return fail(i, i, "{f < 0} not inside U-");
  }
  std::vector<CoordRuns> U = supports(sys);
  LayeredIndex index;
  for (std::size_t n = 0; n < sys.nodes.size(); ++n) {
    if (U[n].empty()) continue;
    Coord lo = U[n].front().first, hi = U[n].back().second;
    std::size_t bad = std::numeric_limits<std::size_t>::max();
    index.for_each_overlap(lo, hi, [&](std::size_t k) {
      if (k >= bad || !runs_intersect(U[n], U[k])) return;
      if (runs_subset(U[n], sys.nodes[k].plus) || runs_subset(U[n], sys.nodes[k].minus)) return;
      bad = k;
    });
    if (bad != std::numeric_limits<std::size_t>::max()) return fail(bad, n, "U_n straddles U_k");
    index.insert(n, lo, hi);
  }
  return v;
}

TreeSystem build_tree(const std::vector<Partition>& F, const std::vector<Partition>& C, std::vector<TreeEntry> entries) {
  if (F.size() != C.size()) throw PreconditionError("need one fine partition per coarse partition");
  for (std::size_t n = 0; n < F.size(); ++n) {
    if (!refines(F[n], C[n])) throw PreconditionError("F_" + std::to_string(n) + " does not refine into C_" + std::to_string(n));
    if (n + 1 < F.size() && !refines(C[n], F[n + 1]))
      throw PreconditionError("C_" + std::to_string(n) + " does not refine into F_" + std::to_string(n + 1));
  }
  BigInt D = 1;
  for (const auto& P : F) D = lcm_of(D, P.denominator());
  for (const auto& P : C) D = lcm_of(D, P.denominator());

  std::stable_sort(entries.begin(), entries.end(), [](const TreeEntry& a, const TreeEntry& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.cell < b.cell;
  });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].level == entries[i - 1].level && entries[i].cell == entries[i - 1].cell)
      throw PreconditionError("two functions share cell " + entries[i].cell.get_str() + " at level " +
                              std::to_string(entries[i].level));

  TreeSystem sys;
  sys.denom = D;
  sys.nodes.reserve(entries.size());
  for (auto& e : entries) {
    if (e.level >= F.size()) throw PreconditionError("entry level outside the partition sequence");
    std::string tag = "(" + std::to_string(e.level) + "," + e.cell.get_str() + ")";
    PLFunction g = e.f.materialize();
    PointSet pos = g.positive_set(), neg = g.negative_set();
    PointSet supp = pos.unite(neg);
    if (!supp.empty()) {
      const Partition& Fn = F[e.level];
      if (supp.parts().front().a < Fn.cell_left(e.cell) || supp.parts().back().b > Fn.cell_right(e.cell))
        throw PreconditionError("support of f" + tag + " leaves its cell");
    }
    CellRanges rp = cell_ranges(C[e.level], pos), rn = cell_ranges(C[e.level], neg);
    if (ranges_overlap(rp, rn)) throw PreconditionError("partition C is not sign-preserving for f" + tag);
    TreeNode nd;
    nd.plus = ranges_to_runs(C[e.level], rp, D);
    nd.minus = ranges_to_runs(C[e.level], rn, D);
    nd.level = static_cast<long>(e.level);
    nd.cell = e.cell;
    nd.f = std::move(e.f);
    sys.nodes.push_back(std::move(nd));
  }
  TreeVerdict v = verify_tree_axioms(sys);
  if (!v.ok)
    throw PropertyViolation("built system violates tree axioms at (" + std::to_string(v.k) + "," + std::to_string(v.n) +
                            "): " + v.clause);
  return sys;
}

// ---- rearrangement ----

namespace {

// Linked list with gapped 128-bit labels; relabels a growing window when a gap closes.
class OrderList {
 public:
  explicit OrderList(std::size_t n) : next_(n + 2), prev_(n + 2), label_(n + 2), head_(n), tail_(n + 1) {
    next_[head_] = tail_;
    prev_[tail_] = head_;
    label_[head_] = 0;
    label_[tail_] = static_cast<unsigned __int128>(1) << 126;
  }
  std::size_t head() const { return head_; }
  const unsigned __int128& label(std::size_t i) const { return label_[i]; }

  void insert_after(std::size_t a, std::size_t x) {
    std::size_t b = next_[a];
    next_[a] = x;
    prev_[x] = a;
    next_[x] = b;
    prev_[b] = x;
    if (label_[b] - label_[a] >= 2) {
      label_[x] = label_[a] + (label_[b] - label_[a]) / 2;
      return;
    }
    std::size_t lo = a, hi = b, inner = 1, step = 1;
    while (label_[hi] - label_[lo] <= static_cast<unsigned __int128>(inner + 1) << 20) {
      for (std::size_t s = 0; s < step; ++s) {
        if (lo != head_) {
          lo = prev_[lo];
          ++inner;
        }
        if (hi != tail_) {
          hi = next_[hi];
          ++inner;
        }
      }
      step *= 2;
    }
    unsigned __int128 gap = (label_[hi] - label_[lo]) / (inner + 1);
    unsigned __int128 cur = label_[lo];
    for (std::size_t i = next_[lo]; i != hi; i = next_[i]) {
      cur += gap;
      label_[i] = cur;
    }
  }

  std::vector<std::size_t> sequence() const {
    std::vector<std::size_t> out;
    for (std::size_t i = next_[head_]; i != tail_; i = next_[i]) out.push_back(i);
    return out;
  }

 private:
  std::vector<std::size_t> next_, prev_;
  std::vector<unsigned __int128> label_;
  std::size_t head_, tail_;
};

}  // namespace

Ordering adversarial_permutation(const TreeSystem& sys) {
  TreeVerdict v = verify_tree_axioms(sys);
  if (!v.ok) throw PreconditionError("input is not a tree system: " + v.clause);
  const std::size_t N = sys.nodes.size();
  std::vector<CoordRuns> U = supports(sys);
  OrderList list(N);
  LayeredIndex index;
  for (std::size_t n = 0; n < N; ++n) {
    std::size_t anchor = list.head();
    if (!U[n].empty()) {
      Coord lo = U[n].front().first, hi = U[n].back().second;
      index.for_each_overlap(lo, hi, [&](std::size_t k) {
        if (!runs_subset(U[n], sys.nodes[k].minus)) return;
        if (anchor == list.head() || list.label(k) > list.label(anchor)) anchor = k;
      });
    }
    list.insert_after(anchor, n);
    if (!U[n].empty()) index.insert(n, U[n].front().first, U[n].back().second);
  }
  return list.sequence();
}

OrderVerdict verify_order_constraints(const TreeSystem& sys, const Ordering& order) {
  const std::size_t N = sys.nodes.size();
  if (!is_bijection(order, N)) throw PreconditionError("ordering is not a permutation");
  std::vector<std::size_t> pos(N);
  for (std::size_t p = 0; p < N; ++p) pos[order[p]] = p;
  std::vector<CoordRuns> U = supports(sys);
  LayeredIndex index;
  for (std::size_t i = 0; i < N; ++i)
    if (!U[i].empty()) index.insert(i, U[i].front().first, U[i].back().second);

  OrderVerdict v;
  for (std::size_t n = 0; n < N && v.ok; ++n) {
    if (U[n].empty()) continue;
    const auto& nd = sys.nodes[n];
    index.for_each_overlap(U[n].front().first, U[n].back().second, [&](std::size_t k) {
      if (!v.ok || k == n || U[k].empty()) return;
      bool in_plus = runs_subset(U[k], nd.plus);
      bool in_minus = !in_plus && runs_subset(U[k], nd.minus);
      if (!in_plus && !in_minus) return;
      // Equal supports of the same sign would demand both orders; such pairs carry no constraint.
      if (in_plus && runs_subset(U[n], sys.nodes[k].plus)) return;
      if (in_minus && runs_subset(U[n], sys.nodes[k].minus)) return;
      ++v.pairs_checked;
      bool good = in_plus ? pos[k] < pos[n] : pos[k] > pos[n];
      if (!good) {
        v.ok = false;
        v.k = k + 1;
        v.n = n + 1;
        v.clause = in_plus ? "U_k in U_n^+ but k placed after n" : "U_k in U_n^- but k placed before n";
      }
    });
  }
  return v;
}

bool is_bijection(const Ordering& order, std::size_t N) {
  if (order.size() != N) return false;
  std::vector<char> seen(N, 0);
  for (auto i : order) {
    if (i >= N || seen[i]) return false;
    seen[i] = 1;
  }
  return true;
}

RearrangementReport verify_rearrangement_bound(const TreeSystem& sys, const Ordering& order) {
  const std::size_t N = sys.nodes.size();
  if (!is_bijection(order, N)) throw PreconditionError("ordering is not a permutation");
  std::vector<std::size_t> pos(N);
  for (std::size_t p = 0; p < N; ++p) pos[order[p]] = p;

  std::vector<PLFunction> g;
  g.reserve(N);
  for (const auto& nd : sys.nodes) g.push_back(nd.f.materialize());

  std::vector<Rational> bps;
  for (const auto& f : g) bps.insert(bps.end(), f.xs().begin(), f.xs().end());
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  std::vector<std::size_t> by_start;
  for (std::size_t i = 0; i < N; ++i)
    if (!g[i].empty()) by_start.push_back(i);
  std::sort(by_start.begin(), by_start.end(), [&](std::size_t a, std::size_t b) {
    return g[a].xs().front() < g[b].xs().front();
  });

  RearrangementReport rep;
  double worst = std::numeric_limits<double>::infinity(), worst_prefix = worst;
  std::set<std::pair<std::size_t, std::size_t>> active;  // (position, node)
  std::size_t next_start = 0;
  std::vector<Quad2> vals;

  auto sample = [&](const Rational& x, bool left_limit) {
    vals.clear();
    for (const auto& [p, i] : active) vals.push_back(left_limit ? g[i].left_limit(x) : g[i].eval(x));
    Quad2 S, mx, mn, pmax, total;
    for (const auto& v : vals) {
      S += v;
      if (S > mx) mx = S;
      if (S < mn) mn = S;
      Quad2 a = abs(S);
      if (a > pmax) pmax = a;
      total += abs(v);
    }
    ++rep.samples;
    if (total.is_zero()) return;
    Quad2 span = mx - mn;
    bool ok = span * Rational(2) >= total;
    bool pok = pmax * Rational(4) >= total;
    if ((!ok || !pok) && !rep.failing_x) rep.failing_x = x;
    rep.ok = rep.ok && ok;
    rep.prefix_ok = rep.prefix_ok && pok;
    worst = std::min(worst, span.to_double() / total.to_double());
    worst_prefix = std::min(worst_prefix, pmax.to_double() / total.to_double());
  };

  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    const Rational& a = bps[i];
    const Rational& b = bps[i + 1];
    for (auto it = active.begin(); it != active.end();) {
      if (g[it->second].xs().back() <= a) it = active.erase(it);
      else ++it;
    }
    while (next_start < by_start.size() && g[by_start[next_start]].xs().front() <= a) {
      std::size_t k = by_start[next_start++];
      if (g[k].xs().back() > a) active.insert({pos[k], k});
    }
    if (active.empty()) continue;
    bool constant = true;
    for (const auto& [p, k] : active)
      if (g[k].eval(a) != g[k].left_limit(b)) {
        constant = false;
        break;
      }
    sample(a, false);
    if (!constant) {
      sample((a + b) / 2, false);
      sample(b, true);
    }
  }
  rep.worst_ratio = std::isinf(worst) ? 1.0 : worst;
  rep.worst_prefix_ratio = std::isinf(worst_prefix) ? 1.0 : worst_prefix;
  return rep;
}

}  // namespace dyadic_forge
