#include "dyadic_forge/dyadic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/step_function.hpp"

namespace dyadic_forge {

namespace {

// floor((j-1) / 2^d) + 1 for d >= 0.
std::int64_t shift_index(std::int64_t j, long d) {
  if (d <= 0) return j;
  std::int64_t z = j - 1;
  if (d >= 63) return (z < 0 ? -1 : 0) + 1;
  return (z >> d) + 1;
}

void check_scale(long m) {
  if (m > kMaxScale || m < -kMaxScale)
    throw PreconditionError("scale exponent out of range: " + std::to_string(m));
}

int bit_length(unsigned __int128 v) {
  int b = 0;
  while (v) {
    ++b;
    v >>= 1;
  }
  return b;
}

}  // namespace

Rational DyadicInterval::left() const { return Rational(j - 1) * pow2(-m); }
Rational DyadicInterval::right() const { return Rational(j) * pow2(-m); }
Rational DyadicInterval::length() const { return pow2(-m); }

std::string DyadicInterval::to_string() const {
  return "[" + dyadic_forge::to_string(left()) + "," + dyadic_forge::to_string(right()) + ")";
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::equal: return "equal";
    case Relation::I_inside_J: return "I_inside_J";
    case Relation::J_inside_I: return "J_inside_I";
    case Relation::disjoint: return "disjoint";
  }
  return "?";
}

DyadicInterval parent(const DyadicInterval& I) { return ancestor_at(I, I.m - 1); }

DyadicInterval ancestor_at(const DyadicInterval& I, long m) {
  if (m > I.m) throw PreconditionError("ancestor_at: target scale finer than interval");
  return {m, shift_index(I.j, I.m - m)};
}

bool contained_in(const DyadicInterval& I, const DyadicInterval& J) {
  if (I.m < J.m) return false;
  return shift_index(I.j, I.m - J.m) == J.j;
}

Relation relation(const DyadicInterval& I, const DyadicInterval& J) {
  if (I == J) return Relation::equal;
  if (contained_in(I, J)) return Relation::I_inside_J;
  if (contained_in(J, I)) return Relation::J_inside_I;
  return Relation::disjoint;
}

bool canonical_less(const DyadicInterval& a, const DyadicInterval& b) {
  // Compare (j-1) 2^-m in 128-bit after bringing both to the finer scale.
  long M = std::max(a.m, b.m);
  long da = M - a.m, db = M - b.m;
  if (da < 62 && db < 62) {
    __int128 la = static_cast<__int128>(a.j - 1) << da;
    __int128 lb = static_cast<__int128>(b.j - 1) << db;
    if (la != lb) return la < lb;
  } else {
    int c = cmp(a.left(), b.left());
    if (c != 0) return c < 0;
  }
  if (a.m != b.m) return a.m < b.m;
  return a.j < b.j;
}

bool scale_index_less(const DyadicInterval& a, const DyadicInterval& b) {
  if (a.m != b.m) return a.m < b.m;
  return a.j < b.j;
}

void IntervalCollection::validate() const {
  for (const auto& I : items) check_scale(I.m);
  if (distinct && has_duplicates()) throw PreconditionError("collection declared distinct contains duplicates");
}

bool IntervalCollection::has_duplicates() const {
  std::unordered_set<DyadicInterval, DyadicIntervalHash> seen;
  for (const auto& I : items)
    if (!seen.insert(I).second) return true;
  return false;
}

void sort_canonical(std::vector<DyadicInterval>& v) { std::sort(v.begin(), v.end(), canonical_less); }

IntervalCollection dmax(const IntervalCollection& U) {
  if (U.empty()) throw PreconditionError("dmax: empty collection");
  std::vector<DyadicInterval> v = U.items;
  sort_canonical(v);
  v.erase(std::unique(v.begin(), v.end()), v.end());

  std::vector<DyadicInterval> outer;
  for (const auto& I : v)
    if (outer.empty() || !contained_in(I, outer.back())) outer.push_back(I);

  std::map<long, std::set<std::int64_t>, std::greater<>> by_scale;
  for (const auto& I : outer) by_scale[I.m].insert(I.j);
  for (auto it = by_scale.begin(); it != by_scale.end(); ++it) {
    long m = it->first;
    auto& js = it->second;
    std::vector<std::int64_t> lifted;
    for (auto jt = js.begin(); jt != js.end();) {
      std::int64_t j = *jt;
      bool left_child = ((j - 1) & 1) == 0;
      auto nx = std::next(jt);
      if (left_child && nx != js.end() && *nx == j + 1) {
        lifted.push_back(shift_index(j, 1));
        jt = js.erase(jt);
        jt = js.erase(jt);
      } else {
        ++jt;
      }
    }
    if (!lifted.empty()) {
      check_scale(m - 1);
      auto& up = by_scale[m - 1];
      up.insert(lifted.begin(), lifted.end());
    }
  }

  IntervalCollection out;
  out.distinct = true;
  for (const auto& [m, js] : by_scale)
    for (auto j : js) out.items.push_back({m, j});
  sort_canonical(out.items);
  return out;
}

IntervalCollection dmin(const IntervalCollection& U) {
  if (U.empty()) throw PreconditionError("dmin: empty collection");
  std::unordered_set<DyadicInterval, DyadicIntervalHash> present(U.items.begin(), U.items.end());
  long min_m = U.items.front().m;
  for (const auto& I : U.items) min_m = std::min(min_m, I.m);

  std::unordered_set<DyadicInterval, DyadicIntervalHash> not_minimal;
  for (const auto& I : present) {
    for (long m = I.m - 1; m >= min_m; --m) {
      DyadicInterval A = ancestor_at(I, m);
      if (present.count(A)) {
        if (!not_minimal.insert(A).second) break;  // its ancestors were already marked
      }
    }
  }
  IntervalCollection out;
  out.distinct = true;
  for (const auto& I : present)
    if (!not_minimal.count(I)) out.items.push_back(I);
  sort_canonical(out.items);
  return out;
}

bool nested_in(const IntervalCollection& U, const IntervalCollection& V) {
  if (V.empty()) throw PreconditionError("nested_in: V must be nonempty");
  IntervalCollection mins = dmin(V);
  std::unordered_set<DyadicInterval, DyadicIntervalHash> S(mins.items.begin(), mins.items.end());
  long min_m = mins.items.front().m;
  for (const auto& J : mins.items) min_m = std::min(min_m, J.m);
  for (const auto& I : U.items) {
    bool found = false;
    for (long m = I.m; m >= min_m; --m) {
      if (S.count(ancestor_at(I, m))) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

StepFunction indicator_sum(const IntervalCollection& U) {
  if (U.empty()) return StepFunction();
  DyadicFrame F = DyadicFrame::covering(U.items);
  CountProfile p = count_profile(U.items, F);
  std::vector<Rational> bps;
  std::vector<Quad2> vals;
  bps.reserve(p.xs.size());
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    bps.push_back(F.to_rational(p.xs[i]));
    if (i + 1 < p.xs.size()) vals.emplace_back(static_cast<long>(p.counts[i]));
  }
  return StepFunction(std::move(bps), std::move(vals));
}

DyadicFrame DyadicFrame::covering(const std::vector<DyadicInterval>& v) {
  DyadicFrame F;
  if (v.empty()) return F;
  long M = v.front().m;
  for (const auto& I : v) {
    check_scale(I.m);
    M = std::max(M, I.m);
  }
  F.M = M;
  for (const auto& I : v) {
    std::int64_t z = I.j;
    unsigned __int128 mag = z < 0 ? static_cast<unsigned __int128>(-(static_cast<__int128>(z)))
                                  : static_cast<unsigned __int128>(z);
    if (bit_length(mag) + (M - I.m) > 125)
      throw PreconditionError("interval family spans too many scales for 128-bit coordinates");
  }
  return F;
}

Coord DyadicFrame::left(const DyadicInterval& I) const {
  return static_cast<Coord>(I.j - 1) * (static_cast<Coord>(1) << (M - I.m));
}

Coord DyadicFrame::right(const DyadicInterval& I) const {
  return static_cast<Coord>(I.j) * (static_cast<Coord>(1) << (M - I.m));
}

Rational DyadicFrame::to_rational(Coord c) const { return Rational(coord_to_bigint(c)) * pow2(-M); }

Rational DyadicFrame::measure(Coord len) const { return to_rational(len); }

std::string coord_to_string(Coord c) {
  if (c == 0) return "0";
  bool neg = c < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-c) : static_cast<unsigned __int128>(c);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

BigInt coord_to_bigint(Coord c) {
  bool neg = c < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-c) : static_cast<unsigned __int128>(c);
  BigInt z(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  z <<= 64;
  z += BigInt(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  return neg ? BigInt(-z) : z;
}

Coord bigint_to_coord(const BigInt& z) {
  BigInt a = abs(z);
  if (mpz_sizeinbase(a.get_mpz_t(), 2) > 120) throw PreconditionError("coordinate exceeds 128-bit range");
  BigInt hi = a >> 64;
  BigInt lo = a - (hi << 64);
  Coord v = (static_cast<Coord>(hi.get_ui()) << 64) | static_cast<Coord>(lo.get_ui());
  return z < 0 ? -v : v;
}

CountProfile count_profile(const std::vector<DyadicInterval>& v, const DyadicFrame& F) {
  std::vector<std::pair<Coord, int>> ev;
  ev.reserve(2 * v.size());
  for (const auto& I : v) {
    ev.emplace_back(F.left(I), +1);
    ev.emplace_back(F.right(I), -1);
  }
  std::sort(ev.begin(), ev.end());
  CountProfile p;
  std::int64_t cur = 0;
  for (std::size_t i = 0; i < ev.size();) {
    Coord x = ev[i].first;
    while (i < ev.size() && ev[i].first == x) cur += ev[i++].second;
    p.xs.push_back(x);
    p.counts.push_back(cur);
  }
  // counts.back() is 0 past the last breakpoint; keep one count per bounded piece.
  if (!p.counts.empty()) p.counts.pop_back();
  return p;
}

CoordRuns runs_where(const CountProfile& p, const std::function<bool(std::int64_t)>& pred) {
  CoordRuns r;
  for (std::size_t i = 0; i < p.counts.size(); ++i) {
    if (!pred(p.counts[i])) continue;
    if (!r.empty() && r.back().second == p.xs[i])
      r.back().second = p.xs[i + 1];
    else
      r.emplace_back(p.xs[i], p.xs[i + 1]);
  }
  return r;
}

Coord runs_measure(const CoordRuns& r) {
  Coord s = 0;
  for (const auto& [a, b] : r) s += b - a;
  return s;
}

bool runs_contain(const CoordRuns& r, Coord a, Coord b) {
  auto it = std::upper_bound(r.begin(), r.end(), a,
                             [](Coord x, const std::pair<Coord, Coord>& run) { return x < run.first; });
  if (it == r.begin()) return false;
  --it;
  return it->first <= a && b <= it->second;
}

Coord runs_intersection_measure(const CoordRuns& r, Coord a, Coord b) {
  Coord s = 0;
  auto it = std::upper_bound(r.begin(), r.end(), a,
                             [](Coord x, const std::pair<Coord, Coord>& run) { return x < run.first; });
  if (it != r.begin()) --it;
  for (; it != r.end() && it->first < b; ++it) {
    Coord lo = std::max(a, it->first), hi = std::min(b, it->second);
    if (lo < hi) s += hi - lo;
  }
  return s;
}

Rational ShiftedGrid::cell_left(const BigInt& j) const { return tau + Rational(j - 1) * pow2(-m); }

Rational ShiftedGrid::cell_right(const BigInt& j) const { return tau + Rational(j) * pow2(-m); }

BigInt ShiftedGrid::index_of(const Rational& x) const { return floor_of((x - tau) * pow2(m)) + 1; }

bool ShiftedGrid::is_breakpoint(const Rational& x) const {
  Rational t = (x - tau) * pow2(m);
  return t.get_den() == 1;
}

bool ShiftedGrid::same_partition(const ShiftedGrid& o) const {
  if (m != o.m) return false;
  Rational t = (tau - o.tau) * pow2(m);
  return t.get_den() == 1;
}

}  // namespace dyadic_forge
