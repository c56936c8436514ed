#include "dyadic_forge/pl_function.hpp"

#include <algorithm>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

PLFunction::PLFunction(std::vector<Rational> xs, std::vector<Quad2> start, std::vector<Quad2> end)
    : xs_(std::move(xs)), start_(std::move(start)), end_(std::move(end)) {
  if (xs_.empty() && start_.empty()) return;
  if (start_.size() != end_.size() || xs_.size() != start_.size() + 1)
    throw PreconditionError("piecewise linear function: inconsistent sizes");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i - 1] < xs_[i])) throw PreconditionError("piecewise linear breakpoints must increase strictly");
}

PLFunction PLFunction::from_nodes(const std::vector<Rational>& xs, const std::vector<Quad2>& ys) {
  if (xs.size() != ys.size()) throw PreconditionError("node abscissae and values differ in length");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1]) throw PreconditionError("node abscissae must be nondecreasing");
  std::vector<Rational> bx;
  std::vector<Quad2> st, en;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (xs[i] == xs[i + 1]) continue;
    if (bx.empty() || bx.back() != xs[i]) bx.push_back(xs[i]);
    st.push_back(ys[i]);
    en.push_back(ys[i + 1]);
    bx.push_back(xs[i + 1]);
  }
  // Consecutive pieces share endpoints, so bx may hold duplicates from the push pattern.
  bx.erase(std::unique(bx.begin(), bx.end()), bx.end());
  if (bx.size() != st.size() + 1) throw PreconditionError("nodes leave a gap in the domain");
  return PLFunction(std::move(bx), std::move(st), std::move(en));
}

PLFunction PLFunction::from_step(const StepFunction& f) {
  return PLFunction(f.breakpoints(), f.values(), f.values());
}

bool PLFunction::is_zero() const {
  for (std::size_t i = 0; i < start_.size(); ++i)
    if (!start_[i].is_zero() || !end_[i].is_zero()) return false;
  return true;
}

bool PLFunction::has_rational_values() const {
  for (std::size_t i = 0; i < start_.size(); ++i)
    if (!start_[i].is_rational() || !end_[i].is_rational()) return false;
  return true;
}

Quad2 interpolate(const Rational& a, const Rational& b, const Quad2& v, const Quad2& u, const Rational& x) {
  if (x == a) return v;
  Rational s = (x - a) / (b - a);
  return v + (u - v) * s;
}

Quad2 PLFunction::eval(const Rational& x) const {
  if (start_.empty() || x < xs_.front() || x >= xs_.back()) return Quad2();
  auto i = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
  return interpolate(xs_[i], xs_[i + 1], start_[i], end_[i], x);
}

Quad2 PLFunction::left_limit(const Rational& x) const {
  if (start_.empty() || x <= xs_.front() || x > xs_.back()) return Quad2();
  auto i = static_cast<std::size_t>(std::lower_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
  if (x == xs_[i + 1]) return end_[i];
  return interpolate(xs_[i], xs_[i + 1], start_[i], end_[i], x);
}

Quad2 PLFunction::integral() const {
  Quad2 s;
  for (std::size_t i = 0; i < start_.size(); ++i) s += (start_[i] + end_[i]) * ((xs_[i + 1] - xs_[i]) / 2);
  return s;
}

Quad2 PLFunction::l1_norm() const {
  Quad2 s;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    const Quad2& v = start_[i];
    const Quad2& u = end_[i];
    Rational len = xs_[i + 1] - xs_[i];
    int sv = sign(v), su = sign(u);
    if (sv * su >= 0) {
      s += dyadic_forge::abs(v + u) * (len / 2);
    } else {
      // Two triangles meeting at the zero crossing.
      s += (v * v + u * u) / dyadic_forge::abs(v - u) * (len / 2);
    }
  }
  return s;
}

Quad2 PLFunction::l2_norm_sq() const {
  Quad2 s;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    const Quad2& v = start_[i];
    const Quad2& u = end_[i];
    s += (v * v + v * u + u * u) * ((xs_[i + 1] - xs_[i]) / 3);
  }
  return s;
}

PLFunction PLFunction::affine(long n, const Rational& shift, const Quad2& s) const {
  PLFunction r;
  Rational h = pow2(-n);
  r.xs_.reserve(xs_.size());
  for (const auto& x : xs_) r.xs_.push_back((x + shift) * h);
  r.start_.reserve(start_.size());
  r.end_.reserve(end_.size());
  for (std::size_t i = 0; i < start_.size(); ++i) {
    r.start_.push_back(start_[i] * s);
    r.end_.push_back(end_[i] * s);
  }
  return r;
}

PLFunction PLFunction::scaled(const Quad2& s) const { return affine(0, Rational(0), s); }

namespace {

struct Builder {
  std::vector<Rational> xs;
  std::vector<Quad2> st, en;
  void add(const Rational& a, const Rational& b, const Quad2& v, const Quad2& u) {
    if (!(a < b)) return;
    if (xs.empty()) {
      xs.push_back(a);
    } else if (xs.back() != a) {
      // Fill the gap with an explicit zero piece to keep pieces contiguous.
      st.emplace_back();
      en.emplace_back();
      xs.push_back(a);
    }
    st.push_back(v);
    en.push_back(u);
    xs.push_back(b);
  }
  PLFunction build() { return PLFunction(std::move(xs), std::move(st), std::move(en)); }
};

// Relative position v / (v - u) of the zero of a sign-changing piece; must be rational.
Rational zero_fraction(const Quad2& v, const Quad2& u) {
  Quad2 s = v / (v - u);
  if (!s.is_rational()) throw PreconditionError("zero crossing of a piece is irrational");
  return s.a;
}

// Points in (0, 1) where the linear map s -> v + (u - v)s meets the levels t and -t.
std::vector<Rational> crossings(const Rational& v, const Rational& u, const Rational& t) {
  std::vector<Rational> out;
  if (v == u) return out;
  for (const Rational& level : {t, Rational(-t)}) {
    Rational s = (level - v) / (u - v);
    if (s > 0 && s < 1) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

PLFunction PLFunction::abs() const {
  Builder b;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    const Rational &a = xs_[i], &c = xs_[i + 1];
    const Quad2 &v = start_[i], &u = end_[i];
    if (sign(v) * sign(u) < 0) {
      Rational m = a + (c - a) * zero_fraction(v, u);
      b.add(a, m, dyadic_forge::abs(v), Quad2());
      b.add(m, c, Quad2(), dyadic_forge::abs(u));
    } else {
      b.add(a, c, dyadic_forge::abs(v), dyadic_forge::abs(u));
    }
  }
  return b.build();
}

std::pair<PLFunction, PLFunction> PLFunction::truncate(const Rational& t) const {
  if (!has_rational_values()) throw PreconditionError("truncation needs rational values");
  Builder up, lo;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    const Rational &a = xs_[i], &c = xs_[i + 1];
    const Rational &v = start_[i].a, &u = end_[i].a;
    std::vector<Rational> cut = {Rational(0)};
    for (auto& s : crossings(v, u, t)) cut.push_back(s);
    cut.push_back(Rational(1));
    for (std::size_t k = 0; k + 1 < cut.size(); ++k) {
      Rational s0 = cut[k], s1 = cut[k + 1];
      Rational y0 = v + (u - v) * s0, y1 = v + (u - v) * s1;
      Rational mid = (y0 + y1) / 2;
      Rational x0 = a + (c - a) * s0, x1 = a + (c - a) * s1;
      if (::abs(mid) >= t) {
        up.add(x0, x1, Quad2(y0), Quad2(y1));
        lo.add(x0, x1, Quad2(), Quad2());
      } else {
        up.add(x0, x1, Quad2(), Quad2());
        lo.add(x0, x1, Quad2(y0), Quad2(y1));
      }
    }
  }
  return {up.build(), lo.build()};
}

PointSet PLFunction::level_set(const Rational& t) const {
  if (!has_rational_values()) throw PreconditionError("level sets need rational values");
  std::vector<HalfOpen> parts;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    const Rational &a = xs_[i], &c = xs_[i + 1];
    const Rational &v = start_[i].a, &u = end_[i].a;
    std::vector<Rational> cut = {Rational(0)};
    for (auto& s : crossings(v, u, t)) cut.push_back(s);
    cut.push_back(Rational(1));
    for (std::size_t k = 0; k + 1 < cut.size(); ++k) {
      Rational mid = v + (u - v) * ((cut[k] + cut[k + 1]) / 2);
      if (::abs(mid) > t) parts.push_back({a + (c - a) * cut[k], a + (c - a) * cut[k + 1]});
    }
  }
  return PointSet::from_intervals(std::move(parts));
}

namespace {

PointSet signed_set(const std::vector<Rational>& xs, const std::vector<Quad2>& st, const std::vector<Quad2>& en,
                    int want) {
  std::vector<HalfOpen> parts;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const Rational &a = xs[i], &c = xs[i + 1];
    int sv = sign(st[i]), su = sign(en[i]);
    if (sv == want || su == want) {
      if (sv * su >= 0) {
        parts.push_back({a, c});
      } else {
        Rational m = a + (c - a) * zero_fraction(st[i], en[i]);
        if (sv == want) parts.push_back({a, m});
        else parts.push_back({m, c});
      }
    }
  }
  return PointSet::from_intervals(std::move(parts));
}

}  // namespace

PointSet PLFunction::positive_set() const { return signed_set(xs_, start_, end_, 1); }
PointSet PLFunction::negative_set() const { return signed_set(xs_, start_, end_, -1); }
PointSet PLFunction::support() const { return positive_set().unite(negative_set()); }

Quad2 PLFunction::sup_abs() const {
  Quad2 m;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    Quad2 a = dyadic_forge::abs(start_[i]), b = dyadic_forge::abs(end_[i]);
    if (a > m) m = a;
    if (b > m) m = b;
  }
  return m;
}

std::string PLFunction::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    if (i) s += " ";
    s += "[" + xs_[i].get_str() + "," + xs_[i + 1].get_str() + "):" + start_[i].to_string() + "->" +
         end_[i].to_string();
  }
  return s.empty() ? "0" : s;
}

namespace {

template <class Op>
PLFunction combine(const PLFunction& f, const PLFunction& g, Op op) {
  std::vector<Rational> bps;
  std::merge(f.xs().begin(), f.xs().end(), g.xs().begin(), g.xs().end(), std::back_inserter(bps));
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  if (bps.size() < 2) return PLFunction();
  std::vector<Quad2> st, en;
  st.reserve(bps.size() - 1);
  en.reserve(bps.size() - 1);
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    st.push_back(op(f.eval(bps[i]), g.eval(bps[i])));
    en.push_back(op(f.left_limit(bps[i + 1]), g.left_limit(bps[i + 1])));
  }
  return PLFunction(std::move(bps), std::move(st), std::move(en));
}

}  // namespace

PLFunction operator+(const PLFunction& f, const PLFunction& g) {
  return combine(f, g, [](const Quad2& a, const Quad2& b) { return a + b; });
}

PLFunction operator-(const PLFunction& f, const PLFunction& g) {
  return combine(f, g, [](const Quad2& a, const Quad2& b) { return a - b; });
}

}  // namespace dyadic_forge
