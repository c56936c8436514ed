#include "dyadic_forge/step_function.hpp"

#include <algorithm>
#include <functional>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

StepFunction::StepFunction(std::vector<Rational> breakpoints, std::vector<Quad2> values)
    : bps_(std::move(breakpoints)), vals_(std::move(values)) {
  if (bps_.empty() && vals_.empty()) return;
  if (bps_.size() != vals_.size() + 1)
    throw PreconditionError("step function needs one more breakpoint than values");
  for (std::size_t i = 1; i < bps_.size(); ++i)
    if (!(bps_[i - 1] < bps_[i])) throw PreconditionError("step function breakpoints must increase strictly");
}

StepFunction StepFunction::indicator(const Rational& a, const Rational& b, const Quad2& v) {
  if (!(a < b)) return StepFunction();
  return StepFunction({a, b}, {v});
}

bool StepFunction::is_zero() const {
  return std::all_of(vals_.begin(), vals_.end(), [](const Quad2& v) { return v.is_zero(); });
}

Quad2 StepFunction::eval(const Rational& x) const {
  if (vals_.empty() || x < bps_.front() || x >= bps_.back()) return Quad2();
  auto it = std::upper_bound(bps_.begin(), bps_.end(), x);
  return vals_[static_cast<std::size_t>(it - bps_.begin()) - 1];
}

Quad2 StepFunction::integral() const {
  Quad2 s;
  for (std::size_t i = 0; i < vals_.size(); ++i) s += vals_[i] * (bps_[i + 1] - bps_[i]);
  return s;
}

Quad2 StepFunction::l1_norm() const {
  Quad2 s;
  for (std::size_t i = 0; i < vals_.size(); ++i) s += abs(vals_[i]) * (bps_[i + 1] - bps_[i]);
  return s;
}

Quad2 StepFunction::l2_norm_sq() const {
  Quad2 s;
  for (std::size_t i = 0; i < vals_.size(); ++i) s += vals_[i] * vals_[i] * (bps_[i + 1] - bps_[i]);
  return s;
}

StepFunction StepFunction::scaled(const Quad2& s) const {
  StepFunction r = *this;
  for (auto& v : r.vals_) v *= s;
  return r;
}

namespace {

PointSet where(const std::vector<Rational>& bps, const std::vector<Quad2>& vals,
               const std::function<bool(const Quad2&)>& pred) {
  std::vector<HalfOpen> parts;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (pred(vals[i])) parts.push_back({bps[i], bps[i + 1]});
  return PointSet::from_intervals(std::move(parts));
}

template <class Op>
StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
  const auto& fb = f.breakpoints();
  const auto& gb = g.breakpoints();
  std::vector<Rational> bps;
  bps.reserve(fb.size() + gb.size());
  std::merge(fb.begin(), fb.end(), gb.begin(), gb.end(), std::back_inserter(bps));
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  if (bps.size() < 2) return StepFunction();
  std::vector<Quad2> vals;
  vals.reserve(bps.size() - 1);
  std::size_t fi = 0, gi = 0;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    const Rational& x = bps[i];
    while (fi < fb.size() && fb[fi] <= x) ++fi;
    while (gi < gb.size() && gb[gi] <= x) ++gi;
    Quad2 fv = (fi == 0 || fi == fb.size()) ? Quad2() : f.values()[fi - 1];
    Quad2 gv = (gi == 0 || gi == gb.size()) ? Quad2() : g.values()[gi - 1];
    vals.push_back(op(fv, gv));
  }
  return StepFunction(std::move(bps), std::move(vals));
}

}  // namespace

PointSet StepFunction::support() const {
  return where(bps_, vals_, [](const Quad2& v) { return !v.is_zero(); });
}

PointSet StepFunction::positive_set() const {
  return where(bps_, vals_, [](const Quad2& v) { return sign(v) > 0; });
}

PointSet StepFunction::negative_set() const {
  return where(bps_, vals_, [](const Quad2& v) { return sign(v) < 0; });
}

bool StepFunction::has_dyadic_breakpoints() const {
  return std::all_of(bps_.begin(), bps_.end(), [](const Rational& x) { return is_dyadic(x); });
}

std::string StepFunction::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < vals_.size(); ++i) {
    if (i) s += " ";
    s += "[" + bps_[i].get_str() + "," + bps_[i + 1].get_str() + "):" + vals_[i].to_string();
  }
  return s.empty() ? "0" : s;
}

bool operator==(const StepFunction& f, const StepFunction& g) {
  StepFunction d = f - g;
  return d.is_zero();
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](const Quad2& a, const Quad2& b) { return a + b; });
}

StepFunction operator-(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](const Quad2& a, const Quad2& b) { return a - b; });
}

StepFunction operator*(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](const Quad2& a, const Quad2& b) { return a * b; });
}

Quad2 inner(const StepFunction& f, const StepFunction& g) { return (f * g).integral(); }
Quad2 l1_norm(const StepFunction& f) { return f.l1_norm(); }
Quad2 l2_norm_sq(const StepFunction& f) { return f.l2_norm_sq(); }

}  // namespace dyadic_forge
