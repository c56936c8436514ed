#include "dyadic_forge/point_set.hpp"

#include <algorithm>

namespace dyadic_forge {

PointSet PointSet::interval(const Rational& a, const Rational& b) {
  PointSet s;
  if (a < b) s.parts_.push_back({a, b});
  return s;
}

PointSet PointSet::from_intervals(std::vector<HalfOpen> parts) {
  PointSet s;
  s.parts_ = std::move(parts);
  s.normalize();
  return s;
}

void PointSet::normalize() {
  std::erase_if(parts_, [](const HalfOpen& h) { return !(h.a < h.b); });
  std::sort(parts_.begin(), parts_.end(), [](const HalfOpen& x, const HalfOpen& y) { return x.a < y.a; });
  std::vector<HalfOpen> out;
  out.reserve(parts_.size());
  for (auto& h : parts_) {
    if (!out.empty() && h.a <= out.back().b) {
      if (h.b > out.back().b) out.back().b = h.b;
    } else {
      out.push_back(std::move(h));
    }
  }
  parts_ = std::move(out);
}

Rational PointSet::measure() const {
  Rational s = 0;
  for (const auto& h : parts_) s += h.b - h.a;
  return s;
}

bool PointSet::contains_point(const Rational& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const HalfOpen& h) { return v < h.a; });
  if (it == parts_.begin()) return false;
  --it;
  return x < it->b;
}

bool PointSet::contains(const PointSet& other) const {
  std::size_t i = 0;
  for (const auto& h : other.parts_) {
    while (i < parts_.size() && parts_[i].b <= h.a) ++i;
    if (i == parts_.size()) return false;
    if (!(parts_[i].a <= h.a && h.b <= parts_[i].b)) return false;
  }
  return true;
}

bool PointSet::intersects(const PointSet& other) const {
  std::size_t i = 0, k = 0;
  while (i < parts_.size() && k < other.parts_.size()) {
    const auto& x = parts_[i];
    const auto& y = other.parts_[k];
    if (x.a < y.b && y.a < x.b) return true;
    if (x.b <= y.b) ++i; else ++k;
  }
  return false;
}

PointSet PointSet::unite(const PointSet& other) const {
  std::vector<HalfOpen> v = parts_;
  v.insert(v.end(), other.parts_.begin(), other.parts_.end());
  return from_intervals(std::move(v));
}

PointSet PointSet::intersect(const PointSet& other) const {
  PointSet out;
  std::size_t i = 0, k = 0;
  while (i < parts_.size() && k < other.parts_.size()) {
    const auto& x = parts_[i];
    const auto& y = other.parts_[k];
    const Rational& a = x.a < y.a ? y.a : x.a;
    const Rational& b = x.b < y.b ? x.b : y.b;
    if (a < b) out.parts_.push_back({a, b});
    if (x.b <= y.b) ++i; else ++k;
  }
  return out;
}

PointSet PointSet::minus(const PointSet& other) const {
  std::vector<HalfOpen> out;
  std::size_t k = 0;
  for (const auto& h : parts_) {
    Rational cur = h.a;
    while (k < other.parts_.size() && other.parts_[k].b <= cur) ++k;
    std::size_t t = k;
    while (t < other.parts_.size() && other.parts_[t].a < h.b) {
      const auto& y = other.parts_[t];
      if (cur < y.a) out.push_back({cur, y.a});
      if (y.b > cur) cur = y.b;
      if (!(cur < h.b)) break;
      ++t;
    }
    if (cur < h.b) out.push_back({cur, h.b});
  }
  return from_intervals(std::move(out));
}

PointSet PointSet::clip(const Rational& lo, const Rational& hi) const {
  return intersect(interval(lo, hi));
}

Rational PointSet::measure_in(const Rational& lo, const Rational& hi) const {
  Rational s = 0;
  for (const auto& h : parts_) {
    if (!(h.a < hi)) break;
    const Rational& a = h.a < lo ? lo : h.a;
    const Rational& b = h.b < hi ? h.b : hi;
    if (a < b) s += b - a;
  }
  return s;
}

std::string PointSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ", ";
    s += "[" + parts_[i].a.get_str() + "," + parts_[i].b.get_str() + ")";
  }
  return s + "}";
}

bool operator==(const PointSet& x, const PointSet& y) {
  if (x.parts_.size() != y.parts_.size()) return false;
  for (std::size_t i = 0; i < x.parts_.size(); ++i)
    if (x.parts_[i].a != y.parts_[i].a || x.parts_[i].b != y.parts_[i].b) return false;
  return true;
}

}  // namespace dyadic_forge
