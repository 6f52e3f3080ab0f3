#include "meanstream/types.hpp"

#include <algorithm>

#include "meanstream/generator.hpp"

namespace meanstream {

bool DomainInterval::contains(double x) const noexcept {
  if (x != x) return false;
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool DomainInterval::subset_of(const DomainInterval& other) const noexcept {
  const bool lo_ok = lo > other.lo || (lo == other.lo && (other.lo_closed || !lo_closed));
  const bool hi_ok = hi < other.hi || (hi == other.hi && (other.hi_closed || !hi_closed));
  return lo_ok && hi_ok;
}

DomainInterval DomainInterval::intersect(const DomainInterval& other) const noexcept {
  DomainInterval out = *this;
  if (other.lo > lo || (other.lo == lo && !other.lo_closed)) {
    out.lo = other.lo;
    out.lo_closed = other.lo_closed && (other.lo != lo || lo_closed);
  }
  if (other.hi < hi || (other.hi == hi && !other.hi_closed)) {
    out.hi = other.hi;
    out.hi_closed = other.hi_closed && (other.hi != hi || hi_closed);
  }
  return out;
}

std::string DomainInterval::to_string() const {
  std::string out = lo_closed ? "[" : "(";
  out += format_real(lo);
  out += ", ";
  out += format_real(hi);
  out += hi_closed ? "]" : ")";
  return out;
}

std::string ComplexityType::to_string() const {
  return "T" + std::to_string(k) + (plus_counter ? "+" : "");
}

}  // namespace meanstream
