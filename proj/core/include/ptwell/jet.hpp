#pragma once

#include <cmath>
#include <complex>

namespace ptwell {

/// Truncated second-order Taylor number: value and first two derivatives
/// with respect to a single variable. Used to differentiate the secular
/// function exactly.
template <class T>
struct Jet2 {
  T v{};
  T d1{};
  T d2{};

  static Jet2 variable(T x) { return {x, T(1), T(0)}; }
  static Jet2 constant(T x) { return {x, T(0), T(0)}; }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
};

template <class T>
Jet2<T> operator+(Jet2<T> a, const Jet2<T>& b) {
  return a += b;
}
template <class T>
Jet2<T> operator-(Jet2<T> a, const Jet2<T>& b) {
  return a -= b;
}
template <class T>
Jet2<T> operator-(const Jet2<T>& a) {
  return {-a.v, -a.d1, -a.d2};
}
template <class T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
}
template <class T>
Jet2<T> operator*(const Jet2<T>& a, T s) {
  return {a.v * s, a.d1 * s, a.d2 * s};
}
template <class T>
Jet2<T> operator*(T s, const Jet2<T>& a) {
  return a * s;
}
template <class T>
Jet2<T> operator+(const Jet2<T>& a, T s) {
  return {a.v + s, a.d1, a.d2};
}
template <class T>
Jet2<T> operator+(T s, const Jet2<T>& a) {
  return a + s;
}
template <class T>
Jet2<T> operator-(T s, const Jet2<T>& a) {
  return {s - a.v, -a.d1, -a.d2};
}

template <class T>
Jet2<T> conj(const Jet2<T>& a) {
  using std::conj;
  return {conj(a.v), conj(a.d1), conj(a.d2)};
}

template <class T>
Jet2<T> sin(const Jet2<T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.v);
  const T c = cos(a.v);
  return {s, c * a.d1, c * a.d2 - s * a.d1 * a.d1};
}

template <class T>
Jet2<T> cos(const Jet2<T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.v);
  const T c = cos(a.v);
  return {c, -s * a.d1, -s * a.d2 - c * a.d1 * a.d1};
}

/// Square root of a jet whose value has already been rooted on the desired
/// branch: root_value² must equal u.v.
template <class T>
Jet2<T> sqrt_with_root(const Jet2<T>& u, T root_value) {
  const T d1 = u.d1 / (T(2) * root_value);
  const T d2 = (u.d2 - T(2) * d1 * d1) / (T(2) * root_value);
  return {root_value, d1, d2};
}

}  // namespace ptwell
