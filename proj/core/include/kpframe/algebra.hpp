#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpf {

inline void check_algebra_dim(int k) {
  if (k != 1 && k != 2 && k != 4 && k != 8)
    throw std::invalid_argument("algebra dimension must be 1, 2, 4 or 8, got " + std::to_string(k));
}

namespace detail {

// Cayley-Dickson doubling: (p,q)(r,s) = (pr - s*q, sp + qr*), on coordinate blocks of length n.
template <class T>
void cd_conj(const T* x, T* out, int n) {
  out[0] = x[0];
  for (int i = 1; i < n; ++i) out[i] = -x[i];
}

template <class T>
void cd_mul(const T* a, const T* b, T* out, int n) {
  if (n == 1) {
    out[0] = a[0] * b[0];
    return;
  }
  const int h = n / 2;
  const T* p = a;
  const T* q = a + h;
  const T* r = b;
  const T* s = b + h;
  std::vector<T> sc(static_cast<std::size_t>(h)), rc(static_cast<std::size_t>(h)), t1(static_cast<std::size_t>(h)), t2(static_cast<std::size_t>(h));
  cd_conj(s, sc.data(), h);
  cd_conj(r, rc.data(), h);
  cd_mul(p, r, t1.data(), h);
  cd_mul(sc.data(), q, t2.data(), h);
  for (int i = 0; i < h; ++i) out[i] = t1[std::size_t(i)] - t2[std::size_t(i)];
  cd_mul(s, p, t1.data(), h);
  cd_mul(q, rc.data(), t2.data(), h);
  for (int i = 0; i < h; ++i) out[h + i] = t1[std::size_t(i)] + t2[std::size_t(i)];
}

}  // namespace detail

// Element of R, C, H or O (k = 1, 2, 4, 8) with scalar type T (double, Rational, Polynomial).
// Basis e_0 = 1, e_1..e_{k-1}; for k = 4, e_1 e_2 = e_3.
template <class T>
class AlgebraElement {
 public:
  AlgebraElement() : AlgebraElement(1) {}
  explicit AlgebraElement(int k) : k_(k) {
    check_algebra_dim(k);
    for (auto& c : c_) c = T(0);
  }
  static AlgebraElement real(int k, const T& v) {
    AlgebraElement x(k);
    x.c_[0] = v;
    return x;
  }
  static AlgebraElement unit(int k, int idx) {
    AlgebraElement x(k);
    x.c_[std::size_t(idx)] = T(1);
    return x;
  }
  static AlgebraElement from(int k, const std::vector<T>& coords) {
    if (static_cast<int>(coords.size()) != k) throw std::invalid_argument("coordinate count mismatch");
    AlgebraElement x(k);
    for (int i = 0; i < k; ++i) x.c_[std::size_t(i)] = coords[std::size_t(i)];
    return x;
  }

  int k() const { return k_; }
  const T& operator[](int i) const { return c_[std::size_t(i)]; }
  T& operator[](int i) { return c_[std::size_t(i)]; }

  AlgebraElement conj() const {
    AlgebraElement x(k_);
    detail::cd_conj(c_.data(), x.c_.data(), k_);
    return x;
  }
  T norm() const {
    T s = c_[0] * c_[0];
    for (int i = 1; i < k_; ++i) s = s + c_[std::size_t(i)] * c_[std::size_t(i)];
    return s;
  }
  // Re(x* y) = sum of coordinate products.
  T dot(const AlgebraElement& y) const {
    T s = c_[0] * y.c_[0];
    for (int i = 1; i < k_; ++i) s = s + c_[std::size_t(i)] * y.c_[std::size_t(i)];
    return s;
  }

  friend AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
    x.same_k(y);
    AlgebraElement out(x.k_);
    detail::cd_mul(x.c_.data(), y.c_.data(), out.c_.data(), x.k_);
    return out;
  }
  friend AlgebraElement operator+(AlgebraElement x, const AlgebraElement& y) {
    x.same_k(y);
    for (int i = 0; i < x.k_; ++i) x.c_[std::size_t(i)] = x.c_[std::size_t(i)] + y.c_[std::size_t(i)];
    return x;
  }
  friend AlgebraElement operator-(AlgebraElement x, const AlgebraElement& y) {
    x.same_k(y);
    for (int i = 0; i < x.k_; ++i) x.c_[std::size_t(i)] = x.c_[std::size_t(i)] - y.c_[std::size_t(i)];
    return x;
  }
  friend AlgebraElement operator-(AlgebraElement x) {
    for (int i = 0; i < x.k_; ++i) x.c_[std::size_t(i)] = -x.c_[std::size_t(i)];
    return x;
  }
  friend AlgebraElement operator*(AlgebraElement x, const T& s) {
    for (int i = 0; i < x.k_; ++i) x.c_[std::size_t(i)] = x.c_[std::size_t(i)] * s;
    return x;
  }
  friend bool operator==(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.k_ != y.k_) return false;
    for (int i = 0; i < x.k_; ++i)
      if (!(x.c_[std::size_t(i)] == y.c_[std::size_t(i)])) return false;
    return true;
  }

 private:
  void same_k(const AlgebraElement& y) const {
    if (k_ != y.k_) throw std::invalid_argument("algebra dimension mismatch");
  }
  int k_;
  std::array<T, 8> c_;
};

}  // namespace kpf
