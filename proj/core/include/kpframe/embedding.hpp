#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "kpframe/algebra.hpp"
#include "kpframe/poly_matrix.hpp"
#include "kpframe/rewrite.hpp"

namespace kpf {

template <class T>
using KVector = std::array<AlgebraElement<T>, 3>;

// 3x3 matrix over R, C, H or O; a point of the standard embedding when Hermitian, idempotent, trace 1.
template <class T>
class HermitianPoint {
 public:
  HermitianPoint() : HermitianPoint(1) {}
  explicit HermitianPoint(int k) : k_(k) {
    for (auto& x : e_) x = AlgebraElement<T>(k);
  }

  int k() const { return k_; }
  AlgebraElement<T>& at(int i, int j) { return e_[std::size_t(3 * i + j)]; }
  const AlgebraElement<T>& at(int i, int j) const { return e_[std::size_t(3 * i + j)]; }

  HermitianPoint conj_transpose() const {
    HermitianPoint out(k_);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out.at(i, j) = at(j, i).conj();
    return out;
  }
  T trace() const { return at(0, 0)[0] + at(1, 1)[0] + at(2, 2)[0]; }

  friend HermitianPoint operator*(const HermitianPoint& x, const HermitianPoint& y) {
    HermitianPoint out(x.k_);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        AlgebraElement<T> acc(x.k_);
        for (int t = 0; t < 3; ++t) acc = acc + x.at(i, t) * y.at(t, j);
        out.at(i, j) = acc;
      }
    return out;
  }
  friend HermitianPoint operator+(HermitianPoint x, const HermitianPoint& y) {
    for (std::size_t i = 0; i < 9; ++i) x.e_[i] = x.e_[i] + y.e_[i];
    return x;
  }
  friend HermitianPoint operator-(HermitianPoint x, const HermitianPoint& y) {
    for (std::size_t i = 0; i < 9; ++i) x.e_[i] = x.e_[i] - y.e_[i];
    return x;
  }
  friend HermitianPoint operator*(HermitianPoint x, const T& s) {
    for (auto& v : x.e_) v = v * s;
    return x;
  }
  // (xy + yx) / 2; equals the matrix product on idempotents for every k.
  static HermitianPoint jordan(const HermitianPoint& x, const HermitianPoint& y) {
    return (x * y + y * x) * (T(1) / T(2));
  }
  friend bool operator==(const HermitianPoint& x, const HermitianPoint& y) { return x.k_ == y.k_ && x.e_ == y.e_; }

  // Real coordinates in the affine ambient space: the three diagonal reals, then the components of the
  // (0,1), (0,2), (1,2) entries; 3k + 3 numbers in all.
  std::vector<T> real_coordinates() const {
    std::vector<T> out{at(0, 0)[0], at(1, 1)[0], at(2, 2)[0]};
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
      for (int c = 0; c < k_; ++c) out.push_back(at(i, j)[c]);
    return out;
  }

 private:
  int k_;
  std::array<AlgebraElement<T>, 9> e_;
};

// Entries Y_i conj(Y_j) / |Y|^2 with Y_i = X_i conj(X_chart). For associative k the chart factor cancels,
// and a zero chart coordinate falls back to X itself; for k = 8 it must be nonzero.
template <class T>
HermitianPoint<T> veronese_point(const KVector<T>& x, int chart) {
  const int k = x[0].k();
  if (chart < 0 || chart > 2) throw std::invalid_argument("chart index must be 0, 1 or 2");
  const T zero(0);
  const T total = x[0].norm() + x[1].norm() + x[2].norm();
  if (total == zero) throw std::invalid_argument("veronese_point: zero vector");
  KVector<T> y = x;
  if (x[std::size_t(chart)].norm() == zero) {
    if (k == 8) throw std::invalid_argument("veronese_point: chart coordinate is zero");
  } else {
    const AlgebraElement<T> c = x[std::size_t(chart)].conj();
    for (auto& yi : y) yi = yi * c;
  }
  const T norm = y[0].norm() + y[1].norm() + y[2].norm();
  const T inv = T(1) / norm;
  HermitianPoint<T> a(k);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.at(i, j) = (y[std::size_t(i)] * y[std::size_t(j)].conj()) * inv;
  return a;
}

// Max entry norm of A - A^*, A o A - A (Jordan square), and |trace - 1|.
struct PointDefects {
  double hermitian = 0;
  double idempotent = 0;
  double trace = 0;
};
PointDefects point_defects(const HermitianPoint<double>& a);
bool satisfies_point_invariants(const HermitianPoint<Rational>& a);

int affine_span_dimension(int k, const std::vector<HermitianPoint<double>>& samples, double tol = 1e-8);
int affine_span_dimension(int k, const std::vector<HermitianPoint<Rational>>& samples);

// Maurer-Cartan matrix of the standard embedding, k in {1, 2, 4}: entry (i, j) is the A_j-component of
// dA_i when dX_j = sum_k theta_{jk} X_k, with theta components as embedding-form symbols.
PolyMatrix derive_maurer_cartan(int k);

// The N + 1 real quadratics A_0..A_N in the coordinate symbols of X_0, X_1, X_2.
std::vector<Polynomial> standard_coordinates(int k);

// ---------------------------------------------------------------- numeric probes

AlgebraElement<double> random_element(int k, std::mt19937_64& rng);
KVector<double> random_unit_vector(int k, std::mt19937_64& rng);
HermitianPoint<double> random_hermitian(int k, std::mt19937_64& rng);
HermitianPoint<double> projector(const KVector<double>& v);  // v v^*, v a unit vector

// h(A) = Re tr(Xi A).
double height(const HermitianPoint<double>& xi, const HermitianPoint<double>& a);

struct CriticalPoint {
  HermitianPoint<double> point;
  KVector<double> vector;  // unit vector with point = v v^*
  double value = 0;
  int index = 0;
  std::vector<double> hessian_eigenvalues;
};

class DegenerateHeight : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The three eigenprojections of Xi, ordered by value, with Morse indices from a finite-difference chart
// Hessian (step 1e-4, sign tolerance 1e-6). k in {1, 2, 4}.
std::vector<CriticalPoint> height_critical_points(int k, const HermitianPoint<double>& xi);

// Orthonormal real basis u_1..u_{2k} of the tangent directions at v (K-orthogonal to v).
std::vector<KVector<double>> tangent_directions(const KVector<double>& v);

// A(t) = w w^* / |w|^2 with w = v + sum t_a u_a.
HermitianPoint<double> chart_point(const KVector<double>& v, const std::vector<KVector<double>>& u,
                                   const std::vector<double>& t);

// Central finite-difference Hessian of t -> f(chart_point(v, u, t)) at t = 0.
std::vector<std::vector<double>> chart_hessian(const KVector<double>& v, const std::vector<KVector<double>>& u,
                                               const std::function<double(const HermitianPoint<double>&)>& f,
                                               double step = 1e-4);

// Second fundamental form at v in the chart directions: normal part of u_a u_b^* + u_b u_a^* - 2 delta_ab v v^*.
std::vector<std::vector<HermitianPoint<double>>> second_fundamental_form(const KVector<double>& v,
                                                                          const std::vector<KVector<double>>& u);

// Projection of xi onto the normal space of the embedding at v (trace-free part orthogonal to the tangent).
HermitianPoint<double> normal_projection(const KVector<double>& v, const HermitianPoint<double>& xi);

// Re tr(x y) for Hermitian x, y.
double frobenius(const HermitianPoint<double>& x, const HermitianPoint<double>& y);

}  // namespace kpf
