#include "holoproj/chart.hpp"

#include <array>
#include <cmath>
#include <map>
#include <type_traits>

#include "holoproj/errors.hpp"

namespace holoproj {

// ---------------------------------------------------------------------------
// charts

CVector ChartPoint::affine() const {
  const Eigen::Index m = coords.size() / 2;
  CVector z(m);
  for (Eigen::Index a = 0; a < m; ++a) z[a] = cplx(coords[2 * a], coords[2 * a + 1]);
  return z;
}

double ChartPoint::max_affine_modulus() const {
  const CVector z = affine();
  return z.size() == 0 ? 0.0 : z.cwiseAbs().maxCoeff();
}

ChartPoint chart_embed(const StateVector& psi, std::optional<int> chart_index) {
  const CVector& v = psi.components();
  const auto n = static_cast<int>(v.size());
  int k = 0;
  if (chart_index) {
    k = *chart_index;
    if (k < 0 || k >= n) throw ChartError("chart_embed: chart index out of range");
    if (v[k] == cplx(0.0)) throw ChartError("chart_embed: pivot component is zero");
  } else {
    v.cwiseAbs().maxCoeff(&k);
  }
  ChartPoint x{k, RVector(2 * (n - 1))};
  Eigen::Index slot = 0;
  for (int a = 0; a < n; ++a) {
    if (a == k) continue;
    const cplx z = v[a] / v[k];
    x.coords[2 * slot] = z.real();
    x.coords[2 * slot + 1] = z.imag();
    ++slot;
  }
  return x;
}

StateVector chart_lift(const ChartPoint& x) {
  const int n = x.n();
  const CVector z = x.affine();
  CVector v(n);
  Eigen::Index slot = 0;
  for (int a = 0; a < n; ++a) v[a] = (a == x.chart_index) ? cplx(1.0) : z[slot++];
  return StateVector(std::move(v));
}

ChartPoint rechart(const ChartPoint& x, double threshold) {
  if (x.max_affine_modulus() <= threshold) return x;
  return chart_embed(chart_lift(x));
}

RVector transfer_tangent(const ChartPoint& x, const RVector& u, int new_chart) {
  if (new_chart == x.chart_index) return u;
  const int n = x.n();
  const CVector psi = chart_lift(x).components();
  CVector dpsi = CVector::Zero(n);
  Eigen::Index slot = 0;
  for (int a = 0; a < n; ++a) {
    if (a == x.chart_index) continue;
    dpsi[a] = cplx(u[2 * slot], u[2 * slot + 1]);
    ++slot;
  }
  const cplx pivot = psi[new_chart];
  if (pivot == cplx(0.0)) throw ChartError("transfer_tangent: pivot component is zero");
  RVector out(u.size());
  slot = 0;
  for (int a = 0; a < n; ++a) {
    if (a == new_chart) continue;
    const cplx dz = (dpsi[a] * pivot - psi[a] * dpsi[new_chart]) / (pivot * pivot);
    out[2 * slot] = dz.real();
    out[2 * slot + 1] = dz.imag();
    ++slot;
  }
  return out;
}

// ---------------------------------------------------------------------------
// closed-form Kaehler data

namespace {

RMatrix metric_closed_form(const ChartPoint& x) {
  const CVector z = x.affine();
  const Eigen::Index m = z.size();
  const double r = 1.0 + z.squaredNorm();
  const CMatrix P = (r * CMatrix::Identity(m, m) - z * z.adjoint()) / (r * r);
  RMatrix g(2 * m, 2 * m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const double re = 4.0 * P(a, b).real();
      const double im = 4.0 * P(a, b).imag();
      g(2 * a, 2 * b) = re;
      g(2 * a, 2 * b + 1) = -im;
      g(2 * a + 1, 2 * b) = im;
      g(2 * a + 1, 2 * b + 1) = re;
    }
  }
  return g;
}

RMatrix complex_structure(Eigen::Index m) {
  RMatrix J = RMatrix::Zero(2 * m, 2 * m);
  for (Eigen::Index a = 0; a < m; ++a) {
    J(2 * a, 2 * a + 1) = 1.0;
    J(2 * a + 1, 2 * a) = -1.0;
  }
  return J;
}

ChartPoint shifted(const ChartPoint& x, Eigen::Index axis, double delta) {
  ChartPoint y = x;
  y.coords[axis] += delta;
  return y;
}

// 4th-order central first difference: (-f(2h) + 8 f(h) - 8 f(-h) + f(-2h)) / 12h
constexpr std::array<int, 4> kStencilOffsets{-2, -1, 1, 2};
constexpr std::array<double, 4> kStencilWeights{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0,
                                                -1.0 / 12.0};

template <class Fn>
auto first_difference(Fn&& f, const ChartPoint& x, Eigen::Index axis, double h) {
  using Value = std::decay_t<decltype(f(x))>;
  Value acc = kStencilWeights[0] * f(shifted(x, axis, kStencilOffsets[0] * h));
  for (std::size_t s = 1; s < kStencilOffsets.size(); ++s) {
    acc += kStencilWeights[s] * f(shifted(x, axis, kStencilOffsets[s] * h));
  }
  return Value(acc / h);
}

void check_conditioning(const ChartPoint& x) {
  if (!x.coords.allFinite()) throw DomainError("non-finite chart coordinates");
  if (x.max_affine_modulus() > kConditioningLimit) {
    throw ConditioningError("chart coordinates too large (|z| > 1e6); switch to the largest-pivot chart");
  }
}

}  // namespace

KahlerStructures kahler_structures(const ChartPoint& x) {
  KahlerStructures k;
  k.g = metric_closed_form(x);
  k.g_inv = k.g.inverse();
  k.J = complex_structure(x.coords.size() / 2);
  k.omega = k.g * k.J;
  k.omega_inv = k.J * k.g_inv;
  return k;
}

Tensor3 christoffel_closed_form(const ChartPoint& x) {
  const CVector z = x.affine();
  const Eigen::Index m = z.size();
  const double r = 1.0 + z.squaredNorm();
  Tensor3 G(static_cast<std::size_t>(2 * m));
  for (Eigen::Index al = 0; al < m; ++al) {
    for (Eigen::Index be = 0; be < m; ++be) {
      for (Eigen::Index ga = 0; ga < m; ++ga) {
        cplx c = 0.0;
        if (al == ga) c -= std::conj(z[be]);
        if (al == be) c -= std::conj(z[ga]);
        c /= r;
        const auto xa = 2 * al, ya = 2 * al + 1;
        const auto xb = 2 * be, yb = 2 * be + 1;
        const auto xc = 2 * ga, yc = 2 * ga + 1;
        G(xa, xb, xc) = c.real();
        G(ya, xb, xc) = c.imag();
        G(xa, xb, yc) = -c.imag();
        G(ya, xb, yc) = c.real();
        G(xa, yb, xc) = -c.imag();
        G(ya, yb, xc) = c.real();
        G(xa, yb, yc) = -c.real();
        G(ya, yb, yc) = -c.imag();
      }
    }
  }
  return G;
}

Tensor3 christoffel_fd(const ChartPoint& x, double fd_step) {
  const auto d = static_cast<std::size_t>(x.coords.size());
  std::vector<RMatrix> dg(d);
  for (std::size_t e = 0; e < d; ++e) {
    dg[e] = first_difference(metric_closed_form, x, static_cast<Eigen::Index>(e), fd_step);
  }
  const RMatrix g_inv = metric_closed_form(x).inverse();
  Tensor3 G(d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        double s = 0.0;
        for (std::size_t e = 0; e < d; ++e) {
          s += g_inv(c, e) * (dg[a](e, b) + dg[b](e, a) - dg[e](a, b));
        }
        G(c, a, b) = 0.5 * s;
      }
  return G;
}

Tensor4 christoffel_derivative(const ChartPoint& x, double fd_step) {
  const auto d = static_cast<std::size_t>(x.coords.size());
  Tensor4 dG(d);
  for (std::size_t e = 0; e < d; ++e) {
    std::array<Tensor3, 4> samples;
    for (std::size_t s = 0; s < 4; ++s) {
      samples[s] = christoffel_closed_form(
          shifted(x, static_cast<Eigen::Index>(e), kStencilOffsets[s] * fd_step));
    }
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          double acc = 0.0;
          for (std::size_t s = 0; s < 4; ++s) acc += kStencilWeights[s] * samples[s](c, a, b);
          dG(e, c, a, b) = acc / fd_step;
        }
  }
  return dG;
}

TensorFrame tensor_frame(const ChartPoint& x, double fd_step) {
  if (!(fd_step > 0.0)) throw DomainError("tensor_frame: fd_step must be positive");
  check_conditioning(x);
  const KahlerStructures k = kahler_structures(x);
  TensorFrame f{x, k.g, k.g_inv, k.omega, k.omega_inv, k.J,
                christoffel_closed_form(x), christoffel_fd(x, fd_step), {}};
  const auto d = static_cast<std::size_t>(x.coords.size());
  const Tensor4 dG = christoffel_derivative(x, fd_step);
  const Tensor3& G = f.christoffel;
  f.riemann = Tensor4(d);
  // R^d_cab = d_a G^d_bc - d_b G^d_ac + G^d_ae G^e_bc - G^d_be G^e_ac, stored at (a, b, c, d).
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t dd = 0; dd < d; ++dd) {
          double v = dG(a, dd, b, c) - dG(b, dd, a, c);
          for (std::size_t e = 0; e < d; ++e) v += G(dd, a, e) * G(e, b, c) - G(dd, b, e) * G(e, a, c);
          f.riemann(a, b, c, dd) = v;
        }
  return f;
}

Tensor4 riemann_closed_form(const TensorFrame& frame) {
  return riemann_closed_form(KahlerStructures{frame.g, frame.g_inv, frame.omega, frame.omega_inv, frame.J});
}

Tensor4 riemann_closed_form(const KahlerStructures& k) {
  const auto d = static_cast<std::size_t>(k.g.rows());
  const RMatrix& g = k.g;
  const RMatrix& w = k.omega;
  const RMatrix& J = k.J;
  Tensor4 R(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t q = 0; q < d; ++q) {
          const double dpq = (p == q) ? 1.0 : 0.0;
          const double daq = (a == q) ? 1.0 : 0.0;
          R(a, p, c, q) = -0.25 * (g(a, c) * dpq - g(p, c) * daq - w(a, c) * J(q, p) +
                                   w(p, c) * J(q, a) - 2.0 * w(a, p) * J(q, c));
        }
  return R;
}

ScalarField expectation_field(const OperatorMatrix& A, std::string name) {
  if (!A.is_hermitian(1e-10)) throw DomainError("expectation_field: operator is not Hermitian");
  return ScalarField{[A](const ChartPoint& x) { return expectation(A, chart_lift(x)).real(); },
                     A, std::move(name)};
}

// ---------------------------------------------------------------------------
// finite differences

namespace {

// Evaluates mixed partials of a (scalar or vector) function by composing 1-D
// first-difference stencils; lattice values are cached by integer offset.
template <class Value>
class LatticeDifferencer {
 public:
  LatticeDifferencer(std::function<Value(const ChartPoint&)> f, const ChartPoint& x, double h)
      : f_(std::move(f)), x_(x), h_(h) {}

  Value partial(const std::vector<std::size_t>& axes) {
    std::vector<int> offset(static_cast<std::size_t>(x_.coords.size()), 0);
    return accumulate(axes, 0, offset, 1.0) / std::pow(h_, static_cast<double>(axes.size()));
  }

 private:
  Value accumulate(const std::vector<std::size_t>& axes, std::size_t level,
                   std::vector<int>& offset, double weight) {
    if (level == axes.size()) return weight * value_at(offset);
    std::optional<Value> acc;
    for (std::size_t s = 0; s < kStencilOffsets.size(); ++s) {
      offset[axes[level]] += kStencilOffsets[s];
      Value v = accumulate(axes, level + 1, offset, weight * kStencilWeights[s]);
      offset[axes[level]] -= kStencilOffsets[s];
      if (acc) {
        *acc = *acc + v;
      } else {
        acc = std::move(v);
      }
    }
    return *acc;
  }

  const Value& value_at(const std::vector<int>& offset) {
    auto it = cache_.find(offset);
    if (it != cache_.end()) return it->second;
    ChartPoint y = x_;
    for (std::size_t i = 0; i < offset.size(); ++i) y.coords[i] += offset[i] * h_;
    Value v = f_(y);
    if (!all_finite(v)) throw EvaluationError("non-finite field value inside a difference stencil");
    return cache_.emplace(offset, std::move(v)).first->second;
  }

  static bool all_finite(double v) { return std::isfinite(v); }
  static bool all_finite(const RVector& v) { return v.allFinite(); }

  std::function<Value(const ChartPoint&)> f_;
  ChartPoint x_;
  double h_;
  std::map<std::vector<int>, Value> cache_;
};

// All multi-indices of length `order`, row-major; symmetric entries are
// computed once from the sorted index.
template <class Value, class Store>
void for_each_partial(LatticeDifferencer<Value>& diff, std::size_t d, int order, Store&& store) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(order), 0);
  std::map<std::vector<std::size_t>, Value> computed;
  std::size_t flat = 0;
  for (;;) {
    std::vector<std::size_t> key = idx;
    std::sort(key.begin(), key.end());
    auto it = computed.find(key);
    if (it == computed.end()) it = computed.emplace(key, diff.partial(key)).first;
    store(flat++, it->second);
    // advance odometer
    int pos = order - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == d) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

void check_order(int order) {
  if (order < 1 || order > 3) throw DomainError("fd_derivatives: order must be 1, 2 or 3");
}

}  // namespace

RVector fd_derivatives(const ScalarField& f, const ChartPoint& x, int order, double fd_step) {
  check_order(order);
  if (!(fd_step > 0.0)) throw DomainError("fd_derivatives: fd_step must be positive");
  const auto d = static_cast<std::size_t>(x.coords.size());
  LatticeDifferencer<double> diff(f.evaluator, x, fd_step);
  RVector out(static_cast<Eigen::Index>(std::pow(d, order)));
  for_each_partial(diff, d, order, [&](std::size_t i, double v) { out[static_cast<Eigen::Index>(i)] = v; });
  return out;
}

RMatrix fd_vector_derivatives(const VectorField& v, const ChartPoint& x, int order,
                              double fd_step) {
  check_order(order);
  if (!(fd_step > 0.0)) throw DomainError("fd_vector_derivatives: fd_step must be positive");
  const auto d = static_cast<std::size_t>(x.coords.size());
  LatticeDifferencer<RVector> diff(v, x, fd_step);
  RMatrix out(static_cast<Eigen::Index>(std::pow(d, order)), static_cast<Eigen::Index>(d));
  for_each_partial(diff, d, order, [&](std::size_t i, const RVector& val) {
    out.row(static_cast<Eigen::Index>(i)) = val.transpose();
  });
  return out;
}

RVector covariant_grad(const ScalarField& f, const ChartPoint& x, double fd_step) {
  return fd_derivatives(f, x, 1, fd_step);
}

RMatrix covariant_hessian(const ScalarField& f, const ChartPoint& x, double fd_step) {
  const auto d = x.coords.size();
  const RVector grad = fd_derivatives(f, x, 1, fd_step);
  const RVector second = fd_derivatives(f, x, 2, fd_step);
  const Tensor3 G = christoffel_closed_form(x);
  RMatrix hess(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      double v = second[a * d + b];
      for (Eigen::Index c = 0; c < d; ++c) v -= G(c, a, b) * grad[c];
      hess(a, b) = v;
    }
  return hess;
}

Tensor3 covariant_third(const ScalarField& f, const ChartPoint& x, double fd_step) {
  const auto d = static_cast<std::size_t>(x.coords.size());
  const double low_step = std::min(fd_step, kDefaultFdStep);
  const RVector d1 = fd_derivatives(f, x, 1, low_step);
  const RVector d2 = fd_derivatives(f, x, 2, low_step);
  const RVector d3 = fd_derivatives(f, x, 3, fd_step);
  const Tensor3 G = christoffel_closed_form(x);
  const Tensor4 dG = christoffel_derivative(x, low_step);

  // T_ab = nabla_a nabla_b f
  RMatrix T(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      double v = d2[a * d + b];
      for (std::size_t e = 0; e < d; ++e) v -= G(e, a, b) * d1[e];
      T(a, b) = v;
    }

  Tensor3 out(d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        // d_c T_ab
        double v = d3[(c * d + a) * d + b];
        for (std::size_t e = 0; e < d; ++e) {
          v -= dG(c, e, a, b) * d1[e] + G(e, a, b) * d2[c * d + e];
        }
        for (std::size_t e = 0; e < d; ++e) v -= G(e, c, a) * T(e, b) + G(e, c, b) * T(a, e);
        out(c, a, b) = v;
      }
  return out;
}

double laplace_beltrami(const ScalarField& f, const ChartPoint& x, double fd_step) {
  const RMatrix hess = covariant_hessian(f, x, fd_step);
  const RMatrix g_inv = kahler_structures(x).g_inv;
  return (g_inv.cwiseProduct(hess)).sum();
}

RMatrix covariant_vector_derivative(const VectorField& xi, const ChartPoint& x, double fd_step) {
  const auto d = x.coords.size();
  const RMatrix dxi = fd_vector_derivatives(xi, x, 1, fd_step);  // (a, b) = d_a xi^b
  const RVector v = xi(x);
  const Tensor3 G = christoffel_closed_form(x);
  RMatrix out = dxi;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index c = 0; c < d; ++c) out(a, b) += G(b, a, c) * v[c];
  return out;
}

Tensor3 covariant_vector_second(const VectorField& xi, const ChartPoint& x, double fd_step) {
  const auto d = static_cast<std::size_t>(x.coords.size());
  const double low_step = std::min(fd_step, kDefaultFdStep);
  const RVector v = xi(x);
  const RMatrix d1 = fd_vector_derivatives(xi, x, 1, low_step);  // (a, c) = d_a xi^c
  const RMatrix d2 = fd_vector_derivatives(xi, x, 2, fd_step);   // (a*d+b, c)
  const Tensor3 G = christoffel_closed_form(x);
  const Tensor4 dG = christoffel_derivative(x, low_step);

  RMatrix nab(d, d);  // nabla_b xi^c
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t c = 0; c < d; ++c) {
      double s = d1(b, c);
      for (std::size_t e = 0; e < d; ++e) s += G(c, b, e) * v[e];
      nab(b, c) = s;
    }

  Tensor3 out(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        double s = d2(a * d + b, c);
        for (std::size_t e = 0; e < d; ++e) {
          s += dG(a, c, b, e) * v[e] + G(c, b, e) * d1(a, e);
          s += G(c, a, e) * nab(b, e) - G(e, a, b) * nab(e, c);
        }
        out(a, b, c) = s;
      }
  return out;
}

double metric_norm(const ChartPoint& x, const RVector& v) {
  const RMatrix g = kahler_structures(x).g;
  return std::sqrt(std::max(0.0, v.dot(g * v)));
}

}  // namespace holoproj
