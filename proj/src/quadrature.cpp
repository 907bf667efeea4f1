#include "torsion/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "torsion/error.hpp"

namespace torsion {

namespace {

using cplx = std::complex<double>;

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the center
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<cplx(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = kKronrod[7] * fc, gauss = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const cplx s = f(c - h * kNodes[i]) + f(c + h * kNodes[i]);
    kron += kKronrod[i] * s;
    if (i % 2 == 1) gauss += kGauss[i / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b, double abs_tol, double rel_tol,
                           std::size_t max_intervals) {
  std::priority_queue<Panel> heap;
  heap.push(gk15(f, a, b));
  cplx total = heap.top().value;
  double err = heap.top().error;
  std::size_t count = 1;
  auto finite = [&] {
    if (!std::isfinite(err) || !std::isfinite(total.real()) || !std::isfinite(total.imag())) {
      throw Error(Errc::QuadratureBudget, "integrand is not finite on the interval");
    }
  };
  finite();
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_intervals) {
      throw Error(Errc::QuadratureBudget, "quadrature did not converge within " + std::to_string(max_intervals) +
                                              " panels (error estimate " + std::to_string(err) + ")");
    }
    const Panel worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, m), right = gk15(f, m, worst.b);
    heap.push(left);
    heap.push(right);
    ++count;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    finite();
  }
  return {total, err, count};
}

}  // namespace torsion
