#include "qdswap/common/quadrature.hpp"

namespace qdswap {

namespace {

using C = std::complex<double>;

C simpson(const C& fa, const C& fm, const C& fb, double h) {
  return (h / 6.0) * (fa + 4.0 * fm + fb);
}

C adaptive_step(const std::function<C(double)>& f, double a, double b, const C& fa, const C& fm,
                const C& fb, const C& whole, double tol, int depth, int force_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const C flm = f(lm);
  const C frm = f(rm);
  const C left = simpson(fa, flm, fm, m - a);
  const C right = simpson(fm, frm, fb, b - m);
  const C delta = left + right - whole;
  if (depth <= 0 || (force_depth <= 0 && std::abs(delta) <= 15.0 * tol)) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, force_depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, force_depth - 1);
}

}  // namespace

C integrate_adaptive(const std::function<C(double)>& f, double a, double b, double tol,
                     int max_depth) {
  if (a == b) return {0.0, 0.0};
  const double m = 0.5 * (a + b);
  const C fa = f(a);
  const C fm = f(m);
  const C fb = f(b);
  const C whole = simpson(fa, fm, fb, b - a);
  // A few forced subdivisions guard against spuriously accepting a panel
  // whose sample points all miss a localized feature.
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth, 5);
}

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth) {
  auto wrapped = [&f](double x) { return C(f(x), 0.0); };
  return integrate_adaptive(wrapped, a, b, tol, max_depth).real();
}

C integrate_decaying(const std::function<C(double)>& f, double a, double decay_scale,
                     double tol) {
  const double window = 8.0 * decay_scale;
  C total{0.0, 0.0};
  double lo = a;
  for (int i = 0; i < 64; ++i) {
    const double hi = lo + window;
    const C piece = integrate_adaptive(f, lo, hi, tol);
    total += piece;
    if (i > 0 && std::abs(piece) < tol * (1.0 + std::abs(total))) break;
    lo = hi;
  }
  return total;
}

}  // namespace qdswap
