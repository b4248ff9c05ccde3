#pragma once

#include <cmath>
#include <stack>
#include <stdexcept>
#include <utility>

namespace minrisk {

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1]. Kronrod nodes are listed
// as the positive half plus zero; Gauss-7 nodes are the odd-indexed entries.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline std::pair<double, double> gauss_kronrod_15(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double offset = half * kKronrodNodes[i];
    const double fsum =
        (i == 7) ? f(mid) : f(mid - offset) + f(mid + offset);
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Bisects until each segment's error estimate fits its share of
/// max(abs_tol, rel_tol * |I|). Throws std::runtime_error if the requested
/// tolerance is unreachable within the subdivision budget.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-12) {
  if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
  if (a == b) return 0.0;

  struct Segment {
    double a, b, value, error;
    int depth;
  };

  auto [value0, error0] = detail::gauss_kronrod_15(f, a, b);
  double total = value0;
  double total_error = error0;

  std::stack<Segment> work;
  work.push({a, b, value0, error0, 0});
  constexpr int kMaxDepth = 60;

  while (!work.empty()) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    Segment seg = work.top();
    work.pop();
    const double share = tol * (seg.b - seg.a) / (b - a);
    if (seg.error <= share) continue;
    if (seg.depth >= kMaxDepth)
      throw std::runtime_error("integrate: tolerance not reached");
    const double mid = 0.5 * (seg.a + seg.b);
    auto [lv, le] = detail::gauss_kronrod_15(f, seg.a, mid);
    auto [rv, re] = detail::gauss_kronrod_15(f, mid, seg.b);
    total += lv + rv - seg.value;
    total_error += le + re - seg.error;
    work.push({seg.a, mid, lv, le, seg.depth + 1});
    work.push({mid, seg.b, rv, re, seg.depth + 1});
  }
  return total;
}

}  // namespace minrisk
