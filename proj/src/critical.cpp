#include "torus/critical.hpp"

#include "torus/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace torus {

namespace {

Torus2Params<double> unit_strength(Torus2Params<double> params) {
  params.eps = 1.0;
  params.omega.setZero();
  return params;
}

// Nelder-Mead on a periodic function of two variables.
template <typename F>
DetMinimum nelder_mead(F&& f, const Eigen::Vector2d& start, double size, double tolerance) {
  std::array<Eigen::Vector2d, 3> p = {start, start + Eigen::Vector2d(size, 0.0),
                                      start + Eigen::Vector2d(0.0, size)};
  std::array<double, 3> v = {f(p[0]), f(p[1]), f(p[2])};
  for (int iter = 0; iter < 2000; ++iter) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];
    const double extent = std::max((p[mid] - p[best]).cwiseAbs().maxCoeff(),
                                   (p[worst] - p[best]).cwiseAbs().maxCoeff());
    if (extent < tolerance) break;

    const Eigen::Vector2d centroid = 0.5 * (p[best] + p[mid]);
    const Eigen::Vector2d reflected = centroid + (centroid - p[worst]);
    const double fr = f(reflected);
    if (fr < v[best]) {
      const Eigen::Vector2d expanded = centroid + 2.0 * (centroid - p[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        p[worst] = expanded;
        v[worst] = fe;
      } else {
        p[worst] = reflected;
        v[worst] = fr;
      }
      continue;
    }
    if (fr < v[mid]) {
      p[worst] = reflected;
      v[worst] = fr;
      continue;
    }
    const bool outside = fr < v[worst];
    const Eigen::Vector2d contracted =
        outside ? Eigen::Vector2d(centroid + 0.5 * (reflected - centroid))
                : Eigen::Vector2d(centroid + 0.5 * (p[worst] - centroid));
    const double fc = f(contracted);
    if (fc < (outside ? fr : v[worst])) {
      p[worst] = contracted;
      v[worst] = fc;
      continue;
    }
    for (int i : {mid, worst}) {
      p[i] = p[best] + 0.5 * (p[i] - p[best]);
      v[i] = f(p[i]);
    }
  }
  const auto it = std::min_element(v.begin(), v.end());
  return {*it, wrap_unit(p[static_cast<std::size_t>(it - v.begin())])};
}

}  // namespace

DeterminantField::DeterminantField(const Torus2Params<double>& params, const CriticalOptions& options)
    : unit_map_(unit_strength(params)), options_(options) {
  if (options.grid < 4) throw std::invalid_argument("critical: grid must have at least 4 points per axis");
  if (options.candidates < 1) throw std::invalid_argument("critical: need at least one refinement candidate");
  const int n = options.grid;
  trace_.resize(static_cast<std::size_t>(n) * n);
  det_.resize(trace_.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Matrix2d h = unit_map_.coupling_matrix(Eigen::Vector2d(double(i) / n, double(j) / n));
      trace_[static_cast<std::size_t>(i) * n + j] = h.trace();
      det_[static_cast<std::size_t>(i) * n + j] = h.determinant();
    }
  }
}

double DeterminantField::determinant(const Eigen::Vector2d& x, double eps) const {
  const Eigen::Matrix2d h = unit_map_.coupling_matrix(x);
  return 1.0 + eps * h.trace() + eps * eps * h.determinant();
}

DetMinimum DeterminantField::minimum(double eps) const {
  const int n = options_.grid;
  auto at = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>((i + n) % n) * n + static_cast<std::size_t>((j + n) % n);
    return 1.0 + eps * trace_[k] + eps * eps * det_[k];
  };

  // Grid-local minima (periodic 8-neighbourhood), lowest first.
  std::vector<std::pair<double, std::pair<int, int>>> minima;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = at(i, j);
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di)
        for (int dj = -1; dj <= 1 && local; ++dj)
          if ((di != 0 || dj != 0) && at(i + di, j + dj) < v) local = false;
      if (local) minima.push_back({v, {i, j}});
    }
  }
  if (minima.empty()) minima.push_back({at(0, 0), {0, 0}});  // constant field
  const auto keep = std::min<std::size_t>(minima.size(), static_cast<std::size_t>(options_.candidates));
  std::partial_sort(minima.begin(), minima.begin() + static_cast<std::ptrdiff_t>(keep), minima.end());

  auto objective = [&](const Eigen::Vector2d& x) { return determinant(x, eps); };
  DetMinimum best{minima.front().first,
                  Eigen::Vector2d(double(minima.front().second.first) / n, double(minima.front().second.second) / n)};
  for (std::size_t c = 0; c < keep; ++c) {
    const Eigen::Vector2d start(double(minima[c].second.first) / n, double(minima[c].second.second) / n);
    DetMinimum refined = nelder_mead(objective, start, 1.0 / n, options_.x_tolerance);
    if (refined.value < best.value) best = refined;
  }
  return best;
}

DetMinimum min_det_df(const Torus2Params<double>& params, double eps, const CriticalOptions& options) {
  return DeterminantField(params, options).minimum(eps);
}

bool has_no_critical_value(const Torus2Params<double>& params) {
  const auto& a = params.amps;
  return a(0) == 0.0 && a(3) == 0.0 && a(1) * a(2) == 0.0;
}

CriticalResult eps_crit(const Torus2Params<double>& params, const CriticalOptions& options) {
  if (has_no_critical_value(params))
    throw NoCriticalValue("eps_crit: det(Df) = 1 for a1 = a4 = 0 and a2 a3 = 0");
  const DeterminantField field(params, options);

  double lo = 0.0;
  double hi = 1.0;
  while (field.minimum(hi).value > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > options.eps_limit) throw CapacityError("eps_crit: no sign change of det(Df) below the eps limit");
  }
  while (hi - lo >= options.eps_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (field.minimum(mid).value <= 0.0) hi = mid;
    else lo = mid;
  }

  CriticalResult out;
  out.eps_crit = 0.5 * (lo + hi);
  const DetMinimum at_crit = field.minimum(out.eps_crit);
  out.argmin_x = at_crit.x;
  out.residual = std::fabs(at_crit.value);
  return out;
}

}  // namespace torus
