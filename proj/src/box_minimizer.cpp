#include "modalfit/box_minimizer.hpp"

#include <cmath>
#include <algorithm>
#include <deque>
#include <limits>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

struct Pair {
  Vector s, y;
};

// Free variables: not held at a bound by the gradient.
Vector free_mask(const FeasibleBox& box, const Vector& x, const Vector& g) {
  Vector mask = Vector::Ones(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= box.lower[i] && g[i] > 0.0) || (x[i] >= box.upper[i] && g[i] < 0.0)) mask[i] = 0.0;
  }
  return mask;
}

// Two-loop recursion restricted to the masked coordinates.
Vector quasi_newton_direction(const std::deque<Pair>& pairs, const Vector& g, const Vector& mask) {
  Vector q = g.cwiseProduct(mask);
  const std::size_t k = pairs.size();
  std::vector<double> a(k), rho(k);
  double gamma = 1.0;
  bool have = false;
  for (std::size_t i = k; i-- > 0;) {
    const Vector s = pairs[i].s.cwiseProduct(mask);
    const Vector y = pairs[i].y.cwiseProduct(mask);
    const double sy = s.dot(y);
    if (!(sy > 1e-300) || !(sy > 1e-12 * s.norm() * y.norm())) {
      rho[i] = 0.0;
      continue;
    }
    rho[i] = 1.0 / sy;
    if (!have) {
      gamma = sy / y.squaredNorm();
      have = true;
    }
    a[i] = rho[i] * s.dot(q);
    q -= a[i] * y;
  }
  Vector r = gamma * q;
  for (std::size_t i = 0; i < k; ++i) {
    if (rho[i] == 0.0) continue;
    const Vector s = pairs[i].s.cwiseProduct(mask);
    const Vector y = pairs[i].y.cwiseProduct(mask);
    const double b = rho[i] * y.dot(r);
    r += (a[i] - b) * s;
  }
  return -r.cwiseProduct(mask);
}

}  // namespace

double projected_gradient_norm(const FeasibleBox& box, const Vector& x, const Vector& g) {
  return (box.project(x - g) - x).norm();
}

std::string to_string(BoxStatus status) {
  switch (status) {
    case BoxStatus::Converged: return "converged";
    case BoxStatus::Stagnated: return "stagnated";
    case BoxStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

BoxMinimizerResult minimize_on_box(BoxFunction& f, const FeasibleBox& box, const Vector& start,
                                   const BoxMinimizerOptions& options) {
  box.validate();
  if (start.size() != box.size()) throw DimensionError("box minimizer: start and box sizes differ");
  BoxMinimizerResult res;
  res.x = box.project(start);
  res.value = f.value(res.x);
  ++res.evaluations;
  res.gradient = f.gradient(res.x);
  const double width = (box.upper - box.lower).maxCoeff();

  std::deque<Pair> pairs;
  Index flat = 0;
  for (;;) {
    res.projected_gradient_norm = projected_gradient_norm(box, res.x, res.gradient);
    if (res.projected_gradient_norm <= options.tolerance) {
      res.status = BoxStatus::Converged;
      return res;
    }
    if (res.iterations >= options.max_iterations) {
      res.status = BoxStatus::IterationLimit;
      return res;
    }
    ++res.iterations;

    const Vector mask = free_mask(box, res.x, res.gradient);
    bool accepted = false;
    Vector x_new, g_new;
    double f_new = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Vector d;
      double t;
      if (pairs.empty()) {
        d = -res.gradient.cwiseProduct(mask);
        const double dmax = d.lpNorm<Eigen::Infinity>();
        t = dmax > 0.0 ? width / dmax : 1.0;
      } else {
        d = quasi_newton_direction(pairs, res.gradient, mask);
        t = 1.0;
        if (!(res.gradient.dot(d) < -1e-14 * res.gradient.norm() * d.norm())) {
          pairs.clear();
          d = -res.gradient.cwiseProduct(mask);
          const double dmax = d.lpNorm<Eigen::Infinity>();
          t = dmax > 0.0 ? width / dmax : 1.0;
        }
      }
      for (Index bt = 0; bt <= options.max_backtracks; ++bt, t *= 0.5) {
        const Vector trial = box.project(res.x + t * d);
        const Vector step = trial - res.x;
        if (step.lpNorm<Eigen::Infinity>() == 0.0) break;
        double ft;
        try {
          ft = f.value(trial);
          ++res.evaluations;
        } catch (const Error&) {
          ++res.evaluations;
          continue;
        }
        if (!std::isfinite(ft) || ft > res.value + options.armijo * res.gradient.dot(step)) continue;
        try {
          g_new = f.gradient(trial);
        } catch (const Error&) {
          continue;
        }
        x_new = trial;
        f_new = ft;
        accepted = true;
        break;
      }
      if (!accepted) {
        if (pairs.empty()) break;
        pairs.clear();
      }
    }
    if (!accepted) {
      res.status = BoxStatus::Stagnated;
      return res;
    }

    Pair p{x_new - res.x, g_new - res.gradient};
    if (p.s.dot(p.y) > 1e-12 * p.s.norm() * p.y.norm()) {
      pairs.push_back(std::move(p));
      if (static_cast<Index>(pairs.size()) > options.memory) pairs.pop_front();
    }
    const double decrease = res.value - f_new;
    res.x = std::move(x_new);
    res.value = f_new;
    res.gradient = std::move(g_new);
    flat = decrease <= 1e-15 * std::abs(res.value) ? flat + 1 : 0;
    if (flat >= 3) {
      res.projected_gradient_norm = projected_gradient_norm(box, res.x, res.gradient);
      res.status = res.projected_gradient_norm <= options.tolerance ? BoxStatus::Converged
                                                                     : BoxStatus::Stagnated;
      return res;
    }
  }
}

}  // namespace modalfit
