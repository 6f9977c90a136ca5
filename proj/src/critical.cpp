#include "swallowtail/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "precise.hpp"
#include "swallowtail/linalg.hpp"
#include "swallowtail/parallel.hpp"

namespace swallowtail {

namespace {

using Vec = Eigen::VectorXd;

struct Solver {
  const Family& family;
  const FinderOptions& opts;

  std::size_t n() const { return family.n(); }

  FamilyJet jet(const Vec& x, int order) const {
    return family.evaluator().jet(std::span<const double>(x.data(), n()), x(static_cast<Eigen::Index>(n())), order);
  }

  double grad_norm(const Vec& x) const { return jet(x, 1).grad.norm(); }

  struct Outcome {
    Vec x;
    bool converged = false;
    bool singular_seed = false;
    bool skipped = false;
  };

  // Damped Newton on grad P = 0. The pseudo-inverse keeps the step defined
  // along continua; the doubled step restores fast convergence at points
  // where the Hessian itself vanishes.
  Outcome newton(Vec x) const {
    Outcome out;
    const double stop = 1e-3 * opts.grad_tol;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const FamilyJet j = jet(x, 2);
      const double g0 = j.grad.norm();
      if (!std::isfinite(g0)) break;
      if (j.grad.lpNorm<Eigen::Infinity>() <= stop) break;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(j.hess, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (it == 0 && sv(sv.size() - 1) <= 1e-12 * std::max(sv(0), 1e-300)) out.singular_seed = true;
      if (sv(0) <= 1e-300) {
        out.skipped = it == 0;
        break;
      }
      // Levenberg-Marquardt with mu = |g|^2: Newton-like at isolated points,
      // minimal-norm projection onto a continuum of solutions.
      const double mu = std::min(g0 * g0, 1e-4 * sv(0) * sv(0));
      const Vec ug = svd.matrixU().transpose() * j.grad;
      Vec coef(sv.size());
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double denom = sv(i) * sv(i) + mu;
        coef(i) = denom > 1e-300 && sv(i) > 1e-12 * sv(0) ? sv(i) * ug(i) / denom : 0.0;
      }
      const Vec step = -(svd.matrixV() * coef);

      Vec best = x;
      double best_g = g0;
      for (double t : {1.0, 2.0}) {
        const Vec trial = x + t * step;
        const double g = grad_norm(trial);
        if (g < best_g) {
          best_g = g;
          best = trial;
        }
      }
      if (best_g >= g0) {
        double t = 0.5;
        for (int h = 0; h < opts.max_halvings && best_g >= g0; ++h, t *= 0.5) {
          const Vec trial = x + t * step;
          const double g = grad_norm(trial);
          if (g < best_g) {
            best_g = g;
            best = trial;
          }
        }
      }
      if (best_g >= g0) break;
      x = best;
    }
    out.x = x;
    out.converged = jet(x, 1).grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol;
    return out;
  }

  // Gauss-Newton on [grad P; Hess(x) N] with N the near-null space of the
  // Hessian. At points where the Hessian degenerates this system is regular
  // again, so the polish reaches machine precision there.
  Vec polish_degenerate(Vec x, double reference) const {
    const auto dim = static_cast<Eigen::Index>(n() + 1);
    FamilyJet j = jet(x, 3);
    const auto eig = jacobi_eigen(j.hess);
    std::vector<Eigen::Index> null_cols;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::abs(eig.values(i)) <= 1e-4 * reference) null_cols.push_back(i);
    }
    if (null_cols.empty()) return x;
    Eigen::MatrixXd basis(dim, static_cast<Eigen::Index>(null_cols.size()));
    for (std::size_t c = 0; c < null_cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(null_cols[c]);
    const auto r = basis.cols();

    auto residual = [&](const FamilyJet& jj) {
      Vec res(dim * (1 + r));
      res.head(dim) = jj.grad;
      for (Eigen::Index c = 0; c < r; ++c) res.segment(dim * (1 + c), dim) = jj.hess * basis.col(c);
      return res;
    };

    const double g_start = j.grad.lpNorm<Eigen::Infinity>();
    Vec res = residual(j);
    double res_norm = res.norm();
    Vec x_start = x;
    for (int it = 0; it < 20 && res_norm > 0.0; ++it) {
      Eigen::MatrixXd a(dim * (1 + r), dim);
      a.topRows(dim) = j.hess;
      for (Eigen::Index c = 0; c < r; ++c) {
        for (Eigen::Index i = 0; i < dim; ++i) {
          for (Eigen::Index l = 0; l < dim; ++l) {
            double s = 0.0;
            for (Eigen::Index m = 0; m < dim; ++m) {
              s += j.third[static_cast<std::size_t>((i * dim + m) * dim + l)] * basis(m, c);
            }
            a(dim * (1 + c) + i, l) = s;
          }
        }
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
      svd.setThreshold(1e-12);
      const Vec step = -svd.solve(res);
      bool accepted = false;
      double t = 1.0;
      for (int h = 0; h < 8; ++h, t *= 0.5) {
        const Vec trial = x + t * step;
        const FamilyJet jt = jet(trial, 3);
        const Vec rt = residual(jt);
        if (rt.norm() < res_norm) {
          x = trial;
          j = jt;
          res = rt;
          res_norm = rt.norm();
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    if (j.grad.lpNorm<Eigen::Infinity>() > std::max(g_start, opts.grad_tol)) return x_start;
    return x;
  }

  // Newton, then the degenerate polish. Returns false when not converged.
  bool solve(Vec& x, bool& singular_seed, bool& skipped) const {
    const double reference = std::max(1.0, jet(x, 2).hess.norm());
    const Outcome o = newton(x);
    singular_seed = o.singular_seed;
    skipped = o.skipped;
    x = o.x;
    if (!o.converged) return false;
    x = polish_degenerate(x, reference);
    return true;
  }

  // Newton with the gradient in extended precision. Where P vanishes to
  // fourth order the double gradient reaches rounding level while x is
  // still ~1e-4 off the locus; the wide gradient keeps the iteration going.
  Vec refine_precise(const detail::PreciseEvaluator& precise, const Vec& start) const {
    using detail::wide;
    const auto dim = start.size();
    detail::WideVec x(start.data(), start.data() + dim);
    Eigen::MatrixXd hess;
    detail::WideVec g = precise.gradient(x, &hess);
    double gn = detail::wide_norm(g);
    for (int it = 0; it < opts.max_iterations && gn > 0.0; ++it) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(hess, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv(0) <= 1e-300) break;
      Vec gd(dim);
      for (Eigen::Index i = 0; i < dim; ++i) gd(i) = static_cast<double>(g[static_cast<std::size_t>(i)]);
      const Vec ug = svd.matrixU().transpose() * gd;
      Vec coef = Vec::Zero(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (sv(i) > 1e-15 * sv(0)) coef(i) = ug(i) / sv(i);
      }
      const Vec step = -(svd.matrixV() * coef);
      auto trial_at = [&](double t) {
        detail::WideVec y = x;
        for (Eigen::Index i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] += static_cast<wide>(t) * static_cast<wide>(step(i));
        return y;
      };
      detail::WideVec best = x;
      double best_g = gn;
      // t = 2 and 3 are exact for gradients vanishing to second and third order
      for (double t : {1.0, 2.0, 3.0}) {
        const auto y = trial_at(t);
        const double gy = detail::wide_norm(precise.gradient(y));
        if (gy < best_g) {
          best_g = gy;
          best = y;
        }
      }
      double t = 0.5;
      for (int h = 0; h < opts.max_halvings && best_g >= gn; ++h, t *= 0.5) {
        const auto y = trial_at(t);
        const double gy = detail::wide_norm(precise.gradient(y));
        if (gy < best_g) {
          best_g = gy;
          best = y;
        }
      }
      if (best_g >= gn) break;
      x = best;
      g = precise.gradient(x, &hess);
      gn = best_g;
    }
    Vec out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) out(i) = static_cast<double>(x[static_cast<std::size_t>(i)]);
    return out;
  }

  bool in_domain(const Vec& x) const {
    if (family.periodic()) return true;
    const auto [lo, hi] = family.domain();
    const double slack = 1e-9 * (1.0 + std::abs(hi - lo));
    for (std::size_t i = 0; i < n(); ++i) {
      if (x(static_cast<Eigen::Index>(i)) < lo - slack || x(static_cast<Eigen::Index>(i)) > hi + slack) return false;
    }
    return true;
  }

  double point_distance(const Vec& x, const Vec& y) const {
    const auto d = static_cast<Eigen::Index>(n());
    const double base = family.base_distance(std::span<const double>(x.data(), n()), std::span<const double>(y.data(), n()));
    return std::max(base, std::abs(x(d) - y(d)));
  }

  Vec canonical(const Vec& x) const {
    std::vector<double> b(x.data(), x.data() + n());
    b = family.canonical(std::move(b));
    Vec out = x;
    for (std::size_t i = 0; i < n(); ++i) out(static_cast<Eigen::Index>(i)) = b[i] + 0.0;
    out(static_cast<Eigen::Index>(n())) += 0.0;  // no negative zero in reports
    return out;
  }
};

std::vector<std::vector<double>> grid_points(const Family& family, int grid) {
  const auto axis = family.grid_axis(grid);
  const std::size_t n = family.n();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= axis.size();
  std::vector<std::vector<double>> out(total, std::vector<double>(n));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      out[idx][i] = axis[rest % axis.size()];
      rest /= axis.size();
    }
  }
  return out;
}

std::vector<double> seed_energies(const Family& family, std::span<const double> b) {
  try {
    return family.spectrum(b);
  } catch (const std::domain_error&) {
    const auto a = family.evaluator().coefficients(b);
    std::vector<double> out;
    for (const auto& r : monic_roots(std::span<const double>(a.data(), family.k()))) out.push_back(r.real());
    std::sort(out.begin(), out.end());
    return out;
  }
}

}  // namespace

std::size_t SingularLocus::dirac_count() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const CriticalPoint& p) {
    return p.classification == Classification::dirac;
  }));
}

int SingularLocus::dimension() const {
  int d = -1;
  for (const auto& c : components) d = std::max(d, c.dimension);
  return d;
}

DimensionEstimate estimate_locus_dimension(const Family& family, std::span<const double> b, double z,
                                           const FinderOptions& opts) {
  const Solver solver{family, opts};
  const auto dim = static_cast<Eigen::Index>(family.n() + 1);
  Vec x(dim);
  for (std::size_t i = 0; i < family.n(); ++i) x(static_cast<Eigen::Index>(i)) = b[i];
  x(dim - 1) = z;

  DimensionEstimate est;
  const auto eig = jacobi_eigen(solver.jet(x, 2).hess);
  const double top = eig.values.cwiseAbs().maxCoeff();
  const double threshold = std::max(opts.null_rel_tol * top, opts.classifier.signature_abs_floor);
  for (Eigen::Index i = 0; i < dim; ++i) est.hessian_null += std::abs(eig.values(i)) <= threshold ? 1 : 0;

  // Perturb, re-solve, and count directions in which the solutions spread.
  const double radius = 10.0 * opts.dedup_radius;
  std::mt19937 rng(12345u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int trials = 4 * static_cast<int>(dim);
  std::vector<Vec> cloud;
  for (int t = 0; t < trials; ++t) {
    Vec u(dim);
    for (Eigen::Index i = 0; i < dim; ++i) u(i) = gauss(rng);
    Vec y = x + radius * u.normalized();
    bool singular = false;
    bool skipped = false;
    if (!solver.solve(y, singular, skipped)) continue;
    if (std::abs(solver.jet(y, 0).value) > opts.val_tol) continue;
    const Vec d = y - x;
    if (d.lpNorm<Eigen::Infinity>() > 3.0 * radius) continue;
    cloud.push_back(d);
  }
  if (cloud.size() >= 2) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(cloud.size()), dim);
    for (std::size_t i = 0; i < cloud.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = cloud[i].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double norm = std::sqrt(static_cast<double>(cloud.size()));
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      est.cloud += svd.singularValues()(i) / norm > 0.05 * radius ? 1 : 0;
    }
  }
  est.estimate = std::min(est.hessian_null, est.cloud);
  est.ambiguous = est.cloud > est.hessian_null;
  return est;
}

SingularLocus find_critical_points(const Family& family, const FinderOptions& opts) {
  SingularLocus locus;
  const Solver solver{family, opts};
  const std::size_t n = family.n();
  const auto dim = static_cast<Eigen::Index>(n + 1);

  const auto bases = grid_points(family, opts.grid);
  std::vector<Vec> seeds;
  for (const auto& b : bases) {
    for (double z : seed_energies(family, b)) {
      Vec x(dim);
      for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i)) = b[i];
      x(dim - 1) = z;
      seeds.push_back(std::move(x));
    }
  }

  struct SeedResult {
    Vec x;
    bool converged = false;
    bool singular = false;
    bool skipped = false;
  };
  std::vector<SeedResult> results(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    SeedResult& r = results[i];
    r.x = seeds[i];
    r.converged = solver.solve(r.x, r.singular, r.skipped);
  });

  auto& diag = locus.diagnostics;
  diag.seeds = seeds.size();
  std::vector<Vec> kept;
  std::vector<double> kept_residual;
  auto merge = [&](const Vec& x, double res) {
    for (std::size_t u = 0; u < kept.size(); ++u) {
      if (solver.point_distance(kept[u], x) <= opts.dedup_radius) {
        if (res < kept_residual[u]) {
          kept[u] = x;
          kept_residual[u] = res;
        }
        return;
      }
    }
    kept.push_back(x);
    kept_residual.push_back(res);
  };
  for (const auto& r : results) {
    diag.singular_seeds += r.singular ? 1 : 0;
    diag.skipped_seeds += r.skipped ? 1 : 0;
    if (!r.converged) {
      ++diag.nonconverged;
      continue;
    }
    ++diag.converged;
    const FamilyJet j = solver.jet(r.x, 1);
    if (std::abs(j.value) > opts.val_tol || !solver.in_domain(r.x)) {
      ++diag.filtered;
      continue;
    }
    merge(solver.canonical(r.x), j.grad.lpNorm<Eigen::Infinity>());
  }

  // Refine the survivors in extended precision and merge again: points that
  // stalled near a high-order contact may now coincide with their neighbours.
  const detail::PreciseEvaluator precise(family.char_poly());
  std::vector<Vec> refined(kept.size());
  parallel_for(kept.size(), [&](std::size_t i) {
    const Vec y = solver.refine_precise(precise, kept[i]);
    const FamilyJet j = solver.jet(y, 1);
    const bool better = j.grad.lpNorm<Eigen::Infinity>() <= std::max(kept_residual[i], opts.grad_tol) &&
                        std::abs(j.value) <= opts.val_tol && solver.in_domain(y);
    refined[i] = better ? solver.canonical(y) : kept[i];
  });
  kept.clear();
  kept_residual.clear();
  for (const Vec& x : refined) merge(x, solver.jet(x, 1).grad.lpNorm<Eigen::Infinity>());
  diag.deduped = kept.size();

  // Deterministic order: by base point, then energy.
  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::abs(kept[a](i) - kept[b](i)) > opts.dedup_radius) return kept[a](i) < kept[b](i);
    }
    return false;
  });

  locus.points.resize(kept.size());
  parallel_for(kept.size(), [&](std::size_t slot) {
    const Vec& x = kept[order[slot]];
    CriticalPoint& p = locus.points[slot];
    p.b.assign(x.data(), x.data() + n);
    p.z = x(dim - 1);
    const FamilyJet j = solver.jet(x, 1);
    p.residual_grad = j.grad.lpNorm<Eigen::Infinity>();
    p.residual_val = std::abs(j.value);
    PointClass c = classify(family, p.b, p.z, opts.classifier);
    p.hessian = std::move(c.hessian);
    p.signature = c.signature;
    p.tilt_free = c.tilt_free;
    p.classification = c.classification;
    p.fiber = std::move(c.fiber);
    p.fiber_consistent = c.fiber_consistent;
    if (opts.estimate_dimension && p.signature.zero > 0) {
      const DimensionEstimate est = estimate_locus_dimension(family, p.b, p.z, opts);
      p.hessian_null_dim = est.hessian_null;
      p.cloud_dim = est.cloud;
      p.locus_dim_estimate = est.estimate;
      p.ambiguous = est.ambiguous;
    }
  });

  // Isolated points form their own components; points on a continuum are
  // linked when closer than 1.5 seed spacings.
  const double link = 1.5 * family.grid_spacing(opts.grid);
  std::vector<std::size_t> parent(locus.points.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < locus.points.size(); ++i) {
    if (locus.points[i].locus_dim_estimate == 0) continue;
    for (std::size_t j = i + 1; j < locus.points.size(); ++j) {
      if (locus.points[j].locus_dim_estimate == 0) continue;
      const auto& p = locus.points[i];
      const auto& q = locus.points[j];
      const double d = std::max(family.base_distance(p.b, q.b), std::abs(p.z - q.z));
      if (d <= link) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, int> component_of_root;
  for (std::size_t i = 0; i < locus.points.size(); ++i) {
    const std::size_t root = find(i);
    auto [it, inserted] = component_of_root.try_emplace(root, static_cast<int>(locus.components.size()));
    if (inserted) locus.components.emplace_back();
    locus.components[static_cast<std::size_t>(it->second)].members.push_back(i);
    locus.points[i].component = it->second;
  }
  // Most frequent member estimate; crossings of curves look 2-dimensional
  // locally but are outnumbered by the regular points.
  for (auto& comp : locus.components) {
    std::map<int, std::size_t> votes;
    for (std::size_t i : comp.members) ++votes[locus.points[i].locus_dim_estimate];
    comp.dimension = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
                       return a.second < b.second;
                     })->first;
  }
  for (const auto& p : locus.points) ++locus.stratum_counts[p.stratum().label()];
  return locus;
}

std::vector<std::vector<double>> singular_fiber_solve(const Family& family, std::span<const double> lambda,
                                                      const FinderOptions& opts) {
  const auto& xi = family.characteristic_map();
  const std::size_t n = family.n();
  if (lambda.size() != xi.components()) throw std::invalid_argument("singular_fiber_solve: lambda has wrong length");
  const Vec target = Eigen::Map<const Vec>(lambda.data(), static_cast<Eigen::Index>(lambda.size()));
  const double tol = 1e-10 * (1.0 + target.lpNorm<Eigen::Infinity>());

  auto residual = [&](const Vec& b) {
    const auto v = xi(std::span<const double>(b.data(), n));
    return Vec(Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())) - target);
  };

  const auto bases = grid_points(family, opts.grid);
  std::vector<std::optional<Vec>> solutions(bases.size());
  parallel_for(bases.size(), [&](std::size_t s) {
    Vec b = Eigen::Map<const Vec>(bases[s].data(), static_cast<Eigen::Index>(n));
    Vec r = residual(b);
    double rn = r.norm();
    for (int it = 0; it < opts.max_iterations && rn > 1e-3 * tol; ++it) {
      const Eigen::MatrixXd jac = xi.jacobian(std::span<const double>(b.data(), n));
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.singularValues().size() == 0 || svd.singularValues()(0) <= 1e-300) break;
      svd.setThreshold(1e-12);
      const Vec step = -svd.solve(r);
      Vec best = b;
      double best_n = rn;
      for (double t : {1.0, 2.0}) {
        const Vec trial = b + t * step;
        const double tn = residual(trial).norm();
        if (tn < best_n) {
          best = trial;
          best_n = tn;
        }
      }
      double t = 0.5;
      for (int h = 0; h < opts.max_halvings && best_n >= rn; ++h, t *= 0.5) {
        const Vec trial = b + t * step;
        const double tn = residual(trial).norm();
        if (tn < best_n) {
          best = trial;
          best_n = tn;
        }
      }
      if (best_n >= rn) break;
      b = best;
      r = residual(b);
      rn = r.norm();
    }
    if (r.lpNorm<Eigen::Infinity>() <= tol) solutions[s] = b;
  });

  std::vector<std::vector<double>> out;
  const auto [lo, hi] = family.domain();
  for (const auto& s : solutions) {
    if (!s) continue;
    std::vector<double> b = family.canonical(std::vector<double>(s->data(), s->data() + n));
    if (!family.periodic() &&
        std::any_of(b.begin(), b.end(), [&](double v) { return v < lo - 1e-9 || v > hi + 1e-9; })) {
      continue;
    }
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const std::vector<double>& c) { return family.base_distance(c, b) <= opts.dedup_radius; });
    if (!dup) out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConsistencyReport verify_discriminant_consistency(const Family& family, SingularLocus& locus, double disc_tol,
                                                  double rank_tol) {
  ConsistencyReport report;
  const auto& xi = family.characteristic_map();
  const int maximal = maximal_jacobian_rank(xi);
  for (std::size_t i = 0; i < locus.points.size(); ++i) {
    auto& p = locus.points[i];
    ConsistencyEntry e;
    e.index = i;
    std::vector<double> roots;
    for (const auto& c : p.fiber.clusters) roots.insert(roots.end(), static_cast<std::size_t>(c.multiplicity), c.value);
    if (family.k() >= 2) {
      e.disc = discriminant(xi(p.b), family.k());
      e.scale = discriminant_scale(roots);
    } else {
      e.disc = 1.0;
    }
    e.jacobian_rank = jacobian_rank(xi, p.b, rank_tol);
    e.maximal_rank = maximal;
    e.passed = std::abs(e.disc) <= disc_tol * e.scale && e.jacobian_rank < maximal;
    p.spurious = !e.passed;
    report.failed += e.passed ? 0 : 1;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace swallowtail
