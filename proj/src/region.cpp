#include "swallowtail/region.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "swallowtail/parallel.hpp"

namespace swallowtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t grid_total(std::size_t n, int grid) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(grid);
  return total;
}

void fill_point(const std::vector<double>& axis, std::size_t n, std::size_t index, std::vector<double>& b) {
  b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = axis[index % axis.size()];
    index /= axis.size();
  }
}

struct Partial {
  std::vector<double> lo, hi;
  std::vector<std::vector<double>> arg_lo, arg_hi;
  double min_disc = kInf;
  double max_abs_disc = 0.0;
  std::vector<std::size_t> ranks;

  explicit Partial(std::size_t comps, std::size_t n)
      : lo(comps, kInf), hi(comps, -kInf), arg_lo(comps), arg_hi(comps), ranks(n + 1, 0) {}

  void add(const RegionSample& s) {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (s.xi[i] < lo[i]) {
        lo[i] = s.xi[i];
        arg_lo[i] = s.b;
      }
      if (s.xi[i] > hi[i]) {
        hi[i] = s.xi[i];
        arg_hi[i] = s.b;
      }
    }
    min_disc = std::min(min_disc, s.disc);
    max_abs_disc = std::max(max_abs_disc, std::abs(s.disc));
    ++ranks[static_cast<std::size_t>(s.jac_rank)];
  }

  void merge(const Partial& o) {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (o.lo[i] < lo[i]) {
        lo[i] = o.lo[i];
        arg_lo[i] = o.arg_lo[i];
      }
      if (o.hi[i] > hi[i]) {
        hi[i] = o.hi[i];
        arg_hi[i] = o.arg_hi[i];
      }
    }
    min_disc = std::min(min_disc, o.min_disc);
    max_abs_disc = std::max(max_abs_disc, o.max_abs_disc);
    for (std::size_t r = 0; r < ranks.size(); ++r) ranks[r] += o.ranks[r];
  }
};

RegionSample evaluate_sample(const Family& family, std::vector<double> b, const RegionOptions& opts) {
  RegionSample s;
  const auto& xi = family.characteristic_map();
  s.xi = xi(b);
  if (opts.compute_disc) s.disc = family.k() >= 2 ? discriminant(s.xi, family.k()) : 1.0;
  if (opts.compute_rank) s.jac_rank = jacobian_rank(xi, b, opts.rank_tol, opts.rank_floor);
  s.b = std::move(b);
  return s;
}

bool inside_box(const Family& family, const std::vector<double>& b) {
  if (family.periodic()) return true;
  const auto [lo, hi] = family.domain();
  return std::all_of(b.begin(), b.end(), [&](double v) { return v >= lo - 1e-12 && v <= hi + 1e-12; });
}

// Local optimum of one characteristic-map component by damped Newton on its
// gradient, accepted only while the value improves in the wanted direction.
std::vector<double> refine_extremum(const Family& family, const CompiledPoly& comp, std::vector<double> b,
                                    bool maximize) {
  const std::size_t n = b.size();
  const double sign = maximize ? -1.0 : 1.0;
  Jet jet;
  comp.eval(b, 2, jet);
  double f = sign * jet.value;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(n));
    Eigen::MatrixXd h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      g(static_cast<Eigen::Index>(i)) = sign * jet.grad[i];
      for (std::size_t j = 0; j < n; ++j) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sign * jet.hess[i * n + j];
    }
    const double gn = g.norm();
    if (gn <= 1e-15) break;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double mu = std::min(gn * gn, 1e-4 * sv(0) * sv(0));
    const Eigen::VectorXd ug = svd.matrixU().transpose() * g;
    Eigen::VectorXd coef(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      const double denom = sv(i) * sv(i) + mu;
      coef(i) = denom > 1e-300 ? sv(i) * ug(i) / denom : 0.0;
    }
    Eigen::VectorXd step = -(svd.matrixV() * coef);
    // Newton may head for a saddle; fall back to steepest descent then.
    if (step.dot(g) >= 0.0) step = -g / std::max(1.0, sv(0));
    bool moved = false;
    double t = 1.0;
    for (int h2 = 0; h2 < 40 && !moved; ++h2, t *= 0.5) {
      std::vector<double> trial(b);
      for (std::size_t i = 0; i < n; ++i) trial[i] += t * step(static_cast<Eigen::Index>(i));
      if (!inside_box(family, trial)) continue;
      Jet tj;
      comp.eval(trial, 2, tj);
      if (sign * tj.value < f) {
        b = std::move(trial);
        jet = tj;
        f = sign * tj.value;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return b;
}

// Hooke-Jeeves pattern search on |disc(Xi(b))|.
std::vector<double> minimize_disc(const Family& family, std::vector<double> b, double step, double& value) {
  value = std::abs(disc_at(family, b));
  int evals = 0;
  while (step > 1e-13 && evals < 20000 && value > 0.0) {
    bool improved = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        std::vector<double> trial(b);
        trial[i] += dir * step;
        if (!inside_box(family, trial)) continue;
        const double v = std::abs(disc_at(family, trial));
        ++evals;
        if (v < value) {
          value = v;
          b = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return b;
}

std::vector<DiscriminantContact> find_contacts(const Family& family, const std::vector<RegionSample>& samples,
                                               int grid, double scale, const RegionOptions& opts) {
  std::vector<DiscriminantContact> contacts;
  if (family.k() < 2 || samples.empty()) return contacts;
  const std::size_t n = family.n();
  const auto g = static_cast<std::size_t>(grid);

  // Grid-local minima of |disc| below a loose threshold.
  std::vector<std::size_t> candidates;
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const double v = std::abs(samples[idx].disc);
    if (v > 1e-2 * scale) continue;
    std::vector<std::size_t> digits(n);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      digits[i] = rest % g;
      rest /= g;
    }
    bool minimum = true;
    std::size_t neighbours = 1;
    for (std::size_t i = 0; i < n; ++i) neighbours *= 3;
    for (std::size_t code = 0; code < neighbours && minimum; ++code) {
      std::size_t c = code;
      std::size_t other = 0;
      std::size_t stride = 1;
      bool valid = true;
      bool self = true;
      for (std::size_t i = 0; i < n; ++i) {
        const int off = static_cast<int>(c % 3) - 1;
        c /= 3;
        self = self && off == 0;
        long d = static_cast<long>(digits[i]) + off;
        if (family.periodic()) {
          d = (d + static_cast<long>(g)) % static_cast<long>(g);
        } else if (d < 0 || d >= static_cast<long>(g)) {
          valid = false;
        }
        other += static_cast<std::size_t>(d) * stride;
        stride *= g;
      }
      if (!valid || self) continue;
      if (std::abs(samples[other].disc) < v) minimum = false;
    }
    if (minimum) candidates.push_back(idx);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(samples[a].disc) < std::abs(samples[b].disc);
  });
  if (candidates.size() > opts.max_contact_candidates) candidates.resize(opts.max_contact_candidates);

  struct Refined {
    std::vector<double> b;
    double value = 0.0;
  };
  std::vector<Refined> refined(candidates.size());
  const double step = 0.5 * family.grid_spacing(grid);
  parallel_for(candidates.size(), [&](std::size_t i) {
    refined[i].b = minimize_disc(family, samples[candidates[i]].b, step, refined[i].value);
  });

  const auto& xi = family.characteristic_map();
  for (const auto& r : refined) {
    if (r.value > opts.contact_tol * scale) continue;
    const auto lambda = xi(r.b);
    double norm = 0.0;
    for (double v : lambda) norm = std::max(norm, std::abs(v));
    const auto b = family.canonical(r.b);
    bool merged = false;
    for (auto& c : contacts) {
      double d = 0.0;
      for (std::size_t i = 0; i < lambda.size(); ++i) d = std::max(d, std::abs(lambda[i] - c.xi[i]));
      if (d <= 1e-2 * (1.0 + norm)) {
        if (r.value < std::abs(c.disc)) {
          c.xi = lambda;
          c.disc = r.value;
        }
        const bool known = std::any_of(c.b.begin(), c.b.end(), [&](const std::vector<double>& o) {
          return family.base_distance(o, b) <= 1e-4;
        });
        if (!known) c.b.push_back(b);
        merged = true;
        break;
      }
    }
    if (!merged) contacts.push_back({lambda, {b}, r.value});
  }
  for (auto& c : contacts) std::sort(c.b.begin(), c.b.end());
  std::sort(contacts.begin(), contacts.end(),
            [](const DiscriminantContact& a, const DiscriminantContact& b) { return a.xi < b.xi; });
  return contacts;
}

}  // namespace

double disc_at(const Family& family, std::span<const double> b) {
  if (family.k() < 2) return 1.0;
  return discriminant(family.characteristic_map()(b), family.k());
}

std::vector<RegionSample> sample_region(const Family& family, int grid, const RegionOptions& opts) {
  if (grid < 2) throw std::invalid_argument("region grid must be at least 2");
  const std::size_t n = family.n();
  const auto axis = family.grid_axis(grid);
  std::vector<RegionSample> samples(grid_total(n, grid));
  parallel_for(samples.size(), [&](std::size_t idx) {
    std::vector<double> b;
    fill_point(axis, n, idx, b);
    samples[idx] = evaluate_sample(family, std::move(b), opts);
  });
  double max_abs = 0.0;
  for (const auto& s : samples) max_abs = std::max(max_abs, std::abs(s.disc));
  const double threshold = opts.near_tol * (1.0 + max_abs);
  for (auto& s : samples) s.near_disc = family.k() >= 2 && std::abs(s.disc) <= threshold;
  return samples;
}

Region analyze_region(const Family& family, const RegionOptions& opts) {
  if (opts.grid < 2) throw std::invalid_argument("region grid must be at least 2");
  Region region;
  const std::size_t n = family.n();
  const auto& xi = family.characteristic_map();
  const std::size_t comps = xi.components();
  const std::size_t total = grid_total(n, opts.grid);
  const bool store = total <= opts.max_stored;
  RegionSummary& sum = region.summary;
  sum.grid = opts.grid;
  sum.count = total;

  Partial acc(comps, n);
  if (store) {
    region.samples = sample_region(family, opts.grid, opts);
    for (const auto& s : region.samples) acc.add(s);
  } else {
    const auto axis = family.grid_axis(opts.grid);
    const std::size_t chunks = std::min<std::size_t>(total, 64u * worker_count());
    std::vector<Partial> parts(chunks, Partial(comps, n));
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t begin = total * c / chunks;
      const std::size_t end = total * (c + 1) / chunks;
      std::vector<double> b;
      for (std::size_t idx = begin; idx < end; ++idx) {
        fill_point(axis, n, idx, b);
        parts[c].add(evaluate_sample(family, b, opts));
      }
    });
    for (const auto& p : parts) acc.merge(p);
  }

  sum.min_disc = family.k() >= 2 ? acc.min_disc : 1.0;
  sum.max_abs_disc = acc.max_abs_disc;
  sum.rank_histogram = acc.ranks;
  if (!opts.compute_rank) sum.rank_histogram.clear();
  const double scale = sum.disc_scale();
  if (store) {
    sum.near_disc_count = static_cast<std::size_t>(
        std::count_if(region.samples.begin(), region.samples.end(), [](const RegionSample& s) { return s.near_disc; }));
  } else if (opts.compute_disc && family.k() >= 2) {
    const auto axis = family.grid_axis(opts.grid);
    const std::size_t chunks = std::min<std::size_t>(total, 64u * worker_count());
    std::vector<std::size_t> counts(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
      std::vector<double> b;
      for (std::size_t idx = total * c / chunks; idx < total * (c + 1) / chunks; ++idx) {
        fill_point(axis, n, idx, b);
        counts[c] += std::abs(disc_at(family, b)) <= opts.near_tol * scale ? 1 : 0;
      }
    });
    for (auto c : counts) sum.near_disc_count += c;
  }

  sum.ranges.resize(comps);
  sum.constant.resize(comps);
  for (std::size_t i = 0; i < comps; ++i) {
    sum.constant[i] = xi.symbolic()[i].is_constant();
    sum.ranges[i] = {acc.lo[i], acc.hi[i]};
    if (!opts.refine_ranges || sum.constant[i]) continue;
    const CompiledPoly comp(xi.symbolic()[i]);
    const auto lo_b = refine_extremum(family, comp, acc.arg_lo[i], false);
    const auto hi_b = refine_extremum(family, comp, acc.arg_hi[i], true);
    sum.ranges[i].first = std::min(sum.ranges[i].first, comp.value(lo_b));
    sum.ranges[i].second = std::max(sum.ranges[i].second, comp.value(hi_b));
  }

  if (opts.find_contacts && store && opts.compute_disc) {
    sum.contacts = find_contacts(family, region.samples, opts.grid, scale, opts);
  }
  return region;
}

std::vector<CurveTrace> boundary_curves(const Family& family, int samples) {
  std::vector<CurveTrace> out;
  if (samples < 1) return out;
  const auto [lo, hi] = family.domain();
  for (const auto& curve : family.curves()) {
    if (curve.direction.size() != family.n()) continue;
    CurveTrace trace;
    trace.label = curve.label;
    for (int i = 0; i < samples; ++i) {
      const double t = family.periodic() ? lo + (hi - lo) * i / samples
                                         : (samples == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (samples - 1));
      std::vector<double> b(family.n());
      for (std::size_t j = 0; j < b.size(); ++j) b[j] = t * curve.direction[j];
      trace.t.push_back(t);
      trace.xi.push_back(family.characteristic_map()(b));
    }
    out.push_back(std::move(trace));
  }
  return out;
}

// ---------------------------------------------------------------- export

void write_csv(std::ostream& out, const Family& family, const std::vector<RegionSample>& samples) {
  const auto& names = family.variables();
  std::vector<std::string> header(names.begin(), names.end());
  for (std::size_t i = 0; i + 1 < family.k(); ++i) header.push_back("xi" + std::to_string(i));
  header.emplace_back("disc");
  header.emplace_back("jac_rank");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\r\n";
  char buf[32];
  for (const auto& s : samples) {
    bool first = true;
    auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out << (first ? "" : ",") << buf;
      first = false;
    };
    for (double v : s.b) put(v);
    for (double v : s.xi) put(v);
    put(s.disc);
    out << "," << s.jac_rank << "\r\n";
  }
}

namespace {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

std::string fmt(double v, int prec = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Zero set of f on a rectangular grid as line segments.
std::vector<std::array<double, 4>> marching_squares(const std::function<double(double, double)>& f, const Axis& ax,
                                                    const Axis& ay, int nx, int ny) {
  std::vector<double> values(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  auto x_at = [&](int i) { return ax.lo + (ax.hi - ax.lo) * i / nx; };
  auto y_at = [&](int j) { return ay.lo + (ay.hi - ay.lo) * j / ny; };
  parallel_for(values.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx % static_cast<std::size_t>(nx + 1));
    const int j = static_cast<int>(idx / static_cast<std::size_t>(nx + 1));
    values[idx] = f(x_at(i), y_at(j));
  });
  auto v = [&](int i, int j) { return values[static_cast<std::size_t>(j * (nx + 1) + i)]; };
  std::vector<std::array<double, 4>> segs;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::array<double, 4> c{v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)};
      const std::array<std::array<double, 2>, 4> p{{{x_at(i), y_at(j)}, {x_at(i + 1), y_at(j)},
                                                    {x_at(i + 1), y_at(j + 1)}, {x_at(i), y_at(j + 1)}}};
      std::vector<std::array<double, 2>> hits;
      for (int e = 0; e < 4; ++e) {
        const double a = c[static_cast<std::size_t>(e)];
        const double b = c[static_cast<std::size_t>((e + 1) % 4)];
        if ((a < 0) != (b < 0)) {
          const double t = a / (a - b);
          const auto& pa = p[static_cast<std::size_t>(e)];
          const auto& pb = p[static_cast<std::size_t>((e + 1) % 4)];
          hits.push_back({pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])});
        }
      }
      for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
        segs.push_back({hits[h][0], hits[h][1], hits[h + 1][0], hits[h + 1][1]});
      }
    }
  }
  return segs;
}

}  // namespace

void write_svg(std::ostream& out, const Family& family, const Region& region, const std::vector<CurveTrace>& curves) {
  constexpr int W = 800;
  constexpr int H = 600;
  constexpr double L = 70, R = 30, T = 40, B = 60;
  const auto& sum = region.summary;
  const std::size_t comps = family.k() >= 1 ? family.k() - 1 : 0;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << "characteristic region: " << family.name() << "</text>\n";
  if (comps == 0) {
    out << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">single band: no region</text>\n</svg>\n";
    return;
  }
  const bool two_d = comps >= 2;

  // Data bounds from samples, curves and contacts.
  double xlo = sum.ranges.empty() ? 0.0 : sum.ranges[0].first;
  double xhi = sum.ranges.empty() ? 1.0 : sum.ranges[0].second;
  double ylo = two_d ? sum.ranges[1].first : -1.0;
  double yhi = two_d ? sum.ranges[1].second : 1.0;
  auto widen = [](double& lo, double& hi) {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;
  };
  widen(xlo, xhi);
  widen(ylo, yhi);
  const Axis ax{xlo, xhi, L, W - R};
  const Axis ay{ylo, yhi, H - B, T};

  // Axes with ticks.
  out << "<g stroke=\"black\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << L << "\" y2=\"" << T << "\"/>\n";
  for (double t : nice_ticks(xlo, xhi)) {
    const double px = ax.map(t);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << H - B << "\" x2=\"" << fmt(px) << "\" y2=\"" << H - B + 5 << "\"/>";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" stroke=\"none\">"
        << tick_label(t) << "</text>\n";
  }
  if (two_d) {
    for (double t : nice_ticks(ylo, yhi)) {
      const double py = ay.map(t);
      out << "<line x1=\"" << L - 5 << "\" y1=\"" << fmt(py) << "\" x2=\"" << L << "\" y2=\"" << fmt(py) << "\"/>";
      out << "<text x=\"" << L - 8 << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\" stroke=\"none\">"
          << tick_label(t) << "</text>\n";
    }
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\" stroke=\"none\">xi0</text>\n";
  if (two_d) {
    out << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" stroke=\"none\" transform=\"rotate(-90 18 "
        << (T + H - B) / 2 << ")\">xi1</text>\n";
  }
  out << "</g>\n";

  // Scatter, one mark per 2x2 pixel cell.
  std::set<std::pair<int, int>> cells;
  for (const auto& s : region.samples) {
    const double px = ax.map(s.xi[0]);
    const double py = two_d ? ay.map(s.xi[1]) : ay.map(0.0);
    cells.emplace(static_cast<int>(std::floor(px / 2.0)), static_cast<int>(std::floor(py / 2.0)));
  }
  out << "<g class=\"samples\" fill=\"#4a7ab5\" fill-opacity=\"0.6\">\n";
  for (const auto& [cx, cy] : cells) {
    out << "<rect x=\"" << 2 * cx << "\" y=\"" << 2 * cy << "\" width=\"2\" height=\"2\"/>\n";
  }
  out << "</g>\n";

  // Discriminant zero set in the (xi0, xi1) plane when the other components are constant.
  bool planar = two_d;
  for (std::size_t i = 2; i < comps; ++i) planar = planar && sum.constant[i];
  if (planar && family.k() >= 3) {
    std::vector<double> fixed(comps);
    for (std::size_t i = 2; i < comps; ++i) fixed[i] = sum.ranges[i].first;
    const std::size_t k = family.k();
    auto f = [&](double x, double y) {
      std::vector<double> lam(fixed);
      lam[0] = x;
      lam[1] = y;
      return discriminant(lam, k);
    };
    const auto segs = marching_squares(f, ax, ay, 240, 180);
    out << "<path class=\"discriminant\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" d=\"";
    for (const auto& s : segs) {
      out << "M" << fmt(ax.map(s[0])) << " " << fmt(ay.map(s[1])) << "L" << fmt(ax.map(s[2])) << " " << fmt(ay.map(s[3]));
    }
    out << "\"/>\n";
  }

  // Declared boundary curves.
  for (const auto& c : curves) {
    out << "<polyline class=\"boundary\" fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1\" stroke-dasharray=\"4 3\" points=\"";
    for (std::size_t i = 0; i < c.xi.size(); ++i) {
      const double py = two_d ? ay.map(c.xi[i][1]) : ay.map(0.0);
      out << (i ? " " : "") << fmt(ax.map(c.xi[i][0])) << "," << fmt(py);
    }
    out << "\"><title>" << c.label << "</title></polyline>\n";
  }

  for (const auto& c : sum.contacts) {
    const double py = two_d ? ay.map(c.xi[1]) : ay.map(0.0);
    out << "<circle class=\"contact\" cx=\"" << fmt(ax.map(c.xi[0])) << "\" cy=\"" << fmt(py)
        << "\" r=\"6\" fill=\"none\" stroke=\"#e67e22\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
}

nlohmann::json summary_to_json(const RegionSummary& sum) {
  nlohmann::json j;
  j["grid"] = sum.grid;
  j["count"] = sum.count;
  j["ranges"] = nlohmann::json::array();
  for (std::size_t i = 0; i < sum.ranges.size(); ++i) {
    j["ranges"].push_back({{"min", sum.ranges[i].first}, {"max", sum.ranges[i].second}, {"constant", static_cast<bool>(sum.constant[i])}});
  }
  j["min_disc"] = sum.min_disc;
  j["max_abs_disc"] = sum.max_abs_disc;
  j["near_disc_count"] = sum.near_disc_count;
  j["rank_histogram"] = sum.rank_histogram;
  j["contacts"] = nlohmann::json::array();
  for (const auto& c : sum.contacts) j["contacts"].push_back({{"xi", c.xi}, {"b", c.b}, {"disc", c.disc}});
  return j;
}

nlohmann::json region_to_json(const Family& family, const Region& region, const std::vector<CurveTrace>& curves,
                              bool include_samples) {
  nlohmann::json j;
  j["schema"] = "1";
  j["model"] = family.name();
  j["k"] = family.k();
  j["n"] = family.n();
  j["variables"] = family.variables();
  j["summary"] = summary_to_json(region.summary);
  j["curves"] = nlohmann::json::array();
  for (const auto& c : curves) j["curves"].push_back({{"label", c.label}, {"t", c.t}, {"xi", c.xi}});
  if (include_samples) {
    j["samples"] = nlohmann::json::array();
    for (const auto& s : region.samples) {
      j["samples"].push_back({{"b", s.b}, {"xi", s.xi}, {"disc", s.disc}, {"jac_rank", s.jac_rank}, {"near_disc", s.near_disc}});
    }
  }
  return j;
}

}  // namespace swallowtail
