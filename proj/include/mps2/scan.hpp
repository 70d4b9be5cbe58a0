#pragma once

// Parameter sweeps of the canonical models: sorted transfer-matrix spectra,
// closed-form spectra for models B and C, level-crossing detection for the
// largest eigenvalue and derivative kinks of the second one.

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mps2/classify.hpp"
#include "mps2/parallel.hpp"

namespace mps2 {

struct ScanAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;  // number of grid points, inclusive of both ends

  double at(int i) const {
    return steps == 1 ? min : min + (max - min) * static_cast<double>(i) / (steps - 1);
  }
};

struct ScanGrid {
  std::vector<ScanAxis> axes;  // 1 or 2
  std::map<std::string, double> fixed;
};

inline void validate(const ScanGrid& grid) {
  if (grid.axes.empty() || grid.axes.size() > 2)
    throw std::invalid_argument("scan grid: one or two axes required");
  for (const ScanAxis& ax : grid.axes) {
    if (ax.steps < 2) throw std::invalid_argument("scan grid: steps must be >= 2");
    if (!(ax.min < ax.max)) throw std::invalid_argument("scan grid: min < max required");
  }
}

// Builds a model pair from named parameters (g, theta, c, u, q, epsilon).
inline MatrixPair model_from_params(ModelTag tag, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& name, double fallback) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  };
  int eps = static_cast<int>(get("epsilon", 1.0));
  if (eps != 1 && eps != -1) throw std::invalid_argument("epsilon must be +-1");
  switch (tag) {
    case ModelTag::A: return build_model_a(get("g", 0.0), get("theta", 0.0), eps);
    case ModelTag::B: return build_model_b(get("g", 0.0), get("c", 0.0), eps);
    case ModelTag::C: return build_model_c(get("g", 0.0), get("u", 0.0), eps);
    default: throw std::invalid_argument("model_from_params: unsupported tag");
  }
}

struct SpectralRecord {
  std::array<double, 2> params{0.0, 0.0};
  std::array<Complex, 4> eigenvalues{};  // sorted by spectral_greater
  double ratio = 0.0;                    // |lambda_1| / |lambda_0|
  double xi = 0.0;                       // +inf when degenerate
  int degeneracy = 1;
};

namespace detail {

inline SpectralRecord spectral_record(const MatrixPair& p) {
  SpectralRecord rec;
  TransferMatrix t = transfer_matrix(p);
  for (int i = 0; i < 4; ++i) rec.eigenvalues[static_cast<std::size_t>(i)] = t.spectrum.eigenvalues(i);
  rec.degeneracy = t.degeneracy_of_max;
  double a0 = std::abs(rec.eigenvalues[0]), a1 = std::abs(rec.eigenvalues[1]);
  rec.ratio = a0 > 0.0 ? a1 / a0 : 0.0;
  if (rec.degeneracy > 1)
    rec.xi = kInf;
  else if (a1 <= kNullStateFloor)
    rec.xi = 0.0;
  else if (a0 - a1 <= kDegeneracyTol * a0)
    rec.xi = kInf;
  else
    rec.xi = 1.0 / std::log(a0 / a1);
  return rec;
}

}  // namespace detail

// Grid evaluation, row-major over (axis0, axis1); concurrent and
// deterministic by grid order.
inline std::vector<SpectralRecord> sweep(ModelTag tag, const ScanGrid& grid) {
  validate(grid);
  const bool two_d = grid.axes.size() == 2;
  const int n0 = grid.axes[0].steps;
  const int n1 = two_d ? grid.axes[1].steps : 1;
  std::vector<SpectralRecord> out(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1));
  parallel_for(out.size(), [&](std::size_t idx) {
    int i = static_cast<int>(idx) / n1;
    int j = static_cast<int>(idx) % n1;
    std::map<std::string, double> params = grid.fixed;
    params[grid.axes[0].name] = grid.axes[0].at(i);
    if (two_d) params[grid.axes[1].name] = grid.axes[1].at(j);
    SpectralRecord rec = detail::spectral_record(model_from_params(tag, params));
    rec.params[0] = grid.axes[0].at(i);
    rec.params[1] = two_d ? grid.axes[1].at(j) : 0.0;
    out[idx] = rec;
  });
  return out;
}

// Closed-form spectra (epsilon = +1 parametrization).
inline std::array<Complex, 4> analytic_spectrum_b(double g) {
  double a = 2.0 * (1.0 + g) * (1.0 + g);
  double b = 2.0 * (1.0 - g) * (1.0 - g);
  double c = 2.0 * (1.0 - g * g);
  std::array<Complex, 4> out{Complex(a), Complex(b), Complex(c), Complex(c)};
  std::sort(out.begin(), out.end(), spectral_greater);
  return out;
}

inline std::array<Complex, 4> analytic_spectrum_c(double u, double g) {
  Complex disc = std::sqrt(Complex(16.0 * u * g + u * u * g * g, 0.0));
  std::array<Complex, 4> out{Complex(2.0), Complex(2.0 - u * g),
                             Complex(2.0 + 0.5 * u * g) + 0.5 * disc,
                             Complex(2.0 + 0.5 * u * g) - 0.5 * disc};
  std::sort(out.begin(), out.end(), spectral_greater);
  return out;
}

inline std::array<Complex, 4> analytic_spectrum(ModelTag tag,
                                                const std::map<std::string, double>& params) {
  auto get = [&](const std::string& name) {
    auto it = params.find(name);
    return it == params.end() ? 0.0 : it->second;
  };
  auto eps_it = params.find("epsilon");
  if (eps_it != params.end() && eps_it->second != 1.0)
    throw std::invalid_argument("analytic_spectrum: closed forms cover epsilon = +1 only");
  switch (tag) {
    case ModelTag::B: return analytic_spectrum_b(get("g"));
    case ModelTag::C: return analytic_spectrum_c(get("u"), get("g"));
    default:
      throw std::invalid_argument("analytic_spectrum: no closed form for this model");
  }
}

// ---------------------------------------------------------------------------
// Crossing detection
// ---------------------------------------------------------------------------

enum class CrossingType { max_crossing, second_kink };

struct Crossing {
  CrossingType type = CrossingType::max_crossing;
  double location = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

struct CrossingReport {
  std::vector<Crossing> crossings;
};

// Evaluates the four transfer eigenvalues at a parameter value (sorted).
using SpectrumFn = std::function<std::array<Complex, 4>(double)>;

inline SpectrumFn model_spectrum_fn(ModelTag tag, const std::string& axis,
                                    const std::map<std::string, double>& fixed) {
  return [tag, axis, fixed](double t) {
    std::map<std::string, double> params = fixed;
    params[axis] = t;
    TransferMatrix tm = transfer_matrix(model_from_params(tag, params));
    std::array<Complex, 4> out;
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = tm.spectrum.eigenvalues(i);
    return out;
  };
}

namespace detail {

inline std::array<double, 4> sorted_moduli(const std::array<Complex, 4>& eigs) {
  std::array<double, 4> mods;
  for (int j = 0; j < 4; ++j) mods[static_cast<std::size_t>(j)] = std::abs(eigs[static_cast<std::size_t>(j)]);
  std::sort(mods.begin(), mods.end(), std::greater<double>());
  return mods;
}

}  // namespace detail

// Max-crossings are located where the gap |lambda_0| - |lambda_1| between
// the two largest sorted moduli actually reaches zero: candidate local
// minima of the gap are refined by ternary search and accepted when the
// minimum is zero at working precision. This separates true crossings from
// sorting swaps of sub-leading branches (which leave the gap untouched),
// from tangential approaches (gap bounded away from zero), and from the
// eigenvalue noise of defective transfer matrices. Second-kinks flag grid
// points where the discrete second difference of |lambda_1| exceeds
// `kink_factor` times its median, or where |lambda_1| touches zero (the
// modulus of an analytic branch kinks at its zeros).
inline CrossingReport detect_crossings(const SpectrumFn& fn, const ScanAxis& axis,
                                       double refine_width = 1e-6, double kink_factor = 10.0) {
  if (axis.steps < 3) throw std::invalid_argument("detect_crossings: need at least 3 points");
  const int np = axis.steps;

  std::vector<std::array<double, 4>> mods(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) mods[static_cast<std::size_t>(i)] = detail::sorted_moduli(fn(axis.at(i)));

  double scale = 1e-300;
  for (int i = 0; i < np; ++i) scale = std::max(scale, mods[static_cast<std::size_t>(i)][0]);
  auto gap_at = [&](double t) {
    std::array<double, 4> m = detail::sorted_moduli(fn(t));
    return m[0] - m[1];
  };
  std::vector<double> gap(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i)
    gap[static_cast<std::size_t>(i)] = mods[static_cast<std::size_t>(i)][0] - mods[static_cast<std::size_t>(i)][1];

  const double zero_tol = 1e-10 * scale;
  CrossingReport rep;

  for (int i = 1; i + 1 < np; ++i) {
    if (!(gap[static_cast<std::size_t>(i)] <= gap[static_cast<std::size_t>(i - 1)] &&
          gap[static_cast<std::size_t>(i)] <= gap[static_cast<std::size_t>(i + 1)]))
      continue;
    if (gap[static_cast<std::size_t>(i)] > 0.25 * scale) continue;  // nowhere near a touch
    // a crossing needs flanks: an identically degenerate stretch is not one
    if (std::max(gap[static_cast<std::size_t>(i - 1)], gap[static_cast<std::size_t>(i + 1)]) <=
        1e-7 * scale)
      continue;
    // ternary refinement of the local minimum
    double lo = axis.at(i - 1), hi = axis.at(i + 1);
    for (int it = 0; it < 200 && hi - lo > refine_width; ++it) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (gap_at(m1) <= gap_at(m2))
        hi = m2;
      else
        lo = m1;
    }
    double loc = 0.5 * (lo + hi);
    // certify the touch by deep refinement: at a genuine crossing the gap
    // collapses (even with sqrt branch-point behavior), while a tangential
    // approach stays comparable to its flanks
    double dlo = lo, dhi = hi;
    double deep = std::min(gap_at(loc), gap[static_cast<std::size_t>(i)]);
    for (int it = 0; it < 300 && dhi - dlo > 1e-12 * (1.0 + std::abs(loc)); ++it) {
      double m1 = dlo + (dhi - dlo) / 3.0, m2 = dhi - (dhi - dlo) / 3.0;
      double g1 = gap_at(m1), g2 = gap_at(m2);
      deep = std::min({deep, g1, g2});
      if (g1 <= g2)
        dhi = m2;
      else
        dlo = m1;
    }
    double flank =
        std::min(gap[static_cast<std::size_t>(i - 1)], gap[static_cast<std::size_t>(i + 1)]);
    if (deep > std::max(zero_tol, 1e-2 * flank)) continue;
    // dedupe plateaus of exact ties
    bool dup = false;
    for (const Crossing& c : rep.crossings)
      if (c.type == CrossingType::max_crossing &&
          std::abs(c.location - loc) <= 2.0 * (axis.at(1) - axis.at(0)))
        dup = true;
    if (dup) continue;
    Crossing c;
    c.type = CrossingType::max_crossing;
    c.location = loc;
    c.bracket_lo = lo;
    c.bracket_hi = hi;
    rep.crossings.push_back(c);
  }

  // --- second-kinks ---
  std::vector<double> second(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) second[static_cast<std::size_t>(i)] = mods[static_cast<std::size_t>(i)][1];
  std::vector<double> d2;
  for (int i = 1; i + 1 < np; ++i)
    d2.push_back(std::abs(second[static_cast<std::size_t>(i - 1)] - 2.0 * second[static_cast<std::size_t>(i)] +
                          second[static_cast<std::size_t>(i + 1)]));
  std::vector<double> sorted_d2 = d2;
  std::sort(sorted_d2.begin(), sorted_d2.end());
  double med = sorted_d2.empty() ? 0.0 : sorted_d2[sorted_d2.size() / 2];
  double smax = *std::max_element(second.begin(), second.end());
  for (int i = 1; i + 1 < np; ++i) {
    if (d2[static_cast<std::size_t>(i - 1)] >
        kink_factor * std::max(med, 1e-14 * std::max(smax, 1e-300))) {
      Crossing c;
      c.type = CrossingType::second_kink;
      c.location = axis.at(i);
      c.bracket_lo = axis.at(i - 1);
      c.bracket_hi = axis.at(i + 1);
      rep.crossings.push_back(c);
    }
  }
  // zero-touch kinks: |lambda_1| vanishing kinks the modulus of an analytic
  // branch even when the quadratic fit cannot see it (e.g. at sweep ends)
  for (int i = 0; i < np; ++i) {
    if (second[static_cast<std::size_t>(i)] <= 1e-9 * std::max(smax, 1e-300)) {
      bool dup = false;
      for (const Crossing& c : rep.crossings)
        if (c.type == CrossingType::second_kink &&
            std::abs(c.location - axis.at(i)) <= 1.5 * (axis.at(1) - axis.at(0)))
          dup = true;
      if (!dup) {
        Crossing c;
        c.type = CrossingType::second_kink;
        c.location = axis.at(i);
        c.bracket_lo = axis.at(std::max(0, i - 1));
        c.bracket_hi = axis.at(std::min(np - 1, i + 1));
        rep.crossings.push_back(c);
      }
    }
  }
  return rep;
}

inline CrossingReport detect_crossings(ModelTag tag, const ScanAxis& axis,
                                       const std::map<std::string, double>& fixed,
                                       double refine_width = 1e-6, double kink_factor = 10.0) {
  return detect_crossings(model_spectrum_fn(tag, axis.name, fixed), axis, refine_width, kink_factor);
}

}  // namespace mps2
