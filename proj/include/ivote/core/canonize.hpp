#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <unordered_map>
#include <vector>

#include "ivote/core/box.hpp"
#include "ivote/core/counters.hpp"
#include "ivote/core/surface.hpp"
#include "ivote/core/tolerance.hpp"

namespace ivote {

// A surface in flight through the recursion: current (possibly rounded)
// parameters plus a sound per-dependent-coordinate bound on the accumulated
// deviation from the original surface over every box seen so far. The
// original input ids ride along and pool up when surfaces merge.
struct CanonSurface {
  ParametricSurface s;
  std::array<double, kMaxDependent> drift{};
  std::size_t weight = 1;  // input surfaces pooled into this representative
};

struct CanonizeStats {
  std::size_t fallback = 0;  // surfaces whose essential rounding failed verification
  std::size_t merged = 0;    // surfaces absorbed into an earlier representative
};

namespace detail {

// Canonical identity of a rounded surface: essential lattice indices (or the
// raw bit patterns when the surface fell back to free-only rounding) plus
// free-parameter lattice indices anchored at the box corner.
struct CanonKey {
  std::array<std::int64_t, kMaxEssential> e{};
  std::array<std::int64_t, kMaxDependent> g{};
  bool raw = false;
  bool operator==(const CanonKey&) const = default;
};

struct CanonKeyHash {
  std::size_t operator()(const CanonKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    for (auto v : k.e) mix(static_cast<std::uint64_t>(v));
    for (auto v : k.g) mix(static_cast<std::uint64_t>(v));
    mix(k.raw ? 1u : 0u);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

// Essential rounding step for parameter i on a box of diameter delta: the
// budget eps'_min is split across the l essentials plus one free share, and
// scaled by the model's reciprocal sensitivity.
template <SurfaceModel M>
double essential_step(const M& m, int i, double delta, double eps_prime_min) {
  return m.essential_scale(i) * eps_prime_min /
         ((m.essential_count() + 1) * delta);
}

inline double free_step(double eps_prime_j, int essential_count) {
  return eps_prime_j / (essential_count + 1);
}

// Upper bound on how many distinct canonical surfaces a box can host: the
// product of essential lattice sizes (over the data's parameter ranges) and
// free lattice sizes (over the box spans widened by the admission slack).
// Saturates at 1e18. n-independent by construction.
template <SurfaceModel M>
double canonical_capacity(const M& m, const Box& box, const double* eps_prime,
                          const double* slack) {
  const int k = m.surface_dim(), nd = m.ambient_dim() - k, l = m.essential_count();
  const double delta = box.diameter();
  double epmin = eps_prime[0];
  for (int j = 1; j < nd; ++j) epmin = std::fmin(epmin, eps_prime[j]);
  double cap = 1.0;
  for (int i = 0; i < l; ++i) {
    const double step = essential_step(m, i, delta, epmin);
    cap *= m.essential_range(i).width() / step + 1.0;
    if (cap > 1e18) return 1e18;
  }
  for (int j = 0; j < nd; ++j) {
    const double fs = free_step(eps_prime[j], l);
    cap *= (box.side(k + j) + 2.0 * slack[j]) / fs + 1.0;
    if (cap > 1e18) return 1e18;
  }
  return cap;
}

// Round every surface onto the box's canonical lattice and merge duplicates.
//
// Essentials are rounded to the shared lattice; the free parameters are then
// re-fitted so the rounded surface agrees with the original at the box center
// and rounded on a corner-anchored lattice. Each rounding is verified: the
// per-coordinate deviation bound  |refit residual| + sup-deviation of the
// essential change over the box  must stay within eps'. Surfaces failing
// verification (or not evaluable at the center) keep their essentials and
// only re-anchor the free parameters, which is always within eps' since free
// parameters act purely additively. Drift accumulates the verified bounds, so
// downstream admission tests stay sound. Output order is first-appearance,
// hence deterministic.
template <SurfaceModel M>
std::vector<CanonSurface> canonize_surfaces(const M& m, std::vector<CanonSurface> in,
                                            const Box& box, const double* eps_prime,
                                            OperationCounts& ops,
                                            CanonizeStats* stats = nullptr) {
  const int k = m.surface_dim(), nd = m.ambient_dim() - k, l = m.essential_count();
  const double delta = box.diameter();
  double epmin = eps_prime[0];
  for (int j = 1; j < nd; ++j) epmin = std::fmin(epmin, eps_prime[j]);
  double step[kMaxEssential], fstep[kMaxDependent];
  for (int i = 0; i < l; ++i) step[i] = essential_step(m, i, delta, epmin);
  for (int j = 0; j < nd; ++j) fstep[j] = free_step(eps_prime[j], l);

  double c[kMaxDim];
  for (int j = 0; j < k; ++j) c[j] = box.center(j);

  std::vector<CanonSurface> out;
  out.reserve(in.size());
  std::unordered_map<detail::CanonKey, std::size_t, detail::CanonKeyHash> seen;
  seen.reserve(2 * in.size());

  double tn[kMaxEssential];
  double dep_old[kMaxDependent], dep_new[kMaxDependent], bnd[kMaxDependent];
  double g[kMaxDependent], dev[kMaxDependent];
  for (CanonSurface& cs : in) {
    detail::CanonKey key;
    for (int i = 0; i < l; ++i) {
      key.e[i] = round_index(cs.s.t[i], step[i]);
      tn[i] = static_cast<double>(key.e[i]) * step[i];
    }
    ops.surface_evaluations += 2;
    bool ok = m.eval(cs.s.t.data(), c, dep_old) && m.eval(tn, c, dep_new);
    if (ok) {
      m.deviation_bound(cs.s.t.data(), tn, box, bnd);
      for (int j = 0; j < nd; ++j) {
        const double comp = dep_old[j] + cs.s.f[j] - dep_new[j];
        key.g[j] = round_index(comp - box.lo[k + j], fstep[j]);
        g[j] = box.lo[k + j] + static_cast<double>(key.g[j]) * fstep[j];
        dev[j] = std::fabs(comp - g[j]) + bnd[j];
        if (!(dev[j] <= eps_prime[j])) ok = false;
      }
    }
    if (!ok) {
      key.raw = true;
      for (int i = 0; i < l; ++i) {
        std::int64_t bits;
        std::memcpy(&bits, &cs.s.t[i], sizeof bits);
        key.e[i] = bits;
      }
      for (int j = 0; j < nd; ++j) {
        key.g[j] = round_index(cs.s.f[j] - box.lo[k + j], fstep[j]);
        g[j] = box.lo[k + j] + static_cast<double>(key.g[j]) * fstep[j];
        dev[j] = std::fabs(cs.s.f[j] - g[j]);
      }
      if (stats) ++stats->fallback;
    }
    const auto [it, inserted] = seen.try_emplace(key, out.size());
    if (inserted) {
      CanonSurface rep;
      rep.s.d = cs.s.d;
      rep.s.k = cs.s.k;
      rep.s.model_tag = std::move(cs.s.model_tag);
      rep.s.t.assign(ok ? tn : cs.s.t.data(), (ok ? tn : cs.s.t.data()) + l);
      rep.s.f.assign(g, g + nd);
      rep.s.source_ids = std::move(cs.s.source_ids);
      rep.weight = cs.weight;
      for (int j = 0; j < nd; ++j) rep.drift[j] = cs.drift[j] + dev[j];
      out.push_back(std::move(rep));
    } else {
      CanonSurface& rep = out[it->second];
      rep.s.source_ids.insert(rep.s.source_ids.end(), cs.s.source_ids.begin(),
                              cs.s.source_ids.end());
      rep.weight += cs.weight;
      for (int j = 0; j < nd; ++j)
        rep.drift[j] = std::fmax(rep.drift[j], cs.drift[j] + dev[j]);
      if (stats) ++stats->merged;
    }
  }
  return out;
}

}  // namespace ivote
