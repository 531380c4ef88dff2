#pragma once

// Exponent calculus for the nonlinear Klein-Gordon equation on R^d x T^k.
//
// Everything here is exact rational arithmetic: the applicability table has
// borderline equalities (for instance 2k/(k-2*gamma) == 2p at p == p_c) that
// floating point would misclassify.

#include "nlkg/exponents/rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlkg {

struct CriticalExponents {
  Rational p0;     // max(2, 1 + 4/d)
  Rational pc;     // 1 + 4/(d + k - 2), H^1-critical on the product
  Rational p_sob;  // (d + 2)/(d + k - 2), Sobolev/Morrey switch on T^k
};

inline CriticalExponents critical_exponents(int d, int k) {
  if (d < 1 || k < 1) throw std::invalid_argument("critical_exponents: need d >= 1 and k >= 1");
  if (d + k <= 2) throw std::invalid_argument("critical_exponents: p_c undefined for d + k <= 2");
  const Rational p0 = std::max(Rational(2), Rational(1) + Rational(4, d));
  const Rational pc = Rational(1) + Rational(4, d + k - 2);
  const Rational psob = Rational(d + 2, d + k - 2);
  return {p0, pc, psob};
}

/// Upper bound (d^2 + 2d - 4)/(d^2 - 2d) on p for the Euclidean embedding into L^{2p}, d >= 3.
inline Rational euclidean_embedding_cap(int d) {
  if (d < 3) throw std::invalid_argument("euclidean_embedding_cap: defined for d >= 3 only");
  return Rational(d * d + 2 * d - 4, d * d - 2 * d);
}

// ---------------------------------------------------------------------------
// Admissible pairs

/// Upper end of the admissible r range: 2d/(d-2) for d >= 3, +inf otherwise.
inline ExtRational admissible_r_max(int d) {
  if (d >= 3) return Rational(2 * d, d - 2);
  return ExtRational::infinity();
}

/// Solves 2/q = d(1/2 - 1/r) for r. Throws when the solution leaves [2, r_max].
inline ExtRational admissible_r(int d, const ExtRational& q) {
  if (d < 1) throw std::invalid_argument("admissible_r: d must be positive");
  if (q.is_infinite()) return Rational(2);
  const Rational qv = q.value();
  if (qv < 2) throw std::invalid_argument("admissible_r: q must be >= 2");
  // 1/r = 1/2 - 2/(d q)
  const Rational inv_r = Rational(1, 2) - Rational(2) / (Rational(d) * qv);
  if (inv_r < 0) throw std::invalid_argument("admissible_r: (q, r) outside the admissible range");
  const ExtRational r = inv_r == Rational(0) ? ExtRational::infinity() : ExtRational(Rational(1) / inv_r);
  const ExtRational rmax = admissible_r_max(d);
  const bool ok = (d == 2) ? r < rmax : r <= rmax;
  if (!ok) throw std::invalid_argument("admissible_r: (q, r) outside the admissible range");
  return r;
}

struct Admissibility {
  bool admissible = false;
  bool endpoint = false;  // q == 2, r == 2d/(d-2)
  std::string reason;
};

/// Checks the identity and range constraints. The endpoint q = 2 is only
/// accepted for d >= 4; for d == 3 it is reported with endpoint = true but
/// admissible = false.
inline Admissibility is_admissible(int d, const ExtRational& q, const ExtRational& r) {
  Admissibility out;
  if (d < 1) {
    out.reason = "d must be positive";
    return out;
  }
  if (q < Rational(2) || r < Rational(2)) {
    out.reason = "q and r must be >= 2";
    return out;
  }
  const ExtRational rmax = admissible_r_max(d);
  if (d == 2 ? !(r < rmax) : !(r <= rmax)) {
    out.reason = "r outside [2, r_max]";
    return out;
  }
  const Rational lhs = q.is_infinite() ? Rational(0) : Rational(2) / q.value();
  const Rational inv_r = r.is_infinite() ? Rational(0) : Rational(1) / r.value();
  const Rational rhs = Rational(d) * (Rational(1, 2) - inv_r);
  if (lhs != rhs) {
    out.reason = "2/q != d(1/2 - 1/r)";
    return out;
  }
  if (q.is_finite() && q.value() == Rational(2)) {
    out.endpoint = true;
    if (d < 4) {
      out.reason = "endpoint q = 2 only handled for d >= 4";
      return out;
    }
  }
  out.admissible = true;
  return out;
}

/// s = 1 - (1/2)(d/2 + 1)(1 - 2/r)
inline Rational strichartz_s(int d, const ExtRational& r) {
  if (r < Rational(2)) throw std::invalid_argument("strichartz_s: r must be >= 2");
  const Rational one_minus = r.is_infinite() ? Rational(1) : Rational(1) - Rational(2) / r.value();
  return Rational(1) - Rational(1, 2) * (Rational(d, 2) + 1) * one_minus;
}

/// r* = d r/(d - s r), +inf when d <= s r.
inline ExtRational sobolev_r_star(int d, const Rational& s, const Rational& r) {
  const Rational sr = s * r;
  if (Rational(d) <= sr) return ExtRational::infinity();
  return Rational(d) * r / (Rational(d) - sr);
}

// ---------------------------------------------------------------------------
// The profile for q = p, rho = 2p

struct ExponentProfile {
  int d = 0;
  int k = 0;
  Rational p;
  Rational q;      // = p
  Rational r;      // 2dp/(dp - 4)
  Rational s;      // (dp - d - 2)/(dp)
  Rational gamma;  // (d + 2 + 2p - dp)/(2p)
  Rational rho;    // = 2p
  ExtRational r_star;
};

inline ExponentProfile derived_profile(int d, int k, const Rational& p) {
  if (d < 1 || k < 1) throw std::invalid_argument("derived_profile: need d >= 1 and k >= 1");
  const Rational dp = Rational(d) * p;
  if (dp <= 4) throw std::invalid_argument("derived_profile: r(p) undefined unless d*p > 4");
  ExponentProfile e;
  e.d = d;
  e.k = k;
  e.p = p;
  e.q = p;
  e.r = Rational(2) * dp / (dp - 4);
  e.s = (dp - d - 2) / dp;
  e.gamma = (Rational(d + 2) + 2 * p - dp) / (2 * p);
  e.rho = 2 * p;
  e.r_star = sobolev_r_star(d, e.s, e.r);
  return e;
}

// ---------------------------------------------------------------------------
// Embeddings

/// B^s_{r,2}(R^d) embeds in L^rho iff 2 <= r <= rho <= r*. When d == s r the
/// critical exponent r* is infinite but L^inf itself is excluded.
inline bool embedding_euclidean(int d, const Rational& s, const Rational& r, const ExtRational& rho) {
  if (s <= 0) throw std::invalid_argument("embedding_euclidean: requires s > 0");
  if (r < 2) throw std::invalid_argument("embedding_euclidean: requires r >= 2");
  if (rho < ExtRational(r)) return false;
  const Rational sr = s * r;
  if (Rational(d) == sr) return rho.is_finite();
  if (Rational(d) < sr) return true;
  return rho <= sobolev_r_star(d, s, r);
}

enum class Route { SobolevEmbedding, MorreyFiniteVolume, NotApplicable };

inline const char* to_string(Route r) {
  switch (r) {
    case Route::SobolevEmbedding: return "SobolevEmbedding";
    case Route::MorreyFiniteVolume: return "MorreyFiniteVolume";
    case Route::NotApplicable: return "NotApplicable";
  }
  return "?";
}

/// A p-interval [lo, hi] (hi may be +inf, then open).
struct PRange {
  Rational lo;
  ExtRational hi;
};

struct Verdict {
  bool applicable = false;
  Route route = Route::NotApplicable;
  std::vector<std::string> failed_conditions;
  std::optional<PRange> theorem_range;
  std::optional<PRange> proposition_range;
};

/// H^gamma(T^k) into L^{2p}(T^k): Sobolev when k >= 2 gamma and
/// 2k/(k - 2 gamma) >= 2p, Morrey plus finite volume when k < 2 gamma.
inline Verdict embedding_compact(int k, const Rational& gamma, const Rational& p, bool finite_volume) {
  if (gamma < 0) throw std::invalid_argument("embedding_compact: requires gamma >= 0");
  if (p < 1) throw std::invalid_argument("embedding_compact: requires p >= 1");
  Verdict v;
  const Rational two_gamma = 2 * gamma;
  if (Rational(k) >= two_gamma) {
    const ExtRational target = Rational(k) == two_gamma
                                   ? ExtRational::infinity()
                                   : ExtRational(Rational(2 * k) / (Rational(k) - two_gamma));
    if (target >= ExtRational(2 * p)) {
      v.applicable = true;
      v.route = Route::SobolevEmbedding;
    } else {
      v.failed_conditions.push_back("2k/(k-2gamma)>=2p");
    }
  } else if (finite_volume) {
    v.applicable = true;
    v.route = Route::MorreyFiniteVolume;
  } else {
    v.failed_conditions.push_back("finite_volume");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Theorem applicability

struct TheoremVerdicts {
  Verdict thm1;  // energy-space scattering, k = 1, 2
  Verdict thm2;  // anisotropic scattering with gamma > k/2
};

namespace detail {

inline void finalize(Verdict& v, Route route_if_ok) {
  v.applicable = v.failed_conditions.empty();
  v.route = v.applicable ? route_if_ok : Route::NotApplicable;
}

// Claim a: the Euclidean side, q = p and rho = 2p.
inline void check_euclidean_side(int d, const Rational& p, std::vector<std::string>& failed) {
  if (Rational(d) * p <= 4) {
    failed.push_back("dp>4");
    return;
  }
  const auto e = derived_profile(d, 1, p);
  if (e.s <= 0) {
    failed.push_back("s>0");
    return;
  }
  if (!embedding_euclidean(d, e.s, e.r, e.rho)) failed.push_back("2<=r<=2p<=r*");
}

}  // namespace detail

inline Verdict theorem1_verdict(int d, int k, const Rational& p) {
  Verdict v;
  auto& failed = v.failed_conditions;
  if (d < 1 || d > 5) failed.push_back("1<=d<=5");
  if (k < 1 || k > 2) failed.push_back("k<=2");
  if (d + k < 3 || d + k > 6) failed.push_back("3<=d+k<=6");
  Route route = Route::NotApplicable;
  if (d >= 1 && k >= 1 && d + k >= 3) {
    const auto ce = critical_exponents(d, k);
    v.theorem_range = PRange{ce.p0, ce.pc};
    v.proposition_range = PRange{ce.p0, ce.pc};
    if (p < ce.p0) failed.push_back("p>=p0");
    if (p > ce.pc) failed.push_back("p<=pc");
    const std::size_t before = failed.size();
    detail::check_euclidean_side(d, p, failed);
    if (failed.size() == before) {
      const auto e = derived_profile(d, k, p);
      if (e.gamma < 0) {
        failed.push_back("gamma>=0");
      } else {
        const Verdict compact = embedding_compact(k, e.gamma, p, true);
        for (const auto& c : compact.failed_conditions) failed.push_back(c);
        route = compact.route;
      }
    }
  }
  detail::finalize(v, route);
  return v;
}

inline Verdict theorem2_verdict(int d, int k, const Rational& p, const std::optional<Rational>& gamma_extra) {
  Verdict v;
  auto& failed = v.failed_conditions;
  if (d < 1 || d > 5) failed.push_back("1<=d<=5");
  if (k < 1) failed.push_back("k>=1");
  if (d == 1 && k < 2) failed.push_back("k>=2 if d=1");
  if (d >= 1) {
    const Rational p0 = std::max(Rational(2), Rational(1) + Rational(4, d));
    if (p < p0) failed.push_back("p>=p0");
    if (d <= 2) {
      v.theorem_range = PRange{p0, ExtRational::infinity()};
      // The Strichartz proposition states the lower ends explicitly: p >= 5 (d=1), p >= 3 (d=2).
      v.proposition_range = PRange{d == 1 ? Rational(5) : Rational(3), ExtRational::infinity()};
    } else if (d <= 5) {
      const Rational cap = euclidean_embedding_cap(d);
      v.theorem_range = PRange{p0, cap};
      v.proposition_range = PRange{p0, cap};
      if (p > cap) failed.push_back("p<=(d^2+2d-4)/(d^2-2d)");
    }
    detail::check_euclidean_side(d, p, failed);
  }
  if (gamma_extra && !(*gamma_extra > Rational(k, 2))) failed.push_back("gamma>k/2");
  detail::finalize(v, Route::MorreyFiniteVolume);
  return v;
}

inline TheoremVerdicts theorem_applicability(int d, int k, const Rational& p,
                                             const std::optional<Rational>& gamma_extra = std::nullopt) {
  return {theorem1_verdict(d, k, p), theorem2_verdict(d, k, p, gamma_extra)};
}

}  // namespace nlkg
