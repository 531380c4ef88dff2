#pragma once

// The applicability table over d in [1,5], k in [1,3] and all p >= 2.
//
// For each (d, k) every condition in theorem_applicability changes value only
// at a finite set of breakpoints, so [2, inf) is split into point rows
// (p_lo == p_hi) and open interval rows (p_lo, p_hi) on which the verdicts are
// constant. Each row is evaluated by calling theorem_applicability directly.

#include "nlkg/exponents/exponents.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace nlkg {

struct TableRow {
  int d = 0;
  int k = 0;
  Rational p_lo;
  ExtRational p_hi;  // == p_lo for point rows; open interval otherwise
  bool thm1 = false;
  bool thm2 = false;
  Route route = Route::NotApplicable;

  bool is_point() const { return p_hi.is_finite() && p_hi.value() == p_lo; }
};

inline std::vector<Rational> table_breakpoints(int d, int k) {
  std::vector<Rational> b = {Rational(2), std::max(Rational(2), Rational(1) + Rational(4, d)), Rational(4, d),
                             Rational(1) + Rational(2, d)};
  if (d + k >= 3) {
    const auto ce = critical_exponents(d, k);
    b.push_back(ce.pc);
    b.push_back(ce.p_sob);
  }
  if (d >= 3) b.push_back(euclidean_embedding_cap(d));
  std::erase_if(b, [](const Rational& r) { return r < 2; });
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

inline TableRow evaluate_row(int d, int k, const Rational& lo, const ExtRational& hi, const Rational& sample) {
  const auto v = theorem_applicability(d, k, sample);
  TableRow row{d, k, lo, hi, v.thm1.applicable, v.thm2.applicable, Route::NotApplicable};
  if (v.thm1.applicable)
    row.route = v.thm1.route;
  else if (v.thm2.applicable)
    row.route = v.thm2.route;
  return row;
}

inline std::vector<TableRow> restriction_table(int d_max = 5, int k_max = 3) {
  std::vector<TableRow> rows;
  for (int d = 1; d <= d_max; ++d) {
    for (int k = 1; k <= k_max; ++k) {
      const auto b = table_breakpoints(d, k);
      for (std::size_t i = 0; i < b.size(); ++i) {
        rows.push_back(evaluate_row(d, k, b[i], b[i], b[i]));
        if (i + 1 < b.size())
          rows.push_back(evaluate_row(d, k, b[i], b[i + 1], (b[i] + b[i + 1]) / 2));
        else
          rows.push_back(evaluate_row(d, k, b[i], ExtRational::infinity(), b[i] + 1));
      }
    }
  }
  return rows;
}

inline std::string restriction_table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "d,k,p_lo,p_hi,thm1,thm2,route\n";
  for (const auto& r : rows) {
    os << r.d << ',' << r.k << ',' << to_string(r.p_lo) << ',' << to_string(r.p_hi) << ','
       << (r.thm1 ? "yes" : "no") << ',' << (r.thm2 ? "yes" : "no") << ',' << to_string(r.route) << '\n';
  }
  return os.str();
}

}  // namespace nlkg
