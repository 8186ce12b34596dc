#pragma once

#include "rcx/ratfun.hpp"

namespace rcx::laurent {

// Raised when a truncated computation cannot certify a valuation; callers
// re-run the whole query at higher precision.
struct need_precision : std::runtime_error {
  need_precision() : std::runtime_error("series precision exhausted") {}
};

// Truncated Laurent series over F_q.  Coefficients cover the exponent window
// [lead, prec); everything below prec is exact, everything at or above prec
// is unknown.  Normal form: either c is empty (zero up to precision) or
// c.front() != 0, so `lead` is a certified valuation.
class LaurentSeries {
 public:
  const FieldSpec* field = nullptr;
  long long lead = 0;
  long long prec = 0;
  std::vector<code> c;

  LaurentSeries() = default;
  LaurentSeries(const FieldSpec& f, long long lead_, long long prec_,
                std::vector<code> coef)
      : field(&f), lead(lead_), prec(prec_), c(std::move(coef)) {
    normalize();
  }

  static LaurentSeries zero_to(const FieldSpec& f, long long prec) {
    return LaurentSeries(f, prec, prec, {});
  }

  static LaurentSeries constant(const FieldSpec& f, code v, long long prec) {
    std::vector<code> cc;
    if (v && 0 < prec) cc.assign(1, v);
    return LaurentSeries(f, 0, prec, std::move(cc));
  }

  bool zero_to_precision() const { return c.empty(); }

  // Certified valuation; throws need_precision when zero-to-precision.
  long long valuation() const {
    if (c.empty()) throw need_precision();
    return lead;
  }

  void normalize() {
    size_t i = 0;
    while (i < c.size() && c[i] == 0) ++i;
    if (i) {
      c.erase(c.begin(), c.begin() + i);
      lead += (long long)i;
    }
    if ((long long)c.size() > prec - lead) c.resize(prec - lead);
    if (c.empty()) lead = prec;
  }

  code coeff(long long e) const {
    if (e < lead || e >= lead + (long long)c.size()) return 0;
    return c[e - lead];
  }

  LaurentSeries add(const LaurentSeries& o) const {
    long long np = std::min(prec, o.prec);
    long long nl = std::min(lead, o.lead);
    if (nl >= np) return zero_to(*field, np);
    std::vector<code> nc(np - nl, 0);
    for (long long e = nl; e < np; ++e)
      nc[e - nl] = field->add(coeff(e), o.coeff(e));
    return LaurentSeries(*field, nl, np, std::move(nc));
  }

  LaurentSeries negated() const {
    LaurentSeries r = *this;
    for (auto& x : r.c) x = field->neg(x);
    return r;
  }

  LaurentSeries sub(const LaurentSeries& o) const { return add(o.negated()); }

  LaurentSeries mul(const LaurentSeries& o) const {
    // product known modulo y^min(prec_a + val_b, prec_b + val_a)
    long long np = std::min(prec + o.lead, o.prec + lead);
    if (c.empty() && o.c.empty()) return zero_to(*field, np);
    long long nl = lead + o.lead;
    if (c.empty() || o.c.empty() || nl >= np) return zero_to(*field, np);
    std::vector<code> nc(np - nl, 0);
    for (size_t i = 0; i < c.size(); ++i) {
      if (!c[i]) continue;
      long long ei = lead + (long long)i;
      for (size_t j = 0; j < o.c.size(); ++j) {
        if (!o.c[j]) continue;
        long long e = ei + o.lead + (long long)j;
        if (e >= np) break;
        nc[e - nl] = field->add(nc[e - nl], field->mul(c[i], o.c[j]));
      }
    }
    return LaurentSeries(*field, nl, np, std::move(nc));
  }

  LaurentSeries scaled(code s) const {
    if (!s) return zero_to(*field, prec);
    LaurentSeries r = *this;
    for (auto& x : r.c) x = field->mul(x, s);
    return r;
  }

  // Division by a series with certified valuation (school division).
  LaurentSeries div(const LaurentSeries& o) const {
    if (o.c.empty()) throw need_precision();
    long long np = std::min(prec - o.lead, o.prec - 2 * o.lead + lead);
    long long nl = lead - o.lead;
    if (c.empty()) return zero_to(*field, np);
    if (nl >= np) return zero_to(*field, np);
    std::vector<code> rem(c.begin(), c.end());
    std::vector<code> q(np - nl, 0);
    code ip = field->inv(o.c[0]);
    for (long long t = 0; t < np - nl; ++t) {
      code r0 = (t < (long long)rem.size()) ? rem[t] : 0;
      if (!r0) continue;
      code f = field->mul(r0, ip);
      q[t] = f;
      for (size_t j = 0; j < o.c.size(); ++j) {
        size_t idx = t + j;
        if (idx >= rem.size()) rem.resize(idx + 1, 0);
        rem[idx] = field->sub(rem[idx], field->mul(f, o.c[j]));
      }
    }
    return LaurentSeries(*field, nl, np, std::move(q));
  }
};

// Expansion of a reduced rational function around y = 0 with window size T.
inline LaurentSeries expand(const RatFun& rf, long long T) {
  const FieldSpec& F = rf.field();
  if (rf.is_zero()) return LaurentSeries::zero_to(F, T);
  long long on = rf.num.order_at_zero();
  long long od = rf.den.order_at_zero();
  long long v = on - od;
  // unit parts of numerator and denominator
  std::vector<code> nu(rf.num.c.begin() + on, rf.num.c.end());
  std::vector<code> de(rf.den.c.begin() + od, rf.den.c.end());
  std::vector<code> q(T, 0);
  code ip = F.inv(de[0]);
  std::vector<code> rem = nu;
  for (long long t = 0; t < T; ++t) {
    code r0 = (t < (long long)rem.size()) ? rem[t] : 0;
    if (!r0) continue;
    code f = F.mul(r0, ip);
    q[t] = f;
    for (size_t j = 0; j < de.size(); ++j) {
      size_t idx = t + j;
      if (idx >= rem.size()) rem.resize(idx + 1, 0);
      rem[idx] = F.sub(rem[idx], F.mul(f, de[j]));
    }
  }
  return LaurentSeries(F, v, v + T, std::move(q));
}

// Matrix of truncated series.
struct SeriesMatrix {
  int d = 0;
  std::vector<LaurentSeries> e;

  SeriesMatrix() = default;
  SeriesMatrix(const FieldSpec& f, int dim, long long prec)
      : d(dim), e(dim * dim, LaurentSeries::zero_to(f, prec)) {}

  LaurentSeries& at(int i, int j) { return e[i * d + j]; }
  const LaurentSeries& at(int i, int j) const { return e[i * d + j]; }

  SeriesMatrix mul(const SeriesMatrix& o) const {
    SeriesMatrix r;
    r.d = d;
    r.e.reserve(d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        LaurentSeries acc = at(i, 0).mul(o.at(0, j));
        for (int k = 1; k < d; ++k) acc = acc.add(at(i, k).mul(o.at(k, j)));
        r.e.push_back(std::move(acc));
      }
    return r;
  }
};

// Valuation-pivot elimination on a truncated matrix.  The pivot choice is
// certified: an entry that is zero to its precision can only be skipped when
// some other entry has a certified valuation, and a certified minimum always
// beats unknowns whose windows start above it.  Throws need_precision when
// the data cannot support a sound choice.
inline RelPosition invariant_valuations(const SeriesMatrix& m0) {
  SeriesMatrix m = m0;
  int d = m.d;
  std::vector<long long> piv;
  std::vector<bool> rdone(d, false), cdone(d, false);
  for (int step = 0; step < d; ++step) {
    long long best = kInfValuation, unknown_floor = kInfValuation;
    int bi = -1, bj = -1;
    for (int i = 0; i < d; ++i) {
      if (rdone[i]) continue;
      for (int j = 0; j < d; ++j) {
        if (cdone[j]) continue;
        const LaurentSeries& x = m.at(i, j);
        if (x.zero_to_precision()) {
          unknown_floor = std::min(unknown_floor, x.prec);
        } else if (x.lead < best) {
          best = x.lead;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) throw need_precision();
    if (best >= unknown_floor) throw need_precision();
    piv.push_back(best);
    const LaurentSeries pivval = m.at(bi, bj);
    for (int i = 0; i < d; ++i) {
      if (rdone[i] || i == bi || m.at(i, bj).zero_to_precision()) continue;
      LaurentSeries f = m.at(i, bj).div(pivval);
      for (int j = 0; j < d; ++j) {
        if (cdone[j]) continue;
        m.at(i, j) = m.at(i, j).sub(f.mul(m.at(bi, j)));
      }
    }
    rdone[bi] = true;
    cdone[bj] = true;
  }
  return RelPosition::from_raw(std::move(piv));
}

}  // namespace rcx::laurent
