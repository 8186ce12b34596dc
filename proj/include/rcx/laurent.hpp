#pragma once

#include <sstream>

#include "rcx/ratfun.hpp"

namespace rcx::laurent {

// Cartan invariant of an ordered vertex pair: valuation vector sorted
// nondecreasing, stored both raw and shifted so the first entry is 0.
struct RelPosition {
  std::vector<long long> raw;
  std::vector<long long> normalized;

  static RelPosition from_raw(std::vector<long long> v) {
    std::sort(v.begin(), v.end());
    RelPosition r;
    r.raw = v;
    r.normalized = std::move(v);
    long long a1 = r.normalized.front();
    for (auto& x : r.normalized) x -= a1;
    return r;
  }

  bool operator==(const RelPosition& o) const { return normalized == o.normalized; }

  long long distance() const { return normalized.back(); }

  // Position of the first vertex relative to the second:
  // (0, a_d - a_{d-1}, ..., a_d - a_1).
  RelPosition reversed() const {
    std::vector<long long> v;
    long long ad = normalized.back();
    for (auto it = normalized.rbegin(); it != normalized.rend(); ++it)
      v.push_back(ad - *it);
    return from_raw(std::move(v));
  }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < normalized.size(); ++i) {
      if (i) os << ',';
      os << normalized[i];
    }
    os << ')';
    return os.str();
  }
};

struct Relation {
  bool neighbor;
  bool same_type;
  bool shares_wall;
  long long distance;
  int type_offset;  // sum of entries mod d
};

inline Relation classify_relation(const RelPosition& a, int d) {
  if ((int)a.normalized.size() != d)
    throw parameter_error("classify_relation: dimension mismatch");
  Relation r{};
  long long sum = 0;
  for (long long x : a.normalized) sum += x;
  r.distance = a.distance();
  r.neighbor = (r.distance == 1);
  r.same_type = (sum % d == 0);
  r.type_offset = int(((sum % d) + d) % d);
  // coincide, or the class (-1,0,...,0,1) = normalized (0,1,...,1,2)
  bool apart_one_wall = (r.distance == 2) && a.normalized[0] == 0 &&
                        a.normalized[d - 1] == 2;
  if (apart_one_wall)
    for (int i = 1; i < d - 1; ++i)
      if (a.normalized[i] != 1) apart_one_wall = false;
  r.shares_wall = (r.distance == 0) || apart_one_wall;
  return r;
}

// d x d matrix of rational functions; represents an element of GL_d(F_q(y))
// or its class in PGL when used projectively.
class ValMatrix {
 public:
  int d = 0;
  std::vector<RatFun> e;  // row-major

  ValMatrix() = default;
  ValMatrix(const FieldSpec& f, int dim) : d(dim), e(dim * dim, RatFun(f)) {}

  static ValMatrix identity(const FieldSpec& f, int dim) {
    ValMatrix m(f, dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = RatFun::constant(f, 1);
    return m;
  }

  RatFun& at(int i, int j) { return e[i * d + j]; }
  const RatFun& at(int i, int j) const { return e[i * d + j]; }
  const FieldSpec& field() const { return e[0].field(); }

  ValMatrix operator*(const ValMatrix& o) const {
    ValMatrix r(field(), d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        if (at(i, k).is_zero()) continue;
        for (int j = 0; j < d; ++j) {
          if (o.at(k, j).is_zero()) continue;
          r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        }
      }
    return r;
  }

  ValMatrix scaled(const RatFun& s) const {
    ValMatrix r = *this;
    for (auto& x : r.e) x = x * s;
    return r;
  }

  bool operator==(const ValMatrix& o) const { return d == o.d && e == o.e; }

  RatFun det() const {
    ValMatrix m = *this;
    RatFun r = RatFun::constant(field(), 1);
    for (int col = 0; col < d; ++col) {
      int piv = -1;
      for (int i = col; i < d; ++i)
        if (!m.at(i, col).is_zero()) { piv = i; break; }
      if (piv < 0) return RatFun(field());
      if (piv != col) {
        for (int j = 0; j < d; ++j) std::swap(m.at(piv, j), m.at(col, j));
        r = r.neg();
      }
      r = r * m.at(col, col);
      RatFun ip = m.at(col, col).inv();
      for (int i = col + 1; i < d; ++i) {
        if (m.at(i, col).is_zero()) continue;
        RatFun f = m.at(i, col) * ip;
        for (int j = col; j < d; ++j)
          m.at(i, j) = m.at(i, j) - f * m.at(col, j);
      }
    }
    return r;
  }

  ValMatrix inverse() const {
    ValMatrix m = *this;
    ValMatrix inv = identity(field(), d);
    for (int col = 0; col < d; ++col) {
      int piv = -1;
      for (int i = col; i < d; ++i)
        if (!m.at(i, col).is_zero()) { piv = i; break; }
      if (piv < 0) throw math_error("ValMatrix::inverse: singular matrix");
      if (piv != col)
        for (int j = 0; j < d; ++j) {
          std::swap(m.at(piv, j), m.at(col, j));
          std::swap(inv.at(piv, j), inv.at(col, j));
        }
      RatFun ip = m.at(col, col).inv();
      for (int j = 0; j < d; ++j) {
        m.at(col, j) = m.at(col, j) * ip;
        inv.at(col, j) = inv.at(col, j) * ip;
      }
      for (int i = 0; i < d; ++i) {
        if (i == col || m.at(i, col).is_zero()) continue;
        RatFun f = m.at(i, col);
        for (int j = 0; j < d; ++j) {
          m.at(i, j) = m.at(i, j) - f * m.at(col, j);
          inv.at(i, j) = inv.at(i, j) - f * inv.at(col, j);
        }
      }
    }
    return inv;
  }

  std::string str() const {
    std::ostringstream os;
    for (int i = 0; i < d * d; ++i) {
      if (i) os << ';';
      os << e[i].str();
    }
    return os.str();
  }
};

// Elementary divisor valuations over the valuation ring at y = 0, by
// valuation-pivot elimination: pick the entry of minimal valuation (ties
// row-major first), eliminate its row and column, recurse.  Multipliers all
// have nonnegative valuation, so the pivot valuations are the invariant
// factors, and they emerge sorted.
inline RelPosition invariant_valuations(const ValMatrix& m0) {
  ValMatrix m = m0;
  int d = m.d;
  std::vector<long long> piv;
  std::vector<bool> rdone(d, false), cdone(d, false);
  for (int step = 0; step < d; ++step) {
    long long best = kInfValuation;
    int bi = -1, bj = -1;
    for (int i = 0; i < d; ++i) {
      if (rdone[i]) continue;
      for (int j = 0; j < d; ++j) {
        if (cdone[j]) continue;
        long long v = m.at(i, j).valuation();
        if (v < best) { best = v; bi = i; bj = j; }
      }
    }
    if (bi < 0) throw math_error("invariant_valuations: singular matrix");
    piv.push_back(best);
    const RatFun pivval = m.at(bi, bj);
    for (int i = 0; i < d; ++i) {
      if (rdone[i] || i == bi || m.at(i, bj).is_zero()) continue;
      RatFun f = m.at(i, bj) / pivval;
      for (int j = 0; j < d; ++j) {
        if (cdone[j]) continue;
        m.at(i, j) = m.at(i, j) - f * m.at(bi, j);
      }
    }
    rdone[bi] = true;
    cdone[bj] = true;
  }
  return RelPosition::from_raw(std::move(piv));
}

inline RelPosition relative_position(const ValMatrix& g, const ValMatrix& h) {
  return invariant_valuations(g.inverse() * h);
}

// Canonical representative of the PGL class: divide by the first (row-major)
// entry among the entries of minimal valuation.
inline ValMatrix projective_canonical_form(const ValMatrix& m) {
  long long best = kInfValuation;
  int bi = -1;
  for (int i = 0; i < m.d * m.d; ++i) {
    long long v = m.e[i].valuation();
    if (v < best) { best = v; bi = i; }
  }
  if (bi < 0) throw math_error("projective_canonical_form: zero matrix");
  if (m.det().is_zero())
    throw math_error("projective_canonical_form: singular matrix");
  return m.scaled(m.e[bi].inv());
}

}  // namespace rcx::laurent
