#include "l2approx/linalg.hpp"

#include <stdexcept>

namespace l2approx {

RatMatrix rat_matrix(std::size_t rows, std::size_t cols) {
  return RatMatrix(rows, std::vector<Rational>(cols, Rational(0)));
}

namespace {

void check_rect(const RatMatrix& a) {
  for (const auto& row : a) {
    if (row.size() != a[0].size()) throw std::invalid_argument("linalg: ragged matrix");
  }
}

// Row-wise denominator clearing; rank is invariant under row scaling.
std::vector<std::vector<Integer>> to_integer_rows(const RatMatrix& a) {
  std::vector<std::vector<Integer>> out;
  out.reserve(a.size());
  for (const auto& row : a) {
    Integer l = 1;
    for (const Rational& x : row) {
      Integer d = x.get_den();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    std::vector<Integer> irow;
    irow.reserve(row.size());
    for (const Rational& x : row) {
      irow.push_back(Integer(x.get_num()) * (l / Integer(x.get_den())));
    }
    out.push_back(std::move(irow));
  }
  return out;
}

}  // namespace

std::size_t rank(const RatMatrix& a, PivotRule rule) {
  if (a.empty() || a[0].empty()) return 0;
  check_rect(a);
  auto m = to_integer_rows(a);
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      if (pivot == rows) {
        pivot = i;
        if (rule == PivotRule::FirstNonzero) break;
      } else if (rule == PivotRule::LargestNumerator) {
        Integer cur, best;
        mpz_abs(cur.get_mpz_t(), m[i][c].get_mpz_t());
        mpz_abs(best.get_mpz_t(), m[pivot][c].get_mpz_t());
        if (cur > best) pivot = i;
      }
    }
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer t = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

std::vector<std::vector<Rational>> nullspace(const RatMatrix& a) {
  if (a.empty() || a[0].empty()) {
    // Kernel of a map with empty matrix: everything (cols many unit vectors).
    std::size_t cols = a.empty() ? 0 : a[0].size();
    std::vector<std::vector<Rational>> basis;
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<Rational> v(cols, Rational(0));
      v[j] = 1;
      basis.push_back(std::move(v));
    }
    return basis;
  }
  check_rect(a);
  RatMatrix m = a;
  std::size_t rows = m.size(), cols = m[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    Rational inv = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[c] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
      v[pivot_col[i]] = -m[i][c];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
  std::size_t ar = a.size(), ac = ar ? a[0].size() : 0;
  std::size_t br = b.size(), bc = br ? b[0].size() : 0;
  if (ac != br) throw std::invalid_argument("linalg: shape mismatch in mat_mul");
  RatMatrix out = rat_matrix(ar, bc);
  for (std::size_t i = 0; i < ar; ++i) {
    for (std::size_t k = 0; k < ac; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < bc; ++j) {
        if (b[k][j] == 0) continue;
        out[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return out;
}

RatMatrix transpose(const RatMatrix& a) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  RatMatrix out = rat_matrix(cols, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[j][i] = a[i][j];
  }
  return out;
}

}  // namespace l2approx
