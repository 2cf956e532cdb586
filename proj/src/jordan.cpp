#include "obsgame/jordan.hpp"

#include <algorithm>
#include <map>

#include "obsgame/errors.hpp"

namespace obsgame {

namespace {

using Poly = std::vector<Rational>;  // highest degree first

Poly trim(Poly p) {
  std::size_t k = 0;
  while (k + 1 < p.size() && p[k].is_zero()) ++k;
  p.erase(p.begin(), p.begin() + static_cast<long>(k));
  return p;
}

bool is_zero_poly(const Poly& p) {
  return std::all_of(p.begin(), p.end(), [](const Rational& r) { return r.is_zero(); });
}

Poly derivative(const Poly& p) {
  Poly d;
  const std::size_t deg = p.size() - 1;
  for (std::size_t i = 0; i < deg; ++i) {
    d.push_back(p[i] * Rational(static_cast<std::int64_t>(deg - i)));
  }
  if (d.empty()) d.push_back(0);
  return d;
}

// Quotient and remainder of a / b.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  a = trim(a);
  if (a.size() < b.size()) return {Poly{0}, a};
  Poly q(a.size() - b.size() + 1);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = a[i] / b[0];
    if (q[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= q[i] * b[j];
  }
  if (b.size() == 1) return {q, Poly{0}};
  Poly r(a.end() - static_cast<long>(b.size() - 1), a.end());
  return {q, trim(r)};
}

Poly monic(Poly p) {
  const Rational lead = p[0];
  for (auto& c : p) c /= lead;
  return p;
}

Poly gcd(Poly a, Poly b) {
  a = trim(a);
  b = trim(b);
  while (!is_zero_poly(b)) {
    auto r = divmod(a, b).second;
    a = b;
    b = trim(r);
  }
  return monic(a);
}

// Horner evaluation.
Rational eval(const Poly& p, const Rational& x) {
  Rational acc;
  for (const auto& c : p) acc = acc * x + c;
  return acc;
}

// Divide by (x - r); assumes r is a root.
Poly deflate(const Poly& p, const Rational& r) {
  Poly q(p.size() - 1);
  Rational acc;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    acc = acc * r + p[i];
    q[i] = acc;
  }
  return q;
}

int sign_at(const Poly& p, const Rational& x) { return eval(p, x).sign(); }

Rational floor_of(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
  return Rational::from_integers(q, 1);
}

// Rational with the smallest denominator in [a, b].
Rational simplest_between(const Rational& a, const Rational& b) {
  const Rational fl = floor_of(a);
  if (fl == a) return a;
  if (fl + Rational(1) <= b) return fl + Rational(1);
  return fl + Rational(1) / simplest_between(Rational(1) / (b - fl), Rational(1) / (a - fl));
}

struct Sturm {
  std::vector<Poly> chain;

  explicit Sturm(const Poly& p) {
    chain.push_back(p);
    chain.push_back(derivative(p));
    while (!is_zero_poly(chain.back()) && chain.back().size() > 1) {
      Poly r = divmod(chain[chain.size() - 2], chain.back()).second;
      if (is_zero_poly(r)) break;
      for (auto& c : r) c = -c;
      chain.push_back(r);
    }
  }

  std::size_t variations(const Rational& x) const {
    std::size_t v = 0;
    int last = 0;
    for (const auto& q : chain) {
      const int sg = sign_at(q, x);
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  }

  // roots in (a, b]
  std::size_t count(const Rational& a, const Rational& b) const {
    return variations(a) - variations(b);
  }
};

// Real roots of a squarefree polynomial are isolated with a Sturm chain and
// narrowed below 1/L^2, where L is the leading coefficient of the primitive
// integer multiple. Two rationals with denominators dividing L are at least
// that far apart, so the simplest rational in the final interval is the only
// possible rational root there.
void isolate(const Sturm& st, Rational a, Rational b, std::size_t k, const Rational& width,
             std::vector<Rational>& roots) {
  if (k == 0) return;
  const Poly& p = st.chain[0];
  if (k > 1) {
    const Rational mid = (a + b) / Rational(2);
    const std::size_t left = st.count(a, mid);
    isolate(st, a, mid, left, width, roots);
    isolate(st, mid, b, k - left, width, roots);
    return;
  }
  if (sign_at(p, b) == 0) {
    roots.push_back(b);
    return;
  }
  // exactly one simple root in (a, b), so p changes sign across it
  int sb = sign_at(p, b);
  Rational tried = b;
  while (b - a >= width) {
    // roots with small denominators show up long before the width bound
    // a may be a root owned by the neighbouring interval
    const Rational c = simplest_between(a, b);
    if (c != tried && c != a) {
      if (sign_at(p, c) == 0) {
        roots.push_back(c);
        return;
      }
      tried = c;
    }
    const Rational mid = (a + b) / Rational(2);
    const int sm = sign_at(p, mid);
    if (sm == 0) {
      roots.push_back(mid);
      return;
    }
    if (sm == sb) b = mid;
    else a = mid;
  }
  const Rational c = simplest_between(a, b);
  if (c != a && sign_at(p, c) == 0) roots.push_back(c);
}

// Roots of an integer polynomial over F_l, counted with multiplicity.
std::size_t roots_mod(const std::vector<mpz_class>& f, unsigned long l) {
  std::vector<unsigned long> c;
  for (const auto& x : f) c.push_back(mpz_fdiv_ui(x.get_mpz_t(), l));
  std::size_t found = 0;
  for (unsigned long a = 0; a < l && c.size() > 1; ++a) {
    while (c.size() > 1) {
      // synthetic division by (x - a)
      std::vector<unsigned long> q(c.size() - 1);
      unsigned long acc = 0;
      for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        acc = (acc * a + c[i]) % l;
        q[i] = acc;
      }
      if ((acc * a + c.back()) % l != 0) break;
      c = std::move(q);
      ++found;
    }
  }
  return found;
}

// Distinct rational roots of a squarefree polynomial, ascending.
std::vector<Rational> rational_roots(const Poly& s) {
  std::vector<Rational> roots;
  if (s.size() <= 1) return roots;
  const Poly p = monic(s);
  mpz_class D = 1;
  for (const auto& c : p) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c.raw().get_den_mpz_t());
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_class v = mpq_class(c.raw() * D).get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  const mpz_class L = D / g;

  // When every root is rational, f splits into linear factors modulo any
  // prime not dividing L. A short count there rules rational splitting out.
  std::vector<mpz_class> f;
  for (const auto& c : p) f.push_back(mpz_class(mpq_class(c.raw() * D).get_num() / g));
  for (unsigned long l : {1009ul, 1013ul, 10007ul}) {
    if (mpz_divisible_ui_p(L.get_mpz_t(), l)) continue;
    if (roots_mod(f, l) < p.size() - 1) return {};
  }
  const Rational width = Rational::from_integers(1, L * L);

  Rational bound(1);
  for (std::size_t i = 1; i < p.size(); ++i) bound = std::max(bound, p[i].abs() + Rational(1));
  const Sturm st(p);
  isolate(st, -bound, bound, st.count(-bound, bound), width, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

Rational first_nonzero(const Matrix& v) {
  for (const auto& x : v.entries())
    if (!x.is_zero()) return x;
  return 0;
}

}  // namespace

std::vector<std::pair<Rational, std::size_t>> eigenvalues(const Matrix& m) {
  if (!m.is_square()) throw ShapeMismatch("eigenvalues of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<std::pair<Rational, std::size_t>> out;
  if (n == 0) return out;
  Poly p = char_poly(m);
  Poly g = gcd(p, derivative(p));
  Poly s = monic(divmod(p, g).first);
  std::size_t total = 0;
  for (const auto& r : rational_roots(s)) {
    std::size_t mult = 0;
    Poly t = p;
    while (t.size() > 1 && eval(t, r).is_zero()) {
      t = deflate(t, r);
      ++mult;
    }
    out.emplace_back(r, mult);
    total += mult;
  }
  if (total != n) throw NonRationalSpectrum("characteristic polynomial has irrational or complex roots");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::size_t geometric_multiplicity(const Matrix& m, const Rational& lambda) {
  return m.rows() - rank(m - Matrix::identity(m.rows()) * lambda);
}

std::size_t max_geometric_multiplicity(const Matrix& m) {
  std::size_t best = 0;
  for (const auto& [lambda, mult] : eigenvalues(m)) {
    if (mult <= best) continue;
    best = std::max(best, geometric_multiplicity(m, lambda));
  }
  return best;
}

std::vector<std::size_t> block_sizes_from_ranks(const Matrix& m, const Rational& lambda) {
  const std::size_t n = m.rows();
  const Matrix N = m - Matrix::identity(n) * lambda;
  std::vector<std::size_t> rk{n};
  Matrix P = Matrix::identity(n);
  while (true) {
    P = P * N;
    rk.push_back(rank(P));
    if (rk.back() == rk[rk.size() - 2]) break;
  }
  // #blocks of size >= j is rk[j-1] - rk[j]
  std::vector<std::size_t> sizes;
  for (std::size_t j = rk.size() - 1; j >= 1; --j) {
    const std::size_t ge = rk[j - 1] - rk[j];
    const std::size_t gt = j < rk.size() - 1 ? rk[j] - rk[j + 1] : 0;
    for (std::size_t c = 0; c < ge - gt; ++c) sizes.push_back(j);
  }
  return sizes;
}

Matrix jordan_block(const Rational& lambda, std::size_t size) {
  Matrix J(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    J(i, i) = lambda;
    if (i + 1 < size) J(i, i + 1) = 1;
  }
  return J;
}

JordanDecomposition jordan_decompose(const Matrix& m) {
  if (!m.is_square()) throw ShapeMismatch("Jordan form of non-square matrix");
  const std::size_t n = m.rows();
  const Matrix Y = m.transpose();
  JordanDecomposition out;
  std::vector<Matrix> rows;
  std::size_t offset = 0;

  for (const auto& [lambda, sigma] : eigenvalues(m)) {
    const Matrix N = Y - Matrix::identity(n) * lambda;
    std::vector<Matrix> K{Matrix(n, 0)};
    std::vector<Matrix> Npow{Matrix::identity(n)};
    while (K.back().cols() < sigma) {
      Npow.push_back(Npow.back() * N);
      K.push_back(kernel_basis(Npow.back()).basis());
    }
    const std::size_t height = K.size() - 1;

    // chain tops, picked from the highest level down
    std::vector<std::pair<std::size_t, Matrix>> tops;
    for (std::size_t lev = height; lev >= 1; --lev) {
      Matrix W = K[lev - 1];
      for (const auto& [L, v] : tops) W = hstack(W, Npow[L - lev] * v);
      for (std::size_t i = 0; i < K[lev].cols(); ++i) {
        Matrix c = K[lev].col(i);
        Matrix Wc = hstack(W, c);
        if (rank(Wc) > W.cols()) {
          tops.emplace_back(lev, c);
          W = std::move(Wc);
        }
      }
    }
    std::stable_sort(tops.begin(), tops.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    EigenStructure es;
    es.eigenvalue = lambda;
    es.algebraic_mult = sigma;
    es.geometric_mult = tops.size();
    const std::size_t ei = out.spectrum.size();
    for (std::size_t b = 0; b < tops.size(); ++b) {
      auto [L, v] = tops[b];
      v = v * (Rational(1) / first_nonzero(v));
      const Rational lead = first_nonzero(Npow[L - 1] * v);
      v = v * (Rational(1) / lead.abs());
      for (std::size_t k = 0; k < L; ++k) rows.push_back((Npow[k] * v).transpose());
      es.block_sizes.push_back(L);
      es.descending_order.push_back(b);
      out.blocks.push_back({ei, b, offset, L});
      offset += L;
    }
    out.spectrum.push_back(std::move(es));
  }

  out.J = Matrix(n, n);
  for (const auto& blk : out.blocks) {
    out.J.set_block(blk.offset, blk.offset,
                    jordan_block(out.spectrum[blk.eigen_index].eigenvalue, blk.size));
  }
  out.T = inverse(vstack(rows, n));
  return out;
}

std::vector<JordanBlock> JordanDecomposition::blocks_of(std::size_t i) const {
  std::vector<JordanBlock> r;
  for (const auto& b : blocks)
    if (b.eigen_index == i) r.push_back(b);
  return r;
}

JordanDecomposition JordanDecomposition::from_jordan_form(const Matrix& J) {
  if (!J.is_square()) throw ShapeMismatch("Jordan form must be square");
  const std::size_t n = J.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (j == i + 1) {
        const auto& s = J(i, j);
        if (!s.is_zero() && !(s == Rational(1) && J(i, i) == J(j, j))) {
          throw ShapeMismatch("matrix is not in Jordan form");
        }
      } else if (!J(i, j).is_zero()) {
        throw ShapeMismatch("matrix is not in Jordan form");
      }
    }
  }
  JordanDecomposition out;
  out.J = J;
  out.T = Matrix::identity(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && J(end - 1, end) == Rational(1)) ++end;
    const Rational& lambda = J(start, start);
    std::size_t ei = 0;
    while (ei < out.spectrum.size() && out.spectrum[ei].eigenvalue != lambda) ++ei;
    if (ei == out.spectrum.size()) {
      out.spectrum.push_back({});
      out.spectrum.back().eigenvalue = lambda;
    }
    auto& es = out.spectrum[ei];
    out.blocks.push_back({ei, es.block_sizes.size(), start, end - start});
    es.block_sizes.push_back(end - start);
    es.algebraic_mult += end - start;
    es.geometric_mult += 1;
    start = end;
  }
  for (auto& es : out.spectrum) {
    std::vector<std::size_t> order(es.block_sizes.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return es.block_sizes[a] > es.block_sizes[b];
    });
    std::vector<std::size_t> sorted;
    for (auto k : order) sorted.push_back(es.block_sizes[k]);
    es.block_sizes = sorted;
    es.descending_order = order;
  }
  return out;
}

}  // namespace obsgame
