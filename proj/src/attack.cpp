#include "obsgame/attack.hpp"

#include <algorithm>
#include <functional>

#include "obsgame/errors.hpp"
#include "obsgame/subspace.hpp"

namespace obsgame {

namespace {

constexpr std::size_t kExhaustiveLimit = 12;

void check_bhat(const JordanDecomposition& jd, const Matrix& Bhat) {
  if (Bhat.rows() != jd.n()) throw ShapeMismatch("B-hat must have n rows");
}

// Stacked last rows of the blocks of eigenvalue i, in J order.
Matrix last_rows(const JordanDecomposition& jd, const Matrix& Bhat, std::size_t i) {
  std::vector<std::size_t> idx;
  for (const auto& b : jd.blocks_of(i)) idx.push_back(b.last_row());
  return Bhat.select_rows(idx);
}

// Calls f on every k-subset of {0..n-1} in lexicographic order; stops when f returns false.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    if (!f(c)) return;
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

std::vector<std::size_t> local_sizes(const JordanDecomposition& jd, std::size_t i) {
  std::vector<std::size_t> s;
  for (const auto& b : jd.blocks_of(i)) s.push_back(b.size);
  return s;
}

std::size_t top_sum(std::vector<std::size_t> sizes, std::size_t m) {
  std::sort(sizes.rbegin(), sizes.rend());
  std::size_t s = 0;
  for (std::size_t j = 0; j < std::min(m, sizes.size()); ++j) s += sizes[j];
  return s;
}

// Lead-vector reduction for one eigenvalue. Generators are the B-hat columns
// restricted to that eigenvalue's blocks, concatenated in J order.
std::size_t krylov_dim(const std::vector<std::size_t>& sizes, std::vector<std::vector<Rational>> gens) {
  const std::size_t alpha = sizes.size();
  std::vector<std::size_t> base(alpha, 0);
  for (std::size_t k = 1; k < alpha; ++k) base[k] = base[k - 1] + sizes[k - 1];

  auto height = [&](const std::vector<Rational>& g) {
    std::size_t h = 0;
    for (std::size_t k = 0; k < alpha; ++k)
      for (std::size_t p = sizes[k]; p > 0; --p)
        if (!g[base[k] + p - 1].is_zero()) {
          h = std::max(h, p);
          break;
        }
    return h;
  };
  auto lead = [&](const std::vector<Rational>& g, std::size_t h) {
    Matrix l(alpha, 1);
    for (std::size_t k = 0; k < alpha; ++k)
      if (sizes[k] >= h) l(k, 0) = g[base[k] + h - 1];
    return l;
  };
  // N^d: entries move d places up inside each block
  auto shift = [&](const std::vector<Rational>& g, std::size_t d) {
    std::vector<Rational> r(g.size());
    for (std::size_t k = 0; k < alpha; ++k)
      for (std::size_t p = 0; p + d < sizes[k]; ++p) r[base[k] + p] = g[base[k] + p + d];
    return r;
  };

  std::vector<std::vector<Rational>> accepted;
  std::vector<std::size_t> acc_h;
  Matrix leads(alpha, 0);
  std::size_t dim = 0;
  while (!gens.empty()) {
    std::size_t best = 0, bh = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::size_t h = height(gens[i]);
      if (h > bh) bh = h, best = i;
    }
    if (bh == 0) break;
    std::vector<Rational> g = std::move(gens[best]);
    gens.erase(gens.begin() + static_cast<long>(best));
    Matrix l = lead(g, bh);
    auto res = rref(hstack(leads, l));
    const std::size_t p = leads.cols();
    if (res.pivots.size() > p) {
      accepted.push_back(g);
      acc_h.push_back(bh);
      leads = hstack(leads, l);
      dim += bh;
      continue;
    }
    for (std::size_t j = 0; j < p; ++j) {
      const Rational c = res.reduced(j, p);
      if (c.is_zero()) continue;
      auto s = shift(accepted[j], acc_h[j] - bh);
      for (std::size_t t = 0; t < g.size(); ++t) g[t] -= c * s[t];
    }
    gens.push_back(std::move(g));
  }
  return dim;
}

}  // namespace

BlockSelection select_blocks(const JordanDecomposition& jd, const Matrix& Bhat) {
  check_bhat(jd, Bhat);
  BlockSelection out;
  for (std::size_t i = 0; i < jd.spectrum.size(); ++i) {
    const Matrix R = last_rows(jd, Bhat, i);
    const auto sizes = local_sizes(jd, i);
    const std::size_t alpha = sizes.size();
    const std::size_t s = rank(R);
    std::vector<std::size_t> chosen;
    std::size_t weight = 0;
    if (alpha <= kExhaustiveLimit) {
      bool found = false;
      for_each_combination(alpha, s, [&](const std::vector<std::size_t>& c) {
        if (rank(R.select_rows(c)) != s) return true;
        std::size_t w = 0;
        for (auto k : c) w += sizes[k];
        if (!found || w > weight) {
          chosen = c;
          weight = w;
          found = true;
        }
        return true;
      });
    } else {
      std::vector<std::size_t> order(alpha);
      for (std::size_t k = 0; k < alpha; ++k) order[k] = k;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
      for (auto k : order) {
        auto trial = chosen;
        trial.push_back(k);
        if (rank(R.select_rows(trial)) == trial.size()) {
          chosen = trial;
          weight += sizes[k];
        }
      }
      std::sort(chosen.begin(), chosen.end());
    }
    out.chosen.push_back(chosen);
    out.achieved_dim += weight;
  }
  return out;
}

std::size_t controllable_dim(const JordanDecomposition& jd, const Matrix& Bhat) {
  check_bhat(jd, Bhat);
  std::size_t total = 0;
  for (std::size_t i = 0; i < jd.spectrum.size(); ++i) {
    const auto blocks = jd.blocks_of(i);
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> rows;
    for (const auto& b : blocks) {
      sizes.push_back(b.size);
      for (std::size_t p = 0; p < b.size; ++p) rows.push_back(b.offset + p);
    }
    std::vector<std::vector<Rational>> gens;
    for (std::size_t c = 0; c < Bhat.cols(); ++c) {
      std::vector<Rational> g;
      for (auto r : rows) g.push_back(Bhat(r, c));
      gens.push_back(std::move(g));
    }
    total += krylov_dim(sizes, std::move(gens));
  }
  return total;
}

bool is_max_controllable(const JordanDecomposition& jd, const Matrix& Bhat, std::size_t m) {
  check_bhat(jd, Bhat);
  if (Bhat.cols() != m) throw ShapeMismatch("B-hat must have m columns");
  for (std::size_t i = 0; i < jd.spectrum.size(); ++i) {
    const Matrix R = last_rows(jd, Bhat, i);
    const auto sizes = local_sizes(jd, i);
    const std::size_t alpha = sizes.size();
    if (m >= alpha) {
      if (rank(R) != alpha) return false;
      continue;
    }
    // the m largest blocks; equal-size blocks at the cut are interchangeable
    auto sorted = sizes;
    std::sort(sorted.rbegin(), sorted.rend());
    const std::size_t cut = sorted[m - 1];
    std::vector<std::size_t> mandatory, tied;
    for (std::size_t k = 0; k < alpha; ++k) {
      if (sizes[k] > cut) mandatory.push_back(k);
      if (sizes[k] == cut) tied.push_back(k);
    }
    bool ok = false;
    for_each_combination(tied.size(), m - mandatory.size(), [&](const std::vector<std::size_t>& c) {
      auto pick = mandatory;
      for (auto t : c) pick.push_back(tied[t]);
      if (rank(R.select_rows(pick)) == m) {
        ok = true;
        return false;
      }
      return true;
    });
    if (!ok) return false;
  }
  return true;
}

std::size_t max_controllable_dim(const JordanDecomposition& jd, std::size_t m) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < jd.spectrum.size(); ++i) total += top_sum(local_sizes(jd, i), m);
  return total;
}

Matrix build_optimal_Bhat(const JordanDecomposition& jd, std::size_t m) {
  if (m == 0) throw ShapeMismatch("attacker needs at least one output");
  Matrix Bhat(jd.n(), m);
  for (std::size_t i = 0; i < jd.spectrum.size(); ++i) {
    const auto blocks = jd.blocks_of(i);
    const auto& es = jd.spectrum[i];
    if (blocks.size() >= m) {
      for (std::size_t j = 0; j < m; ++j) Bhat(blocks[es.descending_order[j]].last_row(), j) = 1;
    } else {
      for (std::size_t k = 0; k < blocks.size(); ++k) Bhat(blocks[k].last_row(), k) = 1;
    }
  }
  return Bhat;
}

Matrix sensor_from_Bhat(const JordanDecomposition& jd, const Matrix& Bhat) {
  return (jd.T * Bhat).transpose();
}

Matrix minimize_unobservable(const Matrix& A, const Matrix& B, const Matrix& F, std::size_t m) {
  const auto jd = jordan_decompose(closed_loop(A, B, F).transpose());
  return sensor_from_Bhat(jd, build_optimal_Bhat(jd, m));
}

std::size_t min_unobservable_dim(const Matrix& M, std::size_t m) {
  if (!M.is_square()) throw ShapeMismatch("min_unobservable_dim needs a square matrix");
  std::size_t reach = 0;
  for (const auto& [lambda, mult] : eigenvalues(M)) {
    (void)mult;
    reach += top_sum(block_sizes_from_ranks(M, lambda), m);
  }
  return M.rows() - reach;
}

std::vector<Matrix> optimal_Bhat_family(const JordanDecomposition& jd, std::size_t m,
                                        std::size_t cap) {
  if (m == 0) throw ShapeMismatch("attacker needs at least one output");
  using Placement = std::vector<std::pair<std::size_t, std::size_t>>;  // (local block, column)
  std::vector<std::vector<Placement>> options;
  for (std::size_t i = 0; i < jd.spectrum.size(); ++i) {
    const auto sizes = local_sizes(jd, i);
    const std::size_t alpha = sizes.size();
    const auto& es = jd.spectrum[i];
    std::vector<Placement> opts;
    Placement canonical;
    if (alpha >= m) {
      for (std::size_t j = 0; j < m; ++j) canonical.emplace_back(es.descending_order[j], j);
    } else {
      for (std::size_t k = 0; k < alpha; ++k) canonical.emplace_back(k, k);
    }
    opts.push_back(canonical);

    auto top = sizes;
    std::sort(top.rbegin(), top.rend());
    top.resize(std::min(m, alpha));
    // ordered tuples: slots are columns (alpha >= m) or blocks (alpha < m)
    const std::size_t slots = std::min(m, alpha);
    const std::size_t range = alpha >= m ? alpha : m;
    std::vector<std::size_t> tuple;
    std::vector<bool> used(range, false);
    std::function<void()> rec = [&]() {
      if (opts.size() >= cap) return;
      if (tuple.size() == slots) {
        Placement p;
        if (alpha >= m) {
          std::vector<std::size_t> chosen;
          for (std::size_t j = 0; j < m; ++j) {
            p.emplace_back(tuple[j], j);
            chosen.push_back(sizes[tuple[j]]);
          }
          std::sort(chosen.rbegin(), chosen.rend());
          if (chosen != top) return;
        } else {
          for (std::size_t k = 0; k < alpha; ++k) p.emplace_back(k, tuple[k]);
        }
        if (p != canonical) opts.push_back(p);
        return;
      }
      for (std::size_t v = 0; v < range; ++v) {
        if (used[v]) continue;
        used[v] = true;
        tuple.push_back(v);
        rec();
        tuple.pop_back();
        used[v] = false;
      }
    };
    rec();
    options.push_back(std::move(opts));
  }

  std::vector<Matrix> out;
  std::vector<std::size_t> idx(options.size(), 0);
  while (out.size() < cap) {
    Matrix Bhat(jd.n(), m);
    for (std::size_t i = 0; i < options.size(); ++i) {
      const auto blocks = jd.blocks_of(i);
      for (const auto& [blk, col] : options[i][idx[i]]) Bhat(blocks[blk].last_row(), col) = 1;
    }
    out.push_back(std::move(Bhat));
    // odometer, last eigenvalue fastest
    std::size_t d = options.size();
    while (d > 0) {
      --d;
      if (++idx[d] < options[d].size()) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
    if (options.empty()) break;
  }
  return out;
}

std::vector<Matrix> attacker_candidates(const Matrix& A, const Matrix& B, const Matrix& F,
                                        std::size_t m, std::size_t cap) {
  const auto jd = jordan_decompose(closed_loop(A, B, F).transpose());
  std::vector<Matrix> out;
  for (const auto& Bhat : optimal_Bhat_family(jd, m, cap)) out.push_back(sensor_from_Bhat(jd, Bhat));
  return out;
}

}  // namespace obsgame
