#include "obsgame/game.hpp"

#include <algorithm>

#include "obsgame/attack.hpp"
#include "obsgame/errors.hpp"
#include "obsgame/jordan.hpp"
#include "obsgame/subspace.hpp"

namespace obsgame {

namespace {

constexpr std::size_t kMinTail = 4;

std::size_t vstar_dim(const Matrix& A, const Matrix& B, const Matrix& C) {
  return vstar(A, B, C).vstar.dim();
}

bool is_br1_attacker_member(const Matrix& A, const Matrix& B, const Matrix& F, std::size_t m,
                            const Matrix& C) {
  const Matrix M = closed_loop(A, B, F);
  return C.rows() == m && C.cols() == A.cols() &&
         unobservable_dim(C, M) == min_unobservable_dim(M, m);
}

bool is_br1_defender_member(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& F) {
  return F.rows() == B.cols() && F.cols() == A.cols() &&
         unobservable_dim(C, closed_loop(A, B, F)) == vstar_dim(A, B, C);
}

std::optional<std::size_t> safe_max_geo(const Matrix& M) {
  try {
    return max_geometric_multiplicity(M);
  } catch (const NonRationalSpectrum&) {
    return std::nullopt;
  }
}

std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::string to_string(Actor a) { return a == Actor::attacker ? "attacker" : "defender"; }
std::string to_string(Depth d) { return d == Depth::one_step ? "one-step" : "two-step"; }
std::string to_string(Mode m) {
  switch (m) {
    case Mode::lock: return "lock";
    case Mode::oscillation: return "oscillation";
    default: return "inconclusive";
  }
}

std::vector<std::size_t> GameTrace::phis() const {
  std::vector<std::size_t> p;
  for (const auto& s : steps) p.push_back(s.phi);
  return p;
}

void GameConfig::validate() const {
  if (!A.is_square() || A.rows() == 0) throw ShapeMismatch("A must be a non-empty square matrix");
  const std::size_t n = A.rows();
  if (B.rows() != n || B.cols() == 0) throw ShapeMismatch("B must be n x k with k >= 1");
  if (F0.rows() != B.cols() || F0.cols() != n) throw ShapeMismatch("F0 must be k x n");
  if (m == 0) throw ShapeMismatch("m must be at least 1");
  if (horizon == 0) throw ShapeMismatch("horizon must be at least 1");
  for (const auto& [epoch, M] : overrides) {
    if (epoch == 0) throw ShapeMismatch("override epochs start at 1");
    const bool attacker = epoch % 2 == 1;
    if (attacker && (M.rows() != m || M.cols() != n)) {
      throw ShapeMismatch("override at epoch " + std::to_string(epoch) + " must be m x n");
    }
    if (!attacker && (M.rows() != B.cols() || M.cols() != n)) {
      throw ShapeMismatch("override at epoch " + std::to_string(epoch) + " must be k x n");
    }
  }
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double density,
                     int max_num, int max_den) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  Matrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (keep(rng)) M(i, j) = Rational(num(rng), den(rng));
  return M;
}

AttackerResponse br1_attacker(const Matrix& A, const Matrix& B, const Matrix& F, std::size_t m,
                              const std::optional<Matrix>& current_C) {
  AttackerResponse out;
  out.candidates = attacker_candidates(A, B, F, m);
  if (current_C && is_br1_attacker_member(A, B, F, m, *current_C)) {
    out.C = *current_C;
  } else {
    out.C = out.candidates.front();
  }
  return out;
}

Matrix br1_defender(const Matrix& A, const Matrix& B, const Matrix& C,
                    const std::optional<Matrix>& current_F) {
  if (current_F && is_br1_defender_member(A, B, C, *current_F)) return *current_F;
  return friend_matrix(A, B, vstar(A, B, C).vstar);
}

Matrix br2_attacker(const Matrix& A, const Matrix& B, const Matrix& F, std::size_t m,
                    const std::optional<Matrix>& current_C) {
  const auto candidates = attacker_candidates(A, B, F, m);
  std::size_t best = 0, best_dim = SIZE_MAX;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t d = vstar_dim(A, B, candidates[i]);
    if (d < best_dim) best_dim = d, best = i;
  }
  if (current_C && is_br1_attacker_member(A, B, F, m, *current_C) &&
      vstar_dim(A, B, *current_C) <= best_dim) {
    return *current_C;
  }
  return candidates[best];
}

Matrix br2_defender(const Matrix& A, const Matrix& B, const Matrix& C,
                    const std::optional<Matrix>& current_F, std::size_t budget, std::size_t m,
                    std::uint64_t seed) {
  if (budget == 0) return br1_defender(A, B, C, current_F);
  const Subspace V = vstar(A, B, C).vstar;
  const Matrix base = friend_matrix(A, B, V);
  const std::size_t n = A.rows(), k = B.cols();

  std::vector<Matrix> candidates{base};
  const Matrix zero(k, n);
  if (base != zero && is_friend(A, B, zero, V)) candidates.push_back(zero);
  // F + G P keeps V invariant whenever P V = 0
  const Matrix P = V.dim() ? left_annihilator(V.basis()) : Matrix::identity(n);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < budget && P.rows() > 0; ++t) {
    candidates.push_back(base + random_matrix(k, P.rows(), rng) * P);
  }

  auto score = [&](const Matrix& F) -> std::optional<std::size_t> {
    try {
      return min_unobservable_dim(closed_loop(A, B, F), m);
    } catch (const NonRationalSpectrum&) {
      return std::nullopt;
    }
  };
  std::optional<std::size_t> best_score;
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto s = score(candidates[i]);
    if (s && (!best_score || *s > *best_score)) best_score = s, best = i;
  }
  if (current_F && is_br1_defender_member(A, B, C, *current_F)) {
    const auto s = score(*current_F);
    if (s && (!best_score || *s >= *best_score)) return *current_F;
  }
  return best_score ? candidates[best] : base;
}

GameTrace run_game(const GameConfig& cfg) {
  cfg.validate();
  GameTrace trace;
  std::optional<Matrix> C;
  Matrix F = cfg.F0;
  auto incumbent = [&](const std::optional<Matrix>& M) {
    return cfg.sticky ? M : std::optional<Matrix>();
  };
  for (std::size_t epoch = 1; epoch <= cfg.horizon; ++epoch) {
    GameStep step;
    step.epoch = epoch;
    step.actor = epoch % 2 ? Actor::attacker : Actor::defender;
    try {
      auto forced = cfg.overrides.find(epoch);
      if (step.actor == Actor::attacker) {
        if (forced != cfg.overrides.end()) {
          step.strategy = forced->second;
        } else if (cfg.depth == Depth::one_step) {
          step.strategy = br1_attacker(cfg.A, cfg.B, F, cfg.m, incumbent(C)).C;
        } else {
          step.strategy = br2_attacker(cfg.A, cfg.B, F, cfg.m, incumbent(C));
        }
        C = step.strategy;
      } else {
        if (forced != cfg.overrides.end()) {
          step.strategy = forced->second;
        } else if (cfg.depth == Depth::one_step) {
          step.strategy = br1_defender(cfg.A, cfg.B, *C, incumbent(F));
        } else {
          const std::uint64_t s = cfg.seed ^ (0x9E3779B97F4A7C15ULL * epoch);
          step.strategy = br2_defender(cfg.A, cfg.B, *C, incumbent(F), cfg.search_budget, cfg.m, s);
        }
        F = step.strategy;
      }
    } catch (const NonRationalSpectrum& e) {
      throw NonRationalSpectrum(std::string(e.what()) + " at epoch " + std::to_string(epoch),
                                epoch);
    }
    const Matrix M = closed_loop(cfg.A, cfg.B, F);
    step.C = *C;
    step.F = F;
    step.phi = unobservable_dim(*C, M);
    step.dim_vstar = vstar_dim(cfg.A, cfg.B, *C);
    step.max_geo_mult = safe_max_geo(M);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

ModeReport classify_mode(const GameTrace& trace, const Matrix& A, const Matrix& B, std::size_t m) {
  ModeReport rep;
  const auto& st = trace.steps;
  const std::size_t H = st.size();
  if (H == 0) return rep;
  const auto phi = trace.phis();

  // tails, as 0-based start indices
  std::size_t lock_start = H - 1;
  while (lock_start > 0 && phi[lock_start - 1] == phi[H - 1]) --lock_start;
  std::size_t osc_start = H - 1;
  while (osc_start > 0 && phi[osc_start - 1] != phi[osc_start]) --osc_start;

  std::size_t tail = 0;
  if (H - lock_start >= kMinTail) {
    rep.mode = Mode::lock;
    tail = lock_start;
  } else if (H - osc_start >= kMinTail) {
    rep.mode = Mode::oscillation;
    tail = osc_start;
  } else {
    rep.mode = Mode::inconclusive;
    tail = 0;
  }
  rep.onset_epoch = st[tail].epoch;
  for (std::size_t i = tail; i + 1 < H; ++i) {
    rep.amplitude = std::max(rep.amplitude, absdiff(phi[i + 1], phi[i]));
  }

  for (std::size_t p = 1; 2 * p <= H; ++p) {
    bool repeats = true;
    for (std::size_t i = H - 2 * p; i < H - p && repeats; ++i) {
      repeats = st[i].C == st[i + p].C && st[i].F == st[i + p].F;
    }
    if (repeats) {
      rep.loop_period = p;
      break;
    }
  }

  for (const auto& s : st) {
    if (s.actor == Actor::attacker) rep.theorem1_by_epoch.emplace_back(s.epoch, s.phi == s.dim_vstar);
  }
  rep.theorem1_holds = st[0].phi == st[0].dim_vstar;
  rep.lemma5_holds = rep.theorem1_holds;
  rep.theorem2_holds = theorem2_check(A, B, st[0].C);

  rep.corollary2_holds = true;
  for (std::size_t i = 0; i + 1 < H; ++i) {
    const auto& odd = st[i].actor == Actor::attacker ? st[i] : st[i + 1];
    const auto& even = st[i].actor == Actor::defender ? st[i] : st[i + 1];
    const std::size_t reach = min_unobservable_dim(closed_loop(A, B, odd.F), m);
    const std::size_t vdim = vstar(A, B, even.C).vstar.dim();
    if (vdim < reach || absdiff(phi[i + 1], phi[i]) != vdim - reach) rep.corollary2_holds = false;
  }

  bool any_defender = false;
  rep.zero_friend_all_tail = true;
  for (std::size_t i = tail; i < H; ++i) {
    if (st[i].actor != Actor::defender) continue;
    any_defender = true;
    const bool z = is_friend(A, B, Matrix(B.cols(), A.cols()), vstar(A, B, st[i].C).vstar);
    rep.zero_friend_any_tail = rep.zero_friend_any_tail || z;
    rep.zero_friend_all_tail = rep.zero_friend_all_tail && z;
  }
  if (!any_defender) rep.zero_friend_all_tail = false;
  return rep;
}

bool theorem2_check(const Matrix& A, const Matrix& B, const Matrix& C) {
  const std::size_t n = A.rows(), m = C.rows(), k = B.cols();
  if (!A.is_square() || B.rows() != n || C.cols() != n) {
    throw ShapeMismatch("theorem2_check needs A n x n, B n x k, C m x n");
  }
  if (n >= m + k) {
    return (C * B).is_zero() && rank(vstack(C, C * A)) == n;
  }
  const Subspace kerC = kernel_basis(C);
  if (!image(B).contains(kerC)) return false;
  const Matrix Z = left_annihilator(B);
  return rank(Z.rows() ? vstack(C, Z * A) : C) == n;
}

StackelbergReport stackelberg_compare(const Matrix& A, const Matrix& B, std::size_t m,
                                      const Matrix& F0, std::size_t budget, std::uint64_t seed) {
  StackelbergReport rep;
  const std::size_t n = A.rows(), k = B.cols();
  const Matrix M0 = closed_loop(A, B, F0);
  std::mt19937_64 rng(seed);

  const auto family = attacker_candidates(A, B, F0, m);
  rep.br2a_value = SIZE_MAX;
  for (const auto& C : family) rep.br2a_value = std::min(rep.br2a_value, vstar_dim(A, B, C));
  rep.br1a_value = min_unobservable_dim(M0, m);
  rep.br2x_value = rep.br2a_value;
  std::vector<Matrix> sampled_C = family;
  for (std::size_t t = 0; t < budget; ++t) {
    Matrix C = random_matrix(m, n, rng);
    rep.br2x_value = std::min(rep.br2x_value, vstar_dim(A, B, C));
    sampled_C.push_back(std::move(C));
  }
  rep.ordering_holds = rep.br2x_value <= rep.br2a_value;
  rep.lemma4_holds = rep.br2x_value >= rep.br1a_value;

  // follower defender: maximizers of Phi(C, .) against friends of V*(C)
  rep.defender_agreement = true;
  const std::size_t probe = std::min<std::size_t>(sampled_C.size(), 8);
  for (std::size_t c = 0; c < probe; ++c) {
    const Matrix& C = sampled_C[c];
    const Subspace V = vstar(A, B, C).vstar;
    const Matrix base = friend_matrix(A, B, V);
    const Matrix P = V.dim() ? left_annihilator(V.basis()) : Matrix::identity(n);
    std::vector<Matrix> Fs{base, Matrix(k, n), F0};
    for (std::size_t t = 0; t < std::max<std::size_t>(budget / 4, 2); ++t) {
      Fs.push_back(random_matrix(k, n, rng));
      if (P.rows()) Fs.push_back(base + random_matrix(k, P.rows(), rng) * P);
    }
    std::size_t best = 0;
    std::vector<std::size_t> phis;
    for (const auto& F : Fs) {
      phis.push_back(unobservable_dim(C, closed_loop(A, B, F)));
      best = std::max(best, phis.back());
    }
    for (std::size_t i = 0; i < Fs.size(); ++i) {
      ++rep.defender_samples;
      if ((phis[i] == best) != is_friend(A, B, Fs[i], V)) rep.defender_agreement = false;
    }
  }

  // follower attacker: minimizers of Phi(., F0) against BR1_a membership
  rep.attacker_agreement = true;
  std::size_t low = SIZE_MAX;
  std::vector<std::size_t> phis;
  for (const auto& C : sampled_C) {
    phis.push_back(unobservable_dim(C, M0));
    low = std::min(low, phis.back());
  }
  for (std::size_t i = 0; i < sampled_C.size(); ++i) {
    ++rep.attacker_samples;
    const bool member = phis[i] == rep.br1a_value;
    if ((phis[i] == low) != member) rep.attacker_agreement = false;
  }
  return rep;
}

}  // namespace obsgame
