// Acceptance suite: one PASS/FAIL line per criterion, each under its time limit.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "obsgame/attack.hpp"
#include "obsgame/errors.hpp"
#include "obsgame/game.hpp"
#include "obsgame/jordan.hpp"
#include "obsgame/scenario.hpp"
#include "obsgame/subspace.hpp"
#include "oracles.hpp"
#include "reference_systems.hpp"

using namespace obsgame;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what;
    ok = ok && cond;
  }
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<void(Outcome&)> body;
};

std::string num(std::size_t v) { return std::to_string(v); }

// A with A + B F equal to a matrix of known rational spectrum.
struct Instance {
  Matrix A, B, F;
  std::size_t m;
};

Instance rational_instance(std::mt19937_64& rng, std::size_t max_n) {
  const std::size_t n = 2 + rng() % (max_n - 1), k = 1 + rng() % 2, m = 1 + rng() % 3;
  const Matrix T0 = oracle::random_invertible(n, rng);
  const Matrix M = T0 * oracle::random_jordan(n, 1 + rng() % 3, rng) * inverse(T0);
  const Matrix B = oracle::random_matrix(n, k, rng, -2, 2, 2, 0.6);
  const Matrix F = oracle::random_matrix(k, n, rng, -2, 2, 3, 0.5);
  return {M - B * F, B, F, std::min<std::size_t>(m, n)};
}

void blocks3(Outcome& o) {
  auto jd = JordanDecomposition::from_jordan_form(refsys::blocks3_J());
  const std::size_t d1 = controllable_dim(jd, refsys::blocks3_B1());
  const std::size_t d2 = controllable_dim(jd, refsys::blocks3_B2());
  const std::size_t d3 = controllable_dim(jd, refsys::blocks3_B3());
  o.expect(d1 == 2 && d2 == 3 && d3 == 3, "dims " + num(d1) + "," + num(d2) + "," + num(d3));
  o.expect(!is_max_controllable(jd, refsys::blocks3_B1(), 1), "B1 reported maximal");
  o.expect(is_max_controllable(jd, refsys::blocks3_B2(), 1), "B2 not maximal");
  o.expect(is_max_controllable(jd, refsys::blocks3_B3(), 1), "B3 not maximal");
  if (o.ok) o.detail << "dims 2,3,3; maximal false,true,true";
}

void diag5_vstar(Outcome& o) {
  const Matrix A = refsys::diag5_A(), B = refsys::diag5_B();
  const std::size_t a = vstar(A, B, refsys::diag5_Ca()).vstar.dim();
  const std::size_t b = vstar(A, B, refsys::diag5_Cb()).vstar.dim();
  o.expect(a == 3 && b == 1, "dims " + num(a) + "," + num(b));
  if (o.ok) o.detail << "dim V* = 3 and 1";
}

void diag5_loop(Outcome& o) {
  auto cfg = load_scenario(refsys::fixture("diag5_loop.json")).game_config();
  o.expect(cfg.horizon == 20, "horizon");
  const auto trace = run_game(cfg);
  const auto rep = classify_mode(trace, cfg.A, cfg.B, cfg.m);
  o.expect(rep.loop_period && *rep.loop_period == 4, "loop period");
  const Matrix& F2 = trace.steps.at(1).strategy;
  if (F2 == refsys::diag5_F1()) {
    if (o.ok) o.detail << "loop period 4; epoch-2 friend [-1/10,0,0,1/10,0]";
  } else {
    auto V = vstar(cfg.A, cfg.B, trace.steps[0].C).vstar;
    o.expect(is_friend(cfg.A, cfg.B, F2, V) && trace.steps[1].phi == 3, "fallback friend check");
    if (o.ok) o.detail << "loop period 4; epoch-2 friend differs, fallback holds";
  }
}

void diag5_lock(Outcome& o) {
  auto cfg = load_scenario(refsys::fixture("diag5_lock.json")).game_config();
  const auto trace = run_game(cfg);
  const auto rep = classify_mode(trace, cfg.A, cfg.B, cfg.m);
  o.expect(rep.mode == Mode::lock, "mode " + to_string(rep.mode));
  bool constant = true;
  for (std::size_t i = 2; i < trace.steps.size(); ++i)
    constant = constant && trace.steps[i].phi == trace.steps[1].phi &&
               trace.steps[i].C == trace.steps[1].C && trace.steps[i].F == trace.steps[1].F;
  o.expect(constant, "strategies change after epoch 2");
  o.expect(rep.onset_epoch <= 2, "onset " + num(rep.onset_epoch));
  o.expect(rep.theorem1_holds, "theorem1_holds false");
  if (o.ok) o.detail << "lock from epoch " << rep.onset_epoch << "; theorem1_holds";
}

void swap4(Outcome& o) {
  const Matrix A = refsys::swap4_A();
  auto d = [](std::initializer_list<std::size_t> ks) {
    std::vector<Matrix> cols;
    for (auto k : ks) cols.push_back(refsys::delta(k));
    return hstack(cols, 4);
  };
  // rows of I4 other than the listed kernel directions
  auto c_with_kernel = [](std::initializer_list<std::size_t> ks) {
    std::vector<std::size_t> keep;
    for (std::size_t r = 1; r <= 4; ++r)
      if (std::find(ks.begin(), ks.end(), r) == ks.end()) keep.push_back(r - 1);
    return Matrix::identity(4).select_rows(keep);
  };
  struct Row {
    Matrix B, C;
    std::size_t dim;
    std::string label;
  };
  const Matrix C = refsys::swap4_C();
  const std::vector<Row> table = {
      {d({3}), C, 0, "Im B = d3"},
      {d({4}), C, 0, "Im B = d4"},
      {d({3, 4}), C, 0, "Im B = [d3 d4]"},
      {d({1}), C, 1, "Im B = d1"},
      {d({2}), C, 1, "Im B = d2"},
      {d({1, 2}), C, 2, "Im B = [d1 d2]"},
      {d({2, 3, 4}), c_with_kernel({3}), 0, "Ker C = d3"},
      {d({2, 3, 4}), c_with_kernel({2}), 1, "Ker C = d2"},
      {d({2, 3, 4}), c_with_kernel({4}), 1, "Ker C = d4"},
      {d({2, 3, 4}), c_with_kernel({2, 3}), 1, "Ker C = [d3 d2]"},
      {d({2, 3, 4}), c_with_kernel({2, 3, 4}), 2, "Ker C = [d2 d3 d4]"},
  };
  for (const auto& r : table) {
    const std::size_t got = vstar(A, r.B, r.C).vstar.dim();
    o.expect(got == r.dim, r.label + ": dim " + num(got));
    o.expect(theorem2_check(A, r.B, r.C) == (r.dim == 0), r.label + ": theorem2_check");
  }
  if (o.ok) o.detail << table.size() << " configurations match";
}

void block_formula(Outcome& o) {
  std::mt19937_64 rng(20240601);
  std::size_t agree = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 8, m = 1 + rng() % 3;
    const Matrix J = oracle::random_jordan(n, 1 + rng() % 3, rng);
    auto jd = JordanDecomposition::from_jordan_form(J);
    const Matrix B = oracle::random_matrix(n, m, rng, -2, 2, 2, 0.4);
    if (controllable_dim(jd, B) == oracle::krylov_rank(J, B)) ++agree;
  }
  o.expect(agree == 100, num(agree) + "/100");
  if (o.ok) o.detail << "100/100";
}

void duality(Outcome& o) {
  std::mt19937_64 rng(20240602);
  std::size_t agree = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 6, k = 1 + rng() % 3, m = 1 + rng() % 3;
    const Matrix A = oracle::random_matrix(n, n, rng, -3, 3, 3, 0.5);
    const Matrix B = oracle::random_matrix(n, k, rng, -2, 2, 2, 0.5);
    const Matrix C = oracle::random_matrix(m, n, rng, -2, 2, 2, 0.5);
    const Matrix F = oracle::random_matrix(k, n, rng, -2, 2, 2, 0.5);
    const Matrix M = closed_loop(A, B, F);
    const std::size_t lhs = unobservable_dim(C, M);
    const std::size_t rhs = n - controllable_rank(M.transpose(), C.transpose());
    if (lhs == rhs && rhs == n - oracle::krylov_rank(M.transpose(), C.transpose())) ++agree;
  }
  o.expect(agree == 100, num(agree) + "/100");
  if (o.ok) o.detail << "100/100";
}

void maximality(Outcome& o) {
  std::mt19937_64 rng(20240603);
  std::size_t nontrivial = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 5, k = 1 + rng() % 2, m = 1 + rng() % 2;
    const Matrix A = oracle::random_matrix(n, n, rng, -2, 2, 2, 0.5);
    const Matrix B = oracle::random_matrix(n, k, rng, -1, 1, 1, 0.5);
    const Matrix C = oracle::random_matrix(m, n, rng, -1, 1, 1, 0.5);
    auto V = vstar(A, B, C).vstar;
    if (V.dim() > 0) ++nontrivial;
    for (int s = 0; s < 200; ++s) {
      const Matrix F = oracle::random_matrix(k, n, rng, -3, 3, 4, 0.6);
      const std::size_t phi = oracle::unobservable_dim(C, A + B * F);
      o.expect(phi <= V.dim(), "instance " + num(t) + ": random F beats V*");
    }
    const Matrix Ff = friend_matrix(A, B, V);
    o.expect(oracle::unobservable_dim(C, A + B * Ff) == V.dim(),
             "instance " + num(t) + ": friend misses V*");
  }
  if (o.ok) o.detail << "50 instances x 200 F, " << nontrivial << " with dim V* > 0";
}

void attacker(Outcome& o) {
  std::mt19937_64 rng(20240604);
  for (int t = 0; t < 50; ++t) {
    const auto in = rational_instance(rng, 6);
    const std::size_t n = in.A.rows();
    const Matrix M = in.A + in.B * in.F;
    const std::size_t best = min_unobservable_dim(M, in.m);
    for (int s = 0; s < 200; ++s) {
      const Matrix C = oracle::random_matrix(in.m, n, rng, -3, 3, 3, 0.6);
      o.expect(oracle::unobservable_dim(C, M) >= best, "instance " + num(t) + ": random C beats minimum");
    }
    const Matrix C1 = minimize_unobservable(in.A, in.B, in.F, in.m);
    o.expect(oracle::unobservable_dim(C1, M) == best, "instance " + num(t) + ": synthesised sensor misses minimum");
  }
  if (o.ok) o.detail << "50 instances x 200 C";
}

void lock_condition(Outcome& o) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(refsys::fixture("corpus")))
    if (e.path().extension() == ".json") files.push_back(e.path());
  files.push_back(refsys::fixture("diag5_loop.json"));
  files.push_back(refsys::fixture("diag5_lock.json"));
  std::sort(files.begin(), files.end());
  o.expect(files.size() >= 20, "corpus has " + num(files.size()) + " scenarios");

  std::size_t locks = 0, oscs = 0, checks = 0, amp_steps = 0;
  for (const auto& f : files) {
    const auto cfg = load_scenario(f.string()).game_config();
    const auto trace = run_game(cfg);
    const auto rep = classify_mode(trace, cfg.A, cfg.B, cfg.m);
    const auto phi = trace.phis();
    const std::size_t H = phi.size();
    const std::string tag = f.filename().string();
    if (rep.mode == Mode::lock) ++locks;
    if (rep.mode == Mode::oscillation) ++oscs;

    // lock condition at every odd epoch before the last
    for (const auto& [epoch, holds] : rep.theorem1_by_epoch) {
      if (epoch >= H) continue;
      bool constant = true;
      for (std::size_t i = epoch; i < H; ++i) constant = constant && phi[i] == phi[epoch - 1];
      o.expect(holds == constant, tag + ": epoch " + num(epoch));
      ++checks;
    }
    if (rep.mode == Mode::lock) {
      const std::size_t l = rep.onset_epoch % 2 == 1 ? rep.onset_epoch : rep.onset_epoch - 1;
      o.expect(l + 1 < H, tag + ": lock too late");
    }

    // amplitude on the oscillating tail
    if (rep.mode == Mode::oscillation) {
      for (std::size_t i = rep.onset_epoch - 1; i + 1 < H; ++i) {
        const auto& odd = trace.steps[i].actor == Actor::attacker ? trace.steps[i] : trace.steps[i + 1];
        const auto& even = trace.steps[i].actor == Actor::defender ? trace.steps[i] : trace.steps[i + 1];
        const std::size_t reach = min_unobservable_dim(cfg.A + cfg.B * odd.F, cfg.m);
        const std::size_t vdim = vstar(cfg.A, cfg.B, even.C).vstar.dim();
        const std::size_t jump = phi[i + 1] > phi[i] ? phi[i + 1] - phi[i] : phi[i] - phi[i + 1];
        o.expect(vdim >= reach && jump == vdim - reach, tag + ": amplitude at epoch " + num(i + 1));
        ++amp_steps;
      }
    }
  }
  o.expect(locks > 0 && oscs > 0, "corpus lacks a mode");
  if (o.ok)
    o.detail << files.size() << " scenarios (" << locks << " lock, " << oscs << " oscillation), "
             << checks << " epoch checks, " << amp_steps << " amplitude steps";
}

void penrose(Outcome& o) {
  std::mt19937_64 rng(20240605);
  std::size_t good = 0, deficient = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    Matrix M = oracle::random_matrix(r, c, rng, -4, 4, 5, 0.6);
    if (t % 2 == 0 && r > 1) {
      // copy a combination of rows to force rank deficiency
      M.set_block(r - 1, 0, M.row(0) * Rational(3, 2) - M.row(r / 2));
    }
    if (oracle::rank(M) < std::min(r, c)) ++deficient;
    const Matrix P = pinv(M);
    const Matrix MP = oracle::naive_mul(M, P), PM = oracle::naive_mul(P, M);
    if (oracle::naive_mul(MP, M) == M && oracle::naive_mul(PM, P) == P && MP.transpose() == MP &&
        PM.transpose() == PM)
      ++good;
  }
  o.expect(good == 100, num(good) + "/100");
  if (o.ok) o.detail << "100/100, " << deficient << " rank-deficient";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "three-block jordan pair dimensions", 1, blocks3},
      {2, "diagonal plant V* dimensions", 1, diag5_vstar},
      {3, "diagonal plant loop and epoch-2 friend", 5, diag5_loop},
      {4, "overridden first sensor locks", 5, diag5_lock},
      {5, "swap system table and zero-V* test", 1, swap4},
      {6, "block formula against direct rank", 30, block_formula},
      {7, "observability duality", 30, duality},
      {8, "defender maximality sampling", 60, maximality},
      {9, "attacker optimality sampling", 60, attacker},
      {10, "lock condition and amplitude on the corpus", 60, lock_condition},
      {11, "Moore-Penrose identities", 10, penrose},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ["
              << static_cast<long>(secs * 1000) << " ms / " << c.limit_s << " s] "
              << o.detail.str() << (in_time ? "" : " (over time limit)") << "\n";
  }
  return failed == 0 ? 0 : 1;
}
