// Writes a seeded corpus of game scenarios with a mix of lock and
// oscillation outcomes. Scenarios whose closed loops leave the rational
// spectrum class, or whose traces stay inconclusive, are skipped.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "obsgame/errors.hpp"
#include "obsgame/game.hpp"
#include "obsgame/jordan.hpp"
#include "obsgame/scenario.hpp"

using namespace obsgame;

namespace {

// Diagonal plant with repeated eigenvalues, optionally with one Jordan chain,
// in lightly mixed coordinates.
Matrix structured_plant(std::size_t n, std::mt19937_64& rng) {
  static const Rational pool[] = {Rational(3, 10), Rational(1, 10), Rational(1, 5), Rational(-1, 2),
                                  Rational(1), Rational(0)};
  std::uniform_int_distribution<std::size_t> pick(0, 2 + rng() % 3);
  Matrix J(n, n);
  for (std::size_t i = 0; i < n; ++i) J(i, i) = pool[pick(rng)];
  if (rng() % 3 == 0) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (J(i, i) == J(i + 1, i + 1)) {
        J(i, i + 1) = 1;
        break;
      }
    }
  }
  if (rng() % 2 == 0) return J;
  Matrix P = Matrix::identity(n);
  for (int t = 0; t < 2; ++t) {
    const std::size_t i = rng() % n, j = rng() % n;
    if (i != j) P(i, j) = Rational(static_cast<std::int64_t>(rng() % 3) - 1);
  }
  return P * J * inverse(P);
}

Matrix sparse_01(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix M(r, c);
  for (std::size_t j = 0; j < c; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < r; ++i) {
      if (rng() % 3 == 0) {
        M(i, j) = 1;
        any = true;
      }
    }
    if (!any) M(rng() % r, j) = 1;
  }
  return M;
}

std::size_t max_bits(const GameTrace& trace) {
  std::size_t bits = 0;
  for (const auto& st : trace.steps) {
    for (const Matrix* M : {&st.C, &st.F}) {
      for (const auto& x : M->entries()) {
        bits = std::max(bits, mpz_sizeinbase(x.numerator().get_mpz_t(), 2));
        bits = std::max(bits, mpz_sizeinbase(x.denominator().get_mpz_t(), 2));
      }
    }
  }
  return bits;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate a seeded scenario corpus"};
  std::string outdir;
  std::uint64_t seed = 1;
  std::size_t per_mode = 12;
  app.add_option("outdir", outdir, "directory to write *.json into")->required();
  app.add_option("--seed", seed, "generator seed");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "log every attempt");
  app.add_option("--per-mode", per_mode, "scenarios wanted for each of lock and oscillation");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(outdir);
  std::mt19937_64 rng(seed);
  std::size_t locks = 0, oscs = 0, tries = 0;
  while ((locks < per_mode || oscs < per_mode) && tries < 20000) {
    ++tries;
    Scenario s;
    const std::size_t n = 3 + rng() % 4;
    s.A = structured_plant(n, rng);
    s.B = sparse_01(n, 1 + rng() % 2, rng);
    s.m = 1 + rng() % 2;
    s.F0 = Matrix(s.B->cols(), n);
    s.horizon = 16;
    s.seed = rng() % 1000;
    if (rng() % 4 == 0) {
      s.depth = Depth::two_step;
      s.budget = 4;
    }
    ModeReport rep;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      // Grow the horizon gradually; strategies whose entries blow up make
      // later epochs expensive and are not useful as fixtures.
      auto cfg = s.game_config();
      bool tame = true;
      GameTrace trace;
      for (std::size_t h = 2; h <= s.horizon && tame; h += 2) {
        cfg.horizon = h;
        trace = run_game(cfg);
        tame = max_bits(trace) <= 40;
      }
      if (!tame) {
        if (verbose) std::cerr << tries << " skipped: entry growth\n";
        continue;
      }
      rep = classify_mode(trace, cfg.A, cfg.B, cfg.m);
    } catch (const Error& e) {
      if (verbose) std::cerr << tries << " error " << e.what() << "\n";
      continue;
    }
    if (verbose) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0);
      std::cerr << tries << " n=" << n << " " << to_string(rep.mode) << " " << ms.count() << "ms\n";
    }
    std::string tag;
    if (rep.mode == Mode::lock && locks < per_mode) {
      tag = "lock";
      ++locks;
    } else if (rep.mode == Mode::oscillation && oscs < per_mode) {
      tag = "osc";
      ++oscs;
    } else {
      continue;
    }
    const std::size_t idx = tag == "lock" ? locks : oscs;
    s.name = "corpus_" + tag + "_" + (idx < 10 ? "0" : "") + std::to_string(idx);
    std::ofstream(std::filesystem::path(outdir) / (s.name + ".json")) << to_json(s) << "\n";
  }
  std::cout << "lock=" << locks << " oscillation=" << oscs << " tries=" << tries << "\n";
  return locks == per_mode && oscs == per_mode ? 0 : 1;
}
