#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "obsgame/matrix.hpp"

namespace obsgame {

enum class Actor { attacker, defender };
enum class Depth { one_step, two_step };
enum class Mode { lock, oscillation, inconclusive };

std::string to_string(Actor a);
std::string to_string(Depth d);
std::string to_string(Mode m);

struct GameConfig {
  Matrix A;
  Matrix B;
  std::size_t m = 1;
  Matrix F0;
  std::size_t horizon = 1;
  Depth depth = Depth::one_step;
  std::map<std::size_t, Matrix> overrides;  // epoch -> forced strategy
  std::size_t search_budget = 0;
  std::uint64_t seed = 0;
  // Players keep an incumbent strategy that is still a best response.
  bool sticky = true;

  // Throws ShapeMismatch on inconsistent shapes.
  void validate() const;
};

struct GameStep {
  std::size_t epoch = 0;
  Actor actor = Actor::attacker;
  Matrix strategy;  // what the actor played
  Matrix C;         // strategies in force after the step
  Matrix F;
  std::size_t phi = 0;
  std::size_t dim_vstar = 0;
  std::optional<std::size_t> max_geo_mult;  // of A + B F; absent for non-rational spectra
};

struct GameTrace {
  std::vector<GameStep> steps;
  std::vector<std::size_t> phis() const;
};

struct ModeReport {
  Mode mode = Mode::inconclusive;
  std::size_t onset_epoch = 0;
  std::size_t amplitude = 0;
  std::optional<std::size_t> loop_period;
  bool theorem1_holds = false;
  bool theorem2_holds = false;
  bool lemma5_holds = false;
  bool corollary2_holds = false;
  bool zero_friend_all_tail = false;  // 0 is a friend at every defender epoch of the tail
  bool zero_friend_any_tail = false;
  // (odd epoch l, Phi_l == dim V*(C_l))
  std::vector<std::pair<std::size_t, bool>> theorem1_by_epoch;
};

struct AttackerResponse {
  Matrix C;
  std::vector<Matrix> candidates;
};

AttackerResponse br1_attacker(const Matrix& A, const Matrix& B, const Matrix& F, std::size_t m,
                              const std::optional<Matrix>& current_C = std::nullopt);
Matrix br1_defender(const Matrix& A, const Matrix& B, const Matrix& C,
                    const std::optional<Matrix>& current_F = std::nullopt);
Matrix br2_attacker(const Matrix& A, const Matrix& B, const Matrix& F, std::size_t m,
                    const std::optional<Matrix>& current_C = std::nullopt);
// Scores friends by the attacker's best reachable value min_unobservable_dim(A+BF, m).
Matrix br2_defender(const Matrix& A, const Matrix& B, const Matrix& C,
                    const std::optional<Matrix>& current_F, std::size_t budget, std::size_t m,
                    std::uint64_t seed);

GameTrace run_game(const GameConfig& cfg);
ModeReport classify_mode(const GameTrace& trace, const Matrix& A, const Matrix& B, std::size_t m);

bool theorem2_check(const Matrix& A, const Matrix& B, const Matrix& C);

struct StackelbergReport {
  std::size_t br2x_value = 0;  // min dim V*(C) over the family plus random C
  std::size_t br2a_value = 0;  // min dim V*(C) over the BR1_a family at F0
  std::size_t br1a_value = 0;  // min dim Ker Omega(C, F0)
  bool ordering_holds = false;  // br2x <= br2a
  bool lemma4_holds = false;    // br2x >= br1a
  std::size_t defender_samples = 0;
  bool defender_agreement = false;  // argmax_F Phi  <=>  friend of V*
  std::size_t attacker_samples = 0;
  bool attacker_agreement = false;  // argmin_C Phi  <=>  BR1_a membership
};

StackelbergReport stackelberg_compare(const Matrix& A, const Matrix& B, std::size_t m,
                                      const Matrix& F0, std::size_t budget, std::uint64_t seed);

// Sparse matrix with small rational entries.
Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                     double density = 0.5, int max_num = 3, int max_den = 3);

}  // namespace obsgame
