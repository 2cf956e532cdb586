#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obsgame/game.hpp"
#include "obsgame/matrix.hpp"

namespace obsgame {

struct Scenario {
  std::string name;
  std::optional<Matrix> A, B, F0, C;
  std::optional<Matrix> A0, B1, B2, C0;
  std::optional<std::size_t> m;
  Depth depth = Depth::one_step;
  std::size_t horizon = 20;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  bool sticky = true;
  std::vector<std::pair<std::size_t, Matrix>> overrides;

  // Attacker output count: explicit m, else rows of C, else 1.
  std::size_t outputs() const;
  // Throws ShapeMismatch when A or B is missing.
  GameConfig game_config() const;
};

// Matrix literal: array of rows, entries as integers, "p/q" strings or decimals.
Matrix parse_matrix_literal(const std::string& text);

// Throws ParseError carrying line/column for malformed JSON.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
Matrix load_matrix(const std::string& path);

std::string to_json(const Scenario& s);

}  // namespace obsgame
