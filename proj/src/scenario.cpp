#include "obsgame/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "obsgame/errors.hpp"

namespace obsgame {

namespace {

using json = nlohmann::ordered_json;

Rational parse_entry(const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Rational::parse(std::to_string(v.get<std::uint64_t>()));
    return Rational(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    // shortest round-trip text, then read as an exact decimal
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return Rational::parse(std::string(buf, res.ptr));
  }
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": matrix entries must be numbers or strings");
}

Matrix parse_matrix(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": matrix must be an array of rows");
  if (v.empty()) return Matrix();
  const bool flat = !v.front().is_array();
  if (flat) throw ParseError(where + ": matrix rows must be arrays");
  const std::size_t cols = v.front().size();
  Matrix M(v.size(), cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      throw ParseError(where + ": row " + std::to_string(i + 1) + " has the wrong length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      M(i, j) = parse_entry(v[i][j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return M;
}

json matrix_json(const Matrix& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) r.push_back(M(i, j).to_string());
    rows.push_back(std::move(r));
  }
  return rows;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col > 1 ? col - 1 : 1};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }
}

std::size_t get_count(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ParseError(std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::size_t Scenario::outputs() const {
  if (m) return *m;
  if (C) return C->rows();
  return 1;
}

GameConfig Scenario::game_config() const {
  if (!A || !B) throw ShapeMismatch("scenario needs A and B to run the game");
  GameConfig cfg;
  cfg.A = *A;
  cfg.B = *B;
  cfg.m = outputs();
  cfg.F0 = F0 ? *F0 : Matrix(B->cols(), A->cols());
  cfg.horizon = horizon;
  cfg.depth = depth;
  cfg.search_budget = budget;
  cfg.seed = seed;
  cfg.sticky = sticky;
  for (const auto& [epoch, M] : overrides) cfg.overrides[epoch] = M;
  return cfg;
}

Matrix parse_matrix_literal(const std::string& text) { return parse_matrix(parse_json(text), "matrix"); }

Scenario parse_scenario(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object", 1, 1);
  Scenario s;
  for (const auto& [key, v] : doc.items()) {
    if (key == "name") {
      if (!v.is_string()) throw ParseError("name must be a string");
      s.name = v.get<std::string>();
    } else if (key == "A") s.A = parse_matrix(v, key);
    else if (key == "B") s.B = parse_matrix(v, key);
    else if (key == "F0") s.F0 = parse_matrix(v, key);
    else if (key == "C") s.C = parse_matrix(v, key);
    else if (key == "A0") s.A0 = parse_matrix(v, key);
    else if (key == "B1") s.B1 = parse_matrix(v, key);
    else if (key == "B2") s.B2 = parse_matrix(v, key);
    else if (key == "C0") s.C0 = parse_matrix(v, key);
    else if (key == "m") s.m = get_count(v, "m");
    else if (key == "horizon") s.horizon = get_count(v, "horizon");
    else if (key == "budget") s.budget = get_count(v, "budget");
    else if (key == "seed") {
      if (!v.is_number_integer()) throw ParseError("seed must be an integer");
      s.seed = v.is_number_unsigned() ? v.get<std::uint64_t>()
                                      : static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else if (key == "sticky") {
      if (!v.is_boolean()) throw ParseError("sticky must be true or false");
      s.sticky = v.get<bool>();
    } else if (key == "depth") {
      const auto d = v.is_string() ? v.get<std::string>() : std::string();
      if (d == "one-step") s.depth = Depth::one_step;
      else if (d == "two-step") s.depth = Depth::two_step;
      else throw ParseError("depth must be \"one-step\" or \"two-step\"");
    } else if (key == "overrides") {
      if (!v.is_array()) throw ParseError("overrides must be an array");
      for (const auto& o : v) {
        if (!o.is_object() || !o.contains("epoch") || !o.contains("matrix")) {
          throw ParseError("each override needs epoch and matrix");
        }
        s.overrides.emplace_back(get_count(o["epoch"], "epoch"), parse_matrix(o["matrix"], "override"));
      }
    } else {
      throw ParseError("unknown scenario field '" + key + "'");
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
}

Matrix load_matrix(const std::string& path) {
  try {
    return parse_matrix_literal(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
}

std::string to_json(const Scenario& s) {
  json doc = json::object();
  doc["name"] = s.name;
  auto put = [&](const char* key, const std::optional<Matrix>& M) {
    if (M) doc[key] = matrix_json(*M);
  };
  put("A", s.A);
  put("B", s.B);
  put("F0", s.F0);
  put("C", s.C);
  put("A0", s.A0);
  put("B1", s.B1);
  put("B2", s.B2);
  put("C0", s.C0);
  if (s.m) doc["m"] = *s.m;
  doc["depth"] = to_string(s.depth);
  doc["horizon"] = s.horizon;
  doc["seed"] = s.seed;
  doc["budget"] = s.budget;
  doc["sticky"] = s.sticky;
  if (!s.overrides.empty()) {
    json arr = json::array();
    for (const auto& [epoch, M] : s.overrides) arr.push_back({{"epoch", epoch}, {"matrix", matrix_json(M)}});
    doc["overrides"] = std::move(arr);
  }
  return doc.dump(2);
}

}  // namespace obsgame
