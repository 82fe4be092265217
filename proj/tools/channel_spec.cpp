// SPDX-License-Identifier: Apache-2.0
#include "channel_spec.hpp"

#include "bcdof/random.hpp"

#include <cmath>

namespace bcdof::cli {

namespace {

Matrix matrix_from_json(const nlohmann::json& j, const char* name) {
  const std::string where = std::string("'") + name + "'";
  if (!j.is_array() || j.empty()) throw ValidationError(where + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.empty()) throw ValidationError(where + " row " + std::to_string(i) + " is not a non-empty array");
    if (i == 0) cols = row.size();
    if (row.size() != cols) {
      throw ValidationError(where + " is not rectangular: row " + std::to_string(i) + " has " +
                            std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    }
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& v = j[i][c];
      if (!v.is_number()) throw ValidationError(where + " entry (" + std::to_string(i) + "," + std::to_string(c) + ") is not a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v.get<double>();
    }
  }
  return m;
}

bool same_matrix(const std::optional<Matrix>& a, const std::optional<Matrix>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->rows() == b->rows() && a->cols() == b->cols() && *a == *b;
}

} // namespace

nlohmann::json matrix_to_json(const Matrix& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

bool operator==(const ChannelSpec& a, const ChannelSpec& b) {
  return same_matrix(a.h1, b.h1) && same_matrix(a.h2, b.h2) && a.power == b.power && a.seed == b.seed &&
         a.dims == b.dims;
}

nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = std::min(e.byte == 0 ? std::size_t{0} : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + e.what(),
                     line, column);
  }
}

ChannelSpec channel_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("channel spec must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "h1" && key != "h2" && key != "power" && key != "seed" && key != "dims") {
      throw ValidationError("unknown channel spec field '" + key + "'");
    }
  }
  ChannelSpec spec;
  if (j.contains("h1")) spec.h1 = matrix_from_json(j.at("h1"), "h1");
  if (j.contains("h2")) spec.h2 = matrix_from_json(j.at("h2"), "h2");
  if (j.contains("power")) {
    if (!j.at("power").is_number()) throw ValidationError("'power' must be a number");
    spec.power = j.at("power").get<double>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ValidationError("'seed' must be a non-negative integer");
    spec.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("dims")) {
    const auto& d = j.at("dims");
    if (!d.is_array() || d.size() != 3) throw ValidationError("'dims' must be [t, r1, r2]");
    std::array<std::size_t, 3> dims{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!d[i].is_number_unsigned()) throw ValidationError("'dims' entries must be non-negative integers");
      dims[i] = d[i].get<std::size_t>();
    }
    spec.dims = dims;
  }
  validate(spec);
  return spec;
}

ChannelSpec parse_channel_spec(const std::string& text) { return channel_spec_from_json(parse_json_text(text)); }

nlohmann::json to_json(const ChannelSpec& spec) {
  nlohmann::json j;
  if (spec.h1) j["h1"] = matrix_to_json(*spec.h1);
  if (spec.h2) j["h2"] = matrix_to_json(*spec.h2);
  j["power"] = spec.power;
  if (spec.seed) j["seed"] = *spec.seed;
  if (spec.dims) j["dims"] = *spec.dims;
  return j;
}

void validate(const ChannelSpec& spec) {
  const bool explicit_matrices = spec.h1 || spec.h2;
  const bool generated = spec.dims || spec.seed;
  if (explicit_matrices == generated) {
    throw ValidationError("channel spec needs exactly one of {h1, h2} or {dims, seed}");
  }
  if (!(spec.power > 0) || !std::isfinite(spec.power)) throw ValidationError("'power' must be finite and positive");
  if (explicit_matrices) {
    if (!spec.h1 || !spec.h2) throw ValidationError("both 'h1' and 'h2' are required");
    if (spec.h1->cols() != spec.h2->cols()) {
      throw ValidationError("dimension mismatch: h1 has " + std::to_string(spec.h1->cols()) +
                            " columns, h2 has " + std::to_string(spec.h2->cols()));
    }
    if (!spec.h1->allFinite() || !spec.h2->allFinite()) throw ValidationError("channel matrices must be finite");
  } else {
    if (!spec.dims || !spec.seed) throw ValidationError("generated channels need both 'dims' and 'seed'");
    for (std::size_t d : *spec.dims) {
      if (d == 0) throw ValidationError("'dims' entries must be positive");
    }
  }
}

channel::MimoBcChannel materialize(const ChannelSpec& spec) {
  validate(spec);
  if (spec.h1) return {*spec.h1, *spec.h2, spec.power};
  const auto& d = *spec.dims;
  return random_channel(d[0], d[1], d[2], *spec.seed, spec.power);
}

} // namespace bcdof::cli
