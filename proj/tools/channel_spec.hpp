// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "bcdof/channel.hpp"
#include "bcdof/errors.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace bcdof::cli {

/// Malformed JSON text; carries the 1-based position of the failure.
class ParseError : public ValidationError {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : ValidationError(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Either explicit matrices or generation dimensions plus a seed.
struct ChannelSpec {
  std::optional<Matrix> h1;
  std::optional<Matrix> h2;
  double power = 1.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::array<std::size_t, 3>> dims; ///< (t, r1, r2)

};

bool operator==(const ChannelSpec& a, const ChannelSpec& b);

/// Throws ParseError for malformed JSON and ValidationError for a well-formed but invalid spec.
ChannelSpec parse_channel_spec(const std::string& text);
ChannelSpec channel_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ChannelSpec& spec);

/// Throws ValidationError unless exactly one source is given and the matrices are conformable.
void validate(const ChannelSpec& spec);

/// Explicit matrices, or a channel drawn from GaussianSource(seed).
channel::MimoBcChannel materialize(const ChannelSpec& spec);

nlohmann::json matrix_to_json(const Matrix& m);

/// Parse JSON text, reporting failures as ParseError with line and column.
nlohmann::json parse_json_text(const std::string& text);

} // namespace bcdof::cli
