// SPDX-License-Identifier: Apache-2.0
//
// H-represented polyhedra over exact rationals: Fourier-Motzkin projection,
// LP-certified redundancy removal, and vertex enumeration for low dimension.
#pragma once

#include "bcdof/rational.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bcdof::dofregion {

using Point = std::vector<Rational>;

/// coeffs . x <= rhs
struct Inequality {
  std::vector<Rational> coeffs;
  Rational rhs;

  friend bool operator==(const Inequality&, const Inequality&) = default;
};

/// Positive rescaling that makes the coefficient vector a primitive integer vector.
/// All-zero rows are returned unchanged.
Inequality canonical(const Inequality& row);

class Polytope {
public:
  Polytope() = default;
  /// The whole space over the given coordinates.
  explicit Polytope(std::vector<std::string> labels);

  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Inequality>& inequalities() const { return rows_; }

  /// Index of a coordinate label; throws std::out_of_range.
  std::size_t index_of(const std::string& label) const;

  void add(Inequality row);
  /// sum(coef * label) <= rhs
  void add(const std::vector<std::pair<std::string, Rational>>& terms, const Rational& rhs);

private:
  std::vector<std::string> labels_;
  std::vector<Inequality> rows_;
};

/// Pairwise combination step only; no redundancy removal. The eliminated
/// coordinate is dropped from the result.
Polytope fm_combine(const Polytope& p, std::size_t var);

/// Exact projection eliminating coordinate `var`, followed by remove_redundant.
Polytope fm_eliminate(const Polytope& p, std::size_t var);
Polytope fm_eliminate(const Polytope& p, const std::string& label);

/// Drops every inequality implied by the remaining ones (each drop certified by an
/// exact LP). Infeasible systems collapse to the single row 0 <= -1.
Polytope remove_redundant(const Polytope& p);

bool is_empty(const Polytope& p);

/// Whether every point of `p` satisfies `row`.
bool implies(const Polytope& p, const Inequality& row);

/// Set equality by mutual implication; valid for unbounded polyhedra as well.
bool same_set(const Polytope& a, const Polytope& b);

/// Same canonical inequalities, ignoring order and duplicates.
bool same_system(const Polytope& a, const Polytope& b);

/// Basic feasible solutions of a polytope with dim <= 4 (ContractViolation otherwise).
std::set<Point> vertices(const Polytope& p);

/// a . x <= b + slack for every row.
bool contains(const Polytope& p, const Point& x, const Rational& slack = 0);

/// Vertex sets coincide and each polytope contains the other's vertices.
/// Meant for bounded polytopes with matching coordinates.
bool regions_equal(const Polytope& a, const Polytope& b);

/// Substitute old_x[i] = sum_j map[i][j] * new_x[j].
Polytope change_variables(const Polytope& p, const std::vector<std::vector<Rational>>& map,
                          std::vector<std::string> new_labels);

nlohmann::json to_json(const Polytope& p, bool with_vertices = false);
Polytope polytope_from_json(const nlohmann::json& j);

} // namespace bcdof::dofregion
