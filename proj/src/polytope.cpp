// SPDX-License-Identifier: Apache-2.0
#include "bcdof/polytope.hpp"

#include "bcdof/errors.hpp"
#include "bcdof/lp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bcdof::dofregion {

namespace {

bool all_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Inequality contradiction(std::size_t dim) { return {std::vector<Rational>(dim), Rational(-1)}; }

Polytope empty_like(const Polytope& p) {
  Polytope out(p.labels());
  out.add(contradiction(p.dim()));
  return out;
}

void split_rows(const std::vector<Inequality>& rows, std::vector<std::vector<Rational>>& a,
                std::vector<Rational>& b) {
  a.clear();
  b.clear();
  for (const auto& r : rows) {
    a.push_back(r.coeffs);
    b.push_back(r.rhs);
  }
}

bool rows_imply(const std::vector<Inequality>& rows, const Inequality& target) {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  split_rows(rows, a, b);
  const lp::Result r = lp::maximize(target.coeffs, a, b);
  if (r.status == lp::Status::infeasible) return true;
  if (r.status == lp::Status::unbounded) return false;
  return r.value <= target.rhs;
}

// Exact solve of a square system; nullopt when singular.
std::optional<Point> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(a[i][col]) == 0) continue;
      const Rational f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  Point x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

} // namespace

Inequality canonical(const Inequality& row) {
  if (all_zero(row.coeffs)) return row;
  mpz_class lcm_den = 1;
  for (const auto& q : row.coeffs) lcm_den = lcm(lcm_den, mpz_class(q.get_den()));
  mpz_class g = 0;
  for (const auto& q : row.coeffs) g = gcd(g, mpz_class(q.get_num() * (lcm_den / q.get_den())));
  const Rational scale(lcm_den, g);
  Inequality out;
  out.coeffs.reserve(row.coeffs.size());
  for (const auto& q : row.coeffs) {
    Rational v = q * scale;
    v.canonicalize();
    out.coeffs.push_back(v);
  }
  out.rhs = row.rhs * scale;
  out.rhs.canonicalize();
  return out;
}

Polytope::Polytope(std::vector<std::string> labels) : labels_(std::move(labels)) {}

std::size_t Polytope::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown coordinate '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

void Polytope::add(Inequality row) {
  if (row.coeffs.size() != dim()) {
    throw ContractViolation("inequality has " + std::to_string(row.coeffs.size()) +
                            " coefficients, polytope dimension is " + std::to_string(dim()));
  }
  rows_.push_back(std::move(row));
}

void Polytope::add(const std::vector<std::pair<std::string, Rational>>& terms, const Rational& rhs) {
  Inequality row{std::vector<Rational>(dim()), rhs};
  for (const auto& [label, coef] : terms) row.coeffs[index_of(label)] += coef;
  add(std::move(row));
}

Polytope fm_combine(const Polytope& p, std::size_t var) {
  if (var >= p.dim()) throw ContractViolation("fm_combine: coordinate index out of range");
  std::vector<std::string> labels = p.labels();
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(var));
  const std::size_t dim = labels.size();
  const auto drop = [var](std::vector<Rational> v) {
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(var));
    return v;
  };
  std::vector<const Inequality*> pos;
  std::vector<const Inequality*> neg;
  Polytope out(std::move(labels));
  const auto keep = [&](Inequality row) {
    row = canonical(row);
    if (all_zero(row.coeffs)) {
      if (sgn(row.rhs) >= 0) return;
      row = contradiction(dim);
    }
    for (const auto& r : out.inequalities()) {
      if (r == row) return;
    }
    out.add(std::move(row));
  };
  for (const auto& row : p.inequalities()) {
    const int s = sgn(row.coeffs[var]);
    if (s > 0) {
      pos.push_back(&row);
    } else if (s < 0) {
      neg.push_back(&row);
    } else {
      keep({drop(row.coeffs), row.rhs});
    }
  }
  for (const Inequality* up : pos) {
    for (const Inequality* down : neg) {
      const Rational wu = -down->coeffs[var];
      const Rational wd = up->coeffs[var];
      Inequality comb{std::vector<Rational>(p.dim()), wu * up->rhs + wd * down->rhs};
      for (std::size_t j = 0; j < p.dim(); ++j) comb.coeffs[j] = wu * up->coeffs[j] + wd * down->coeffs[j];
      keep({drop(std::move(comb.coeffs)), comb.rhs});
    }
  }
  return out;
}

Polytope fm_eliminate(const Polytope& p, std::size_t var) { return remove_redundant(fm_combine(p, var)); }

Polytope fm_eliminate(const Polytope& p, const std::string& label) { return fm_eliminate(p, p.index_of(label)); }

Polytope remove_redundant(const Polytope& p) {
  // Tightest right-hand side per canonical direction, first-occurrence order.
  std::vector<Inequality> rows;
  std::map<std::vector<Rational>, std::size_t> seen;
  for (const auto& raw : p.inequalities()) {
    Inequality row = canonical(raw);
    if (all_zero(row.coeffs)) {
      if (sgn(row.rhs) < 0) return empty_like(p);
      continue;
    }
    const auto it = seen.find(row.coeffs);
    if (it == seen.end()) {
      seen.emplace(row.coeffs, rows.size());
      rows.push_back(std::move(row));
    } else if (row.rhs < rows[it->second].rhs) {
      rows[it->second].rhs = row.rhs;
    }
  }
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  split_rows(rows, a, b);
  if (!lp::feasible(p.dim(), a, b)) return empty_like(p);

  std::vector<bool> alive(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Inequality> others;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j != i && alive[j]) others.push_back(rows[j]);
    }
    if (rows_imply(others, rows[i])) alive[i] = false;
  }
  Polytope out(p.labels());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (alive[i]) out.add(rows[i]);
  }
  return out;
}

bool is_empty(const Polytope& p) {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  split_rows(p.inequalities(), a, b);
  return !lp::feasible(p.dim(), a, b);
}

bool implies(const Polytope& p, const Inequality& row) {
  if (row.coeffs.size() != p.dim()) throw ContractViolation("implies: dimension mismatch");
  return rows_imply(p.inequalities(), row);
}

bool same_set(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim()) throw ContractViolation("same_set: dimension mismatch");
  const auto covers = [](const Polytope& x, const Polytope& y) {
    return std::all_of(y.inequalities().begin(), y.inequalities().end(),
                       [&](const Inequality& r) { return implies(x, r); });
  };
  return covers(a, b) && covers(b, a);
}

bool same_system(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim()) return false;
  const auto rowset = [](const Polytope& p) {
    std::set<std::pair<std::vector<Rational>, Rational>> s;
    for (const auto& r : p.inequalities()) {
      const Inequality c = canonical(r);
      s.emplace(c.coeffs, c.rhs);
    }
    return s;
  };
  return rowset(a) == rowset(b);
}

std::set<Point> vertices(const Polytope& p) {
  const std::size_t n = p.dim();
  if (n > 4) throw ContractViolation("vertices: enumeration is limited to dimension <= 4");
  std::set<Point> out;
  if (n == 0) {
    if (!is_empty(p)) out.insert(Point{});
    return out;
  }
  const auto& rows = p.inequalities();
  const std::size_t m = rows.size();
  if (m < n) return out;
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (std::size_t i : pick) {
      a.push_back(rows[i].coeffs);
      b.push_back(rows[i].rhs);
    }
    if (auto x = solve_square(std::move(a), std::move(b)); x && contains(p, *x)) out.insert(std::move(*x));
    // next combination
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == m - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

bool contains(const Polytope& p, const Point& x, const Rational& slack) {
  if (x.size() != p.dim()) throw ContractViolation("contains: point dimension mismatch");
  for (const auto& row : p.inequalities()) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    if (lhs > row.rhs + slack) return false;
  }
  return true;
}

bool regions_equal(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim()) throw ContractViolation("regions_equal: dimension mismatch");
  const auto va = vertices(a);
  const auto vb = vertices(b);
  if (va != vb) return false;
  for (const auto& v : va) {
    if (!contains(b, v)) return false;
  }
  for (const auto& v : vb) {
    if (!contains(a, v)) return false;
  }
  return true;
}

Polytope change_variables(const Polytope& p, const std::vector<std::vector<Rational>>& map,
                          std::vector<std::string> new_labels) {
  if (map.size() != p.dim()) throw ContractViolation("change_variables: map needs one row per old coordinate");
  const std::size_t n = new_labels.size();
  for (const auto& r : map) {
    if (r.size() != n) throw ContractViolation("change_variables: map row length must match new labels");
  }
  Polytope out(std::move(new_labels));
  for (const auto& row : p.inequalities()) {
    Inequality t{std::vector<Rational>(n), row.rhs};
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (sgn(row.coeffs[i]) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) t.coeffs[j] += row.coeffs[i] * map[i][j];
    }
    out.add(std::move(t));
  }
  return out;
}

nlohmann::json to_json(const Polytope& p, bool with_vertices) {
  nlohmann::json j;
  j["dim"] = p.dim();
  j["labels"] = p.labels();
  auto rows = nlohmann::json::array();
  for (const auto& r : p.inequalities()) {
    auto coeffs = nlohmann::json::array();
    for (const auto& q : r.coeffs) coeffs.push_back(to_string(q));
    rows.push_back({{"coeffs", coeffs}, {"rhs", to_string(r.rhs)}});
  }
  j["inequalities"] = rows;
  if (with_vertices) {
    auto vs = nlohmann::json::array();
    for (const auto& v : vertices(p)) {
      auto pt = nlohmann::json::array();
      for (const auto& q : v) pt.push_back(to_string(q));
      vs.push_back(pt);
    }
    j["vertices"] = vs;
  }
  return j;
}

namespace {

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) return from_double(v.get<double>());
  throw ValidationError("expected a rational (string or number)");
}

} // namespace

Polytope polytope_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("inequalities")) {
    throw ValidationError("polytope needs 'labels' and 'inequalities'");
  }
  Polytope p(j.at("labels").get<std::vector<std::string>>());
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != p.dim()) {
    throw ValidationError("polytope 'dim' does not match the number of labels");
  }
  for (const auto& row : j.at("inequalities")) {
    Inequality ineq;
    for (const auto& c : row.at("coeffs")) ineq.coeffs.push_back(rational_from_json(c));
    ineq.rhs = rational_from_json(row.at("rhs"));
    if (ineq.coeffs.size() != p.dim()) throw ValidationError("inequality length does not match 'dim'");
    p.add(std::move(ineq));
  }
  return p;
}

} // namespace bcdof::dofregion
