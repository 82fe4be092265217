// SPDX-License-Identifier: Apache-2.0
#include "bcdof/dofregion.hpp"

#include "bcdof/errors.hpp"

namespace bcdof::dofregion {

namespace {

Rational q(std::size_t n) { return Rational(static_cast<unsigned long>(n)); }

void add_nonnegative_dof(Polytope& p) {
  p.add({{"d0", -1}}, 0);
  p.add({{"d1", -1}}, 0);
  p.add({{"d2", -1}}, 0);
}

Polytope project_to_dof(Polytope p) {
  while (p.dim() > 3) p = fm_eliminate(p, p.dim() - 1);
  return p;
}

// Identity map with a few overridden rows, for change_variables.
std::vector<std::vector<Rational>> identity_map(std::size_t rows, std::size_t cols) {
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows && i < cols; ++i) m[i][i] = 1;
  return m;
}

} // namespace

bool contains(const Polytope& p, const DofTriple& x, const Rational& slack) {
  return contains(p, x.point(), slack);
}

Polytope inner_lifted(const SetSizes& sizes) {
  const Rational s1 = q(sizes.s1);
  const Rational sc = q(sizes.sc);
  const Rational s2 = q(sizes.s2);
  Polytope p({"d0", "d1", "d2", "a1", "a2", "b"});
  p.add({{"d0", 1}, {"a1", 1}, {"a2", 1}, {"b", -1}}, sc);
  p.add({{"d1", 1}, {"a1", -1}, {"b", 1}}, s1);
  p.add({{"d2", 1}, {"a2", -1}, {"b", 1}}, s2);
  p.add({{"a1", -1}}, 0);
  p.add({{"a2", -1}}, 0);
  p.add({{"a1", 1}, {"a2", 1}}, sc);
  p.add({{"b", -1}}, 0);
  p.add({{"b", 1}}, s1);
  p.add({{"b", 1}}, s2);
  add_nonnegative_dof(p);
  return p;
}

Polytope outer_lifted(const SetSizes& sizes) {
  const Rational s1 = q(sizes.s1);
  const Rational sc = q(sizes.sc);
  const Rational s2 = q(sizes.s2);
  Polytope p({"d0", "d1", "d2", "eta", "delta"});
  p.add({{"d0", 1}, {"eta", -1}, {"delta", -1}}, 0);
  p.add({{"d0", 1}, {"d1", 1}}, sc + s1);
  p.add({{"d0", 1}, {"d2", 1}}, sc + s2);
  p.add({{"d0", 1}, {"d1", 1}, {"d2", 1}, {"eta", 1}}, s1 + s2 + sc);
  p.add({{"eta", -1}}, 0);
  p.add({{"eta", 1}}, s1);
  p.add({{"eta", 1}}, s2);
  p.add({{"delta", -1}}, 0);
  p.add({{"delta", 1}}, sc);
  add_nonnegative_dof(p);
  return p;
}

Polytope inner_region(const SetSizes& sizes) { return project_to_dof(inner_lifted(sizes)); }

Polytope outer_region(const SetSizes& sizes) { return project_to_dof(outer_lifted(sizes)); }

ReplayStages replay_equivalence_chain() {
  ReplayStages st;

  Polytope& th = st.lifted;
  th = Polytope({"d0", "d1", "d2", "a1", "a2", "b", "S1", "Sc", "S2"});
  th.add({{"d0", 1}, {"a1", 1}, {"a2", 1}, {"b", -1}, {"Sc", -1}}, 0);
  th.add({{"d1", 1}, {"a1", -1}, {"b", 1}, {"S1", -1}}, 0);
  th.add({{"d2", 1}, {"a2", -1}, {"b", 1}, {"S2", -1}}, 0);
  th.add({{"a1", -1}}, 0);
  th.add({{"a2", -1}}, 0);
  th.add({{"a1", 1}, {"a2", 1}, {"Sc", -1}}, 0);
  th.add({{"b", -1}}, 0);
  th.add({{"b", 1}, {"S1", -1}}, 0);
  th.add({{"b", 1}, {"S2", -1}}, 0);

  // a1 = alpha - a2; every other coordinate maps to itself.
  auto sub = identity_map(9, 9);
  sub[3] = {0, 0, 0, 1, -1, 0, 0, 0, 0};
  st.substituted = change_variables(th, sub, {"d0", "d1", "d2", "alpha", "a2", "b", "S1", "Sc", "S2"});

  st.alpha2_gone = fm_combine(st.substituted, st.substituted.index_of("a2"));

  // d0 = d0' + t1 + t2, d1 = d1' - t1, d2 = d2' - t2 over (d0' d1' d2' t1 t2 alpha b S1 Sc S2).
  std::vector<std::vector<Rational>> lift(8, std::vector<Rational>(10));
  lift[0] = {1, 0, 0, 1, 1, 0, 0, 0, 0, 0};
  lift[1] = {0, 1, 0, -1, 0, 0, 0, 0, 0, 0};
  lift[2] = {0, 0, 1, 0, -1, 0, 0, 0, 0, 0};
  for (std::size_t i = 3; i < 8; ++i) lift[i][i + 2] = 1;
  st.shifted = change_variables(st.alpha2_gone, lift,
                                {"d0", "d1", "d2", "t1", "t2", "alpha", "b", "S1", "Sc", "S2"});
  st.shifted.add({{"t1", -1}}, 0);
  st.shifted.add({{"t2", -1}}, 0);

  st.t1_gone = fm_combine(st.shifted, st.shifted.index_of("t1"));
  st.t2_gone = fm_combine(st.t1_gone, st.t1_gone.index_of("t2"));
  st.reduced = remove_redundant(st.t2_gone);

  Polytope out({"d0", "d1", "d2", "eta", "delta", "S1", "Sc", "S2"});
  out.add({{"d0", 1}, {"eta", -1}, {"delta", -1}}, 0);
  out.add({{"d0", 1}, {"d1", 1}, {"Sc", -1}, {"S1", -1}}, 0);
  out.add({{"d0", 1}, {"d2", 1}, {"Sc", -1}, {"S2", -1}}, 0);
  out.add({{"d0", 1}, {"d1", 1}, {"d2", 1}, {"eta", 1}, {"S1", -1}, {"S2", -1}, {"Sc", -1}}, 0);
  out.add({{"eta", -1}}, 0);
  out.add({{"eta", 1}, {"S1", -1}}, 0);
  out.add({{"eta", 1}, {"S2", -1}}, 0);
  out.add({{"delta", -1}}, 0);
  out.add({{"delta", 1}, {"Sc", -1}}, 0);
  // eta = b, delta = Sc - alpha over (d0 d1 d2 alpha b S1 Sc S2).
  std::vector<std::vector<Rational>> sub_out(8, std::vector<Rational>(8));
  sub_out[0][0] = sub_out[1][1] = sub_out[2][2] = 1;
  sub_out[3][4] = 1;
  sub_out[4][3] = -1;
  sub_out[4][6] = 1;
  sub_out[5][5] = sub_out[6][6] = sub_out[7][7] = 1;
  st.outer = change_variables(out, sub_out, {"d0", "d1", "d2", "alpha", "b", "S1", "Sc", "S2"});
  return st;
}

} // namespace bcdof::dofregion
