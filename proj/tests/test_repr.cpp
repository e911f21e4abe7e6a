#include "doctest.h"
#include "gaudin/repr.hpp"
#include "oracles.hpp"

using namespace gaudin;

namespace {

Partition P(std::vector<int> parts) { return Partition(std::move(parts)); }

void check_module_invariants(const IrreducibleModule& irr) {
  const auto& m = irr.module;
  CHECK(commutation_violations(m) == 0);
  CHECK(contravariance_violations(m, irr.form) == 0);
  const std::size_t hw = *m.hw_index();
  CHECK(irr.form.gram.at(hw, hw) == 1);
  const int rank = m.rank();
  for (int i = 0; i < rank; ++i) {
    for (int j = i + 1; j < rank; ++j)
      for (std::size_t r = 0; r < m.dim(); ++r) CHECK(m.e(i, j).at(r, hw) == 0);  // raising kills hw
    CHECK(m.e(i, i).at(hw, hw) == irr.highest_weight[static_cast<std::size_t>(i)]);
  }
  // Sum of e_ii is |lambda| times the identity.
  SparseMatrix<Rational> total(m.dim(), m.dim());
  for (int i = 0; i < rank; ++i) total += m.e(i, i);
  CHECK(total == Rational(irr.highest_weight.size()) * SparseMatrix<Rational>::identity(m.dim()));
  // e_ij shifts weights by eps_i - eps_j.
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      for (std::size_t r = 0; r < m.dim(); ++r)
        for (const auto& [c, v] : m.e(i, j).row(r)) {
          (void)v;
          CHECK(m.basis_weights()[r] == m.basis_weights()[c] + Weight::unit(i, rank) - Weight::unit(j, rank));
        }
}

}  // namespace

TEST_CASE("partitions and the weight at infinity") {
  CHECK(derive_infinity_weight({P({1, 0}), P({1, 0})}, {1}) == P({1, 1}));
  CHECK(derive_infinity_weight({P({1, 0}), P({1, 0})}, {0}) == P({2, 0}));
  CHECK(derive_infinity_weight({P({1, 0, 0}), P({1, 1, 0})}, {1, 1}) == P({1, 1, 1}));
  CHECK_THROWS_AS(derive_infinity_weight({P({1, 0}), P({1, 0})}, {2}), NotAPartition);
  CHECK_THROWS_AS(derive_infinity_weight({P({1, 0})}, {1}), NotAPartition);
  CHECK_THROWS_AS(derive_infinity_weight({P({1, 1})}, {0}), NotAPartition);
  CHECK_THROWS_AS(P({0, 1}), NotAPartition);
  CHECK_THROWS_AS(P({1, -1}), NotAPartition);
  CHECK(P({3, 1, 0}).size() == 4);
}

TEST_CASE("irreducible modules have the Weyl dimension and satisfy the module invariants") {
  CHECK(build_irreducible(P({1, 0}), 1).module.dim() == 2);
  CHECK(build_irreducible(P({1, 1, 0}), 2).module.dim() == 3);
  CHECK(build_irreducible(P({2, 1, 0}), 2).module.dim() == 8);

  const std::vector<std::vector<int>> cases = {{0},       {3},       {0, 0},    {1, 0},       {3, 0},
                                               {2, 2},    {2, 1, 0}, {1, 1, 1}, {3, 1, 0},    {2, 2, 0},
                                               {3, 2, 1}, {1, 0, 0, 0}, {2, 1, 1, 0}, {1, 1, 0, 0}};
  for (const auto& parts : cases) {
    CAPTURE(P(parts).str());
    const auto irr = build_irreducible(P(parts), static_cast<int>(parts.size()) - 1);
    CHECK(static_cast<long>(irr.module.dim()) == weyl_dimension(P(parts)));
    // weight multiplicities against Gelfand-Tsetlin pattern counting
    std::map<std::vector<int>, long> counts;
    for (const auto& w : irr.module.basis_weights()) ++counts[w.coords];
    CHECK(counts == oracle::gt_weight_multiplicities(parts));
    check_module_invariants(irr);
  }
}

TEST_CASE("zero partition gives the trivial module") {
  const auto irr = build_irreducible(P({0, 0, 0}), 2);
  CHECK(irr.module.dim() == 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(irr.module.e(i, j).is_zero());
}

TEST_CASE("tensor products") {
  const auto t = build_tensor({P({1, 0}), P({1, 0})}, 1);
  CHECK(t.module.dim() == 4);
  std::map<std::vector<int>, int> mult;
  for (const auto& w : t.module.basis_weights()) ++mult[w.coords];
  CHECK(mult == std::map<std::vector<int>, int>{{{2, 0}, 1}, {{1, 1}, 2}, {{0, 2}, 1}});
  CHECK(commutation_violations(t.module) == 0);
  CHECK(contravariance_violations(t.module, t.form) == 0);
  CHECK(t.form.gram == SparseMatrix<Rational>::identity(4));

  const auto single = build_irreducible(P({2, 1, 0}), 2);
  const auto same = tensor_module({single.module});
  CHECK(same.dim() == single.module.dim());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(same.e(i, j) == single.module.e(i, j));
  CHECK(tensor_shapovalov({single.form}).gram == single.form.gram);

  const auto t3 = build_tensor({P({1, 0, 0}), P({1, 1, 0})}, 2);
  CHECK(t3.module.dim() == 9);
  CHECK(commutation_violations(t3.module) == 0);
  CHECK(contravariance_violations(t3.module, t3.form) == 0);

  CHECK_THROWS_AS(tensor_module({build_irreducible(P({1, 0}), 1).module, build_irreducible(P({1, 0, 0}), 2).module}),
                  DimensionMismatch);
}

TEST_CASE("weight and singular subspaces") {
  const auto t = build_tensor({P({1, 0}), P({1, 0})}, 1);
  auto ws = weight_and_singular_subspace(t.module, Weight{{1, 1}});
  CHECK(ws.weight_basis.cols() == 2);
  CHECK(ws.singular_basis.cols() == 1);
  CHECK(weight_and_singular_subspace(t.module, Weight{{2, 0}}).singular_basis.cols() == 1);
  CHECK(weight_and_singular_subspace(t.module, Weight{{3, -1}}).weight_basis.cols() == 0);

  const auto t3 = build_tensor({P({1, 0, 0}), P({1, 1, 0})}, 2);
  CHECK(weight_and_singular_subspace(t3.module, Weight{{1, 1, 1}}).singular_basis.cols() == 1);

  // singular vectors are killed by every raising generator
  const auto& sing = ws.singular_basis;
  for (std::size_t c = 0; c < sing.cols(); ++c) {
    const auto v = sing.column(c);
    CHECK(t.module.e(0, 1).apply(v) == std::vector<Rational>(4, 0));
  }

  // dimensions against the character oracle
  const std::vector<std::pair<std::vector<std::vector<int>>, std::vector<int>>> cases = {
      {{{1, 0}, {1, 0}, {1, 0}}, {2, 1}},
      {{{1, 0}, {1, 0}, {1, 0}}, {3, 0}},
      {{{2, 0}, {1, 0}, {1, 0}}, {2, 2}},
      {{{2, 0}, {2, 0}, {1, 0}}, {3, 2}},
      {{{1, 0, 0}, {1, 0, 0}, {1, 0, 0}}, {2, 1, 0}},
      {{{1, 0, 0}, {1, 0, 0}, {1, 0, 0}}, {1, 1, 1}},
      {{{2, 1, 0}, {1, 1, 0}}, {2, 2, 1}},
      {{{2, 1, 0}, {2, 1, 0}}, {2, 2, 2}},
      {{{2, 1, 0}, {2, 1, 0}}, {3, 2, 1}},
      {{{1, 1, 0}, {1, 0, 0}, {1, 0, 0}}, {2, 1, 1}},
  };
  for (const auto& [lams, nu] : cases) {
    std::vector<Partition> parts;
    for (const auto& l : lams) parts.push_back(P(l));
    const auto tm = build_tensor(parts, static_cast<int>(nu.size()) - 1);
    const auto sub = weight_and_singular_subspace(tm.module, Weight{nu});
    CHECK(static_cast<long>(sub.singular_basis.cols()) == oracle::lr_multiplicity(lams, nu));
  }
}
