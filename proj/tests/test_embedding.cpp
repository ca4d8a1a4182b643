#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"

using namespace bfcausal;
using testutil::make_vars;

namespace {

DataTable small_table() {
  DataTable t;
  t.variables = make_vars(2);
  t.variables[1].kind = VarKind::Categorical;
  t.variables[1].numCategories = 3;
  t.columns = {{0.0, 1.0, 2.0, 3.0, 4.0}, {0, 2, 1, 0, 2}};
  return t;
}

}  // namespace

TEST_CASE("validate catches structural problems") {
  DataTable t = small_table();
  t.validate();

  DataTable ragged = small_table();
  ragged.columns[1].pop_back();
  CHECK_THROWS_AS(ragged.validate(), RaggedRowsError);

  DataTable badCode = small_table();
  badCode.columns[1][0] = 3;  // outside 0..2
  CHECK_THROWS_AS(badCode.validate(), Error);
}

TEST_CASE("scale_columns maps min/max to -1/+1 and skips categoricals") {
  DataTable t = small_table();
  const DataTable s = scale_columns(t);
  CHECK(s.columns[0].front() == Catch::Approx(-1.0));
  CHECK(s.columns[0].back() == Catch::Approx(1.0));
  CHECK(s.columns[0][2] == Catch::Approx(0.0));
  CHECK(s.columns[1] == t.columns[1]);

  DataTable c = small_table();
  c.columns[0] = {2, 2, 2, 2, 2};
  CHECK_THROWS_AS(scale_columns(c), ConstantColumnError);
}

TEST_CASE("compact_categories recodes observed levels densely") {
  DataTable t;
  t.variables = make_vars(1);
  t.variables[0].kind = VarKind::Categorical;
  t.variables[0].numCategories = 5;
  t.columns = {{0, 4, 4, 2, 0}};
  const DataTable c = compact_categories(t);
  CHECK(c.columns[0] == std::vector<double>{0, 2, 2, 1, 0});
  CHECK(c.variables[0].numCategories == 3);

  DataTable single;
  single.variables = t.variables;
  single.columns = {{1, 1, 1}};
  CHECK_THROWS_AS(compact_categories(single), ConstantColumnError);
}

TEST_CASE("continuous blocks hold legendre terms of the scaled values") {
  DataTable t;
  t.variables = make_vars(1);
  t.columns = {{-1.0, -0.5, 0.0, 0.25, 1.0}};
  const EmbeddedData e = embed_dataset(t, BasisSpec{3});
  REQUIRE(e.columnCount() == 3);
  REQUIRE(e.sampleCount() == 5);
  for (int r = 0; r < 5; ++r) {
    const double x = t.columns[0][r];
    for (int j = 0; j < 3; ++j) CHECK(e.matrix(r, j) == Catch::Approx(legendre_eval(j + 1, x)).margin(1e-14));
  }
}

TEST_CASE("categorical blocks drop the highest code") {
  DataTable t = small_table();
  const EmbeddedData e = embed_dataset(t, BasisSpec{2});
  const auto block = e.blockColumns(1);
  REQUIRE(block.size() == 2);  // 3 categories -> 2 indicators
  for (int r = 0; r < 5; ++r) {
    const int code = static_cast<int>(t.columns[1][r]);
    CHECK(e.matrix(r, block[0]) == (code == 0 ? 1.0 : 0.0));
    CHECK(e.matrix(r, block[1]) == (code == 1 ? 1.0 : 0.0));
  }
}

TEST_CASE("category with no occurrences is rejected") {
  DataTable t;
  t.variables = make_vars(1);
  t.variables[0].kind = VarKind::Categorical;
  t.variables[0].numCategories = 3;
  t.columns = {{0, 2, 0, 2}};  // level 1 never appears
  CHECK_THROWS_AS(embed_dataset(t, BasisSpec{2}), DegenerateCategoryError);
}

TEST_CASE("covariance equals the direct ML covariance and is exactly symmetric") {
  const DataTable t = testutil::independent_table(3, 40, 7);
  const EmbeddedData e = embed_dataset(t, BasisSpec{2});
  const int m = e.columnCount();
  const int n = e.sampleCount();

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double mi = 0.0, mj = 0.0;
      for (int r = 0; r < n; ++r) {
        mi += e.matrix(r, i);
        mj += e.matrix(r, j);
      }
      mi /= n;
      mj /= n;
      double acc = 0.0;
      for (int r = 0; r < n; ++r) acc += (e.matrix(r, i) - mi) * (e.matrix(r, j) - mj);
      acc /= n;  // ML denominator
      CHECK(e.covariance(i, j) == Catch::Approx(acc).margin(1e-12));
      CHECK(e.covariance(i, j) == e.covariance(j, i));  // bitwise
    }
  }
}

TEST_CASE("column keys are canonical under column permutation") {
  DataTable a;
  a.variables = {{0, "B", VarKind::Continuous, 0}, {1, "A", VarKind::Continuous, 0}};
  a.columns = {{0.1, 0.9, -0.4, 0.5}, {-0.2, 0.3, 0.8, -0.6}};

  DataTable b;
  b.variables = {{0, "A", VarKind::Continuous, 0}, {1, "B", VarKind::Continuous, 0}};
  b.columns = {a.columns[1], a.columns[0]};

  const EmbeddedData ea = embed_dataset(a, BasisSpec{2});
  const EmbeddedData eb = embed_dataset(b, BasisSpec{2});

  // Map columns by key: same key must give identical data and covariances.
  std::map<long, int> colA, colB;
  for (int i = 0; i < ea.columnCount(); ++i) colA[ea.columnKey[i]] = i;
  for (int i = 0; i < eb.columnCount(); ++i) colB[eb.columnKey[i]] = i;
  REQUIRE(colA.size() == colB.size());
  for (const auto& [key, ia] : colA) {
    REQUIRE(colB.count(key) == 1);
    const int ib = colB[key];
    for (int r = 0; r < ea.sampleCount(); ++r) CHECK(ea.matrix(r, ia) == eb.matrix(r, ib));
  }
  for (const auto& [k1, i1] : colA)
    for (const auto& [k2, i2] : colA)
      CHECK(ea.covariance(i1, i2) == eb.covariance(colB[k1], colB[k2]));  // bitwise
}

TEST_CASE("truncation limit must be positive") {
  DataTable t;
  t.variables = make_vars(1);
  t.columns = {{-1.0, 0.0, 1.0}};
  CHECK_THROWS_AS(embed_dataset(t, BasisSpec{0}), Error);
}
