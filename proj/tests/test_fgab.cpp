#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>

#include "glue/fgab.hpp"
#include "glue/generate.hpp"

using namespace glue;
using boost::multiprecision::cpp_int;

namespace {

// Fraction-free elimination over arbitrary-precision integers.
cpp_int det(std::vector<std::vector<cpp_int>> a) {
  const size_t n = a.size();
  if (n == 0) return 1;
  cpp_int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<std::vector<cpp_int>> big(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<std::vector<cpp_int>> out;
  for (int r : rows) {
    out.emplace_back();
    for (int c : cols) out.back().push_back(m(r, c));
  }
  return out;
}

cpp_int det(const Matrix& m) {
  std::vector<int> idx(m.rows());
  std::iota(idx.begin(), idx.end(), 0);
  return det(big(m, idx, idx));
}

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// gcd of all k x k minors.
cpp_int determinantal_divisor(const Matrix& m, int k) {
  std::vector<std::vector<int>> rs, cs;
  std::vector<int> cur;
  subsets(m.rows(), k, 0, cur, rs);
  subsets(m.cols(), k, 0, cur, cs);
  cpp_int g = 0;
  for (const auto& r : rs)
    for (const auto& c : cs) g = boost::multiprecision::gcd(g, cpp_int(abs(det(big(m, r, c)))));
  return g;
}

Matrix random_matrix(gen::Rng& rng, int max_dim, int bound) {
  Matrix a(gen::uniform(rng, 1, max_dim), gen::uniform(rng, 1, max_dim));
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) a(r, c) = gen::uniform(rng, -bound, bound);
  return a;
}

using BigMatrix = std::vector<std::vector<cpp_int>>;

BigMatrix big(const Matrix& m) {
  std::vector<int> rs(m.rows()), cs(m.cols());
  std::iota(rs.begin(), rs.end(), 0);
  std::iota(cs.begin(), cs.end(), 0);
  return big(m, rs, cs);
}

// Products in arbitrary precision: the transforms may be large even when S is small.
BigMatrix mul(const BigMatrix& a, const BigMatrix& b, size_t inner, size_t cols) {
  BigMatrix c(a.size(), std::vector<cpp_int>(cols));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < inner; ++k)
      for (size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

void expect_valid_snf(const Matrix& a, const SmithForm& f) {
  const size_t m = a.rows(), n = a.cols();
  EXPECT_EQ(mul(mul(big(f.U), big(a), m, n), big(f.V), n, n), big(f.S));
  EXPECT_EQ(mul(big(f.U), big(f.U_inv), m, m), big(Matrix::identity(m)));
  EXPECT_EQ(mul(big(f.V), big(f.V_inv), n, n), big(Matrix::identity(n)));
  EXPECT_EQ(abs(det(f.U)), 1);
  EXPECT_EQ(abs(det(f.V)), 1);
  for (int r = 0; r < f.S.rows(); ++r)
    for (int c = 0; c < f.S.cols(); ++c)
      if (r != c) EXPECT_EQ(f.S(r, c), 0);
  Vec d = f.diag();
  for (size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    if (i + 1 < d.size() && d[i] != 0) EXPECT_EQ(d[i + 1] % d[i], 0);
    if (d[i] == 0)
      for (size_t j = i; j < d.size(); ++j) EXPECT_EQ(d[j], 0);
  }
}

}  // namespace

TEST(Snf, KnownExample) {
  SmithForm f = snf(Matrix::diagonal({2, 3}));
  EXPECT_EQ(f.diag(), (Vec{1, 6}));
  expect_valid_snf(Matrix::diagonal({2, 3}), f);
}

TEST(Snf, RandomMatricesAgainstMinors) {
  gen::Rng rng(10);
  for (int t = 0; t < 150; ++t) {
    Matrix a = random_matrix(rng, 6, 9);
    SmithForm f = snf(a);
    expect_valid_snf(a, f);
    // Products of the leading invariant factors equal the determinantal divisors.
    Vec d = f.diag();
    cpp_int prod = 1;
    for (int k = 1; k <= std::min(a.rows(), a.cols()); ++k) {
      prod *= d[k - 1];
      ASSERT_EQ(prod, determinantal_divisor(a, k)) << a.str();
    }
  }
}

TEST(Snf, EdgeShapes) {
  expect_valid_snf(Matrix(0, 3), snf(Matrix(0, 3)));
  expect_valid_snf(Matrix(3, 0), snf(Matrix(3, 0)));
  expect_valid_snf(Matrix(2, 2), snf(Matrix(2, 2)));
}

TEST(Checked, OverflowDetected) {
  const Int big = Int{1} << 62;
  EXPECT_THROW(checked_mul(big, 4), Overflow);
  EXPECT_THROW(checked_add(big, big), Overflow);
  EXPECT_EQ(checked_sub(-5, 7), -12);
}

TEST(Unimodular, GeneratorProducesInverses) {
  gen::Rng rng(11);
  for (int n = 0; n <= 6; ++n) {
    Matrix inv;
    Matrix a = gen::random_unimodular(rng, n, &inv);
    EXPECT_EQ(a * inv, Matrix::identity(n));
    EXPECT_EQ(abs(det(a)), 1);
  }
}

TEST(Group, InvariantsAndOrder) {
  FgAbGroup g(2, Matrix::diagonal({2, 3}));
  EXPECT_EQ(g.invariant_factors(), (Vec{6}));
  EXPECT_EQ(g.order(), 6);
  EXPECT_TRUE(are_isomorphic(g, FgAbGroup::cyclic(6)));
  EXPECT_FALSE(are_isomorphic(FgAbGroup(2, Matrix::diagonal({2, 2})), FgAbGroup::cyclic(4)));
  FgAbGroup z2(1, Matrix::from_rows({{0}}));
  EXPECT_EQ(z2.free_rank(), 1);
  EXPECT_EQ(z2.order(), 0);
  EXPECT_TRUE(FgAbGroup(1, Matrix::from_rows({{1}})).is_trivial());
  EXPECT_TRUE(g.equal({1, 0}, {3, 0}));
  EXPECT_FALSE(g.equal({1, 0}, {0, 1}));
}

TEST(Group, ElementEnumerationOracle) {
  // Order of Z^k / span(R) equals |det R| for square nonsingular R.
  gen::Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const int k = gen::uniform(rng, 1, 3);
    Matrix r(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) r(i, j) = gen::uniform(rng, -4, 4);
    cpp_int d = abs(det(r));
    FgAbGroup g(k, r);
    if (d == 0) EXPECT_EQ(g.order(), 0);
    else EXPECT_EQ(cpp_int(g.order()), d);
  }
}

TEST(Hom, WellDefinedness) {
  FgAbGroup z2 = FgAbGroup::cyclic(2), z4 = FgAbGroup::cyclic(4), z = FgAbGroup::free(1);
  EXPECT_THROW(AbHom(z2, z, Matrix::from_rows({{1}})), InvalidInput);
  EXPECT_NO_THROW(AbHom(z2, z4, Matrix::from_rows({{2}})));
  EXPECT_THROW(AbHom(z2, z4, Matrix::from_rows({{1}})), InvalidInput);
}

TEST(Hom, KernelImageEqualizer) {
  FgAbGroup z4 = FgAbGroup::cyclic(4);
  AbHom twice(z4, z4, Matrix::from_rows({{2}}));
  SubgroupResult k = kernel(twice);
  EXPECT_EQ(k.group.order(), 2);
  EXPECT_TRUE(is_injective(k.inclusion));
  EXPECT_EQ(image(twice).group.order(), 2);
  SubgroupResult e = equalizer(twice, AbHom::zero(z4, z4));
  EXPECT_EQ(e.group.order(), 2);
  EXPECT_FALSE(is_injective(twice));
  EXPECT_FALSE(is_surjective(twice));
  AbHom neg(z4, z4, Matrix::from_rows({{-1}}));
  EXPECT_TRUE(is_isomorphism(neg));
  auto inv = inverse(neg);
  ASSERT_TRUE(inv);
  EXPECT_TRUE(compose(*inv, neg).equals(AbHom::identity(z4)));
}

TEST(Hom, FactorThroughAndPreimage) {
  FgAbGroup z = FgAbGroup::free(1);
  AbHom two(z, z, Matrix::from_rows({{2}}));
  AbHom four(z, z, Matrix::from_rows({{4}}));
  AbHom three(z, z, Matrix::from_rows({{3}}));
  auto u = factor_through(two, four);
  ASSERT_TRUE(u);
  EXPECT_EQ(u->matrix(), Matrix::from_rows({{2}}));
  EXPECT_FALSE(factor_through(two, three));
  EXPECT_EQ(preimage(two, {6}), (Vec{3}));
  EXPECT_FALSE(preimage(two, {5}));
}

TEST(Hom, ProductProjections) {
  ProductResult p = product({FgAbGroup::cyclic(2), FgAbGroup::free(1), FgAbGroup::cyclic(3)});
  ASSERT_EQ(p.projections.size(), 3u);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) {
      AbHom c = compose(p.projections[i], p.injections[j]);
      if (i == j) EXPECT_TRUE(c.equals(AbHom::identity(c.dom())));
      else EXPECT_TRUE(c.equals(AbHom::zero(c.dom(), c.cod())));
    }
}

TEST(Group, SimplifyIsIsomorphism) {
  gen::Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    FgAbGroup g = gen::random_group(rng, 4);
    Matrix inv;
    Matrix a = gen::random_unimodular(rng, g.ambient(), &inv);
    FgAbGroup h(g.ambient(), a * g.relations());
    Simplified s = simplify(h);
    EXPECT_TRUE(compose(s.from, s.to).equals(AbHom::identity(h)));
    EXPECT_TRUE(compose(s.to, s.from).equals(AbHom::identity(s.group)));
    EXPECT_EQ(s.group.invariant_factors(), g.invariant_factors());
  }
}
