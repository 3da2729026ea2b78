#include <gtest/gtest.h>

#include <set>

#include "glue/index.hpp"

using namespace glue;

namespace {

// Objects as (first index, remaining index set) after dropping repeats of the first.
std::set<std::pair<int, unsigned>> raw_objects(int n) {
  std::set<std::pair<int, unsigned>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        // j == n / k == n stand for "absent"
        if (j == n && k != n) continue;
        unsigned rest = 0;
        if (j < n) rest |= 1u << j;
        if (k < n) rest |= 1u << k;
        rest &= ~(1u << i);
        out.insert({i, rest});
      }
  return out;
}

// Reachability over generator edges.
std::vector<std::vector<char>> closure(const GluingIndexCategory& cat) {
  const auto& obj = cat.objects();
  const size_t m = obj.size();
  std::vector<std::vector<char>> r(m, std::vector<char>(m, 0));
  for (size_t a = 0; a < m; ++a) r[a][a] = 1;
  for (const auto& g : cat.generators()) r[cat.index_of(g.dom())][cat.index_of(g.cod())] = 1;
  for (size_t k = 0; k < m; ++k)
    for (size_t a = 0; a < m; ++a)
      for (size_t b = 0; b < m; ++b)
        if (r[a][k] && r[k][b]) r[a][b] = 1;
  return r;
}

}  // namespace

TEST(Index, CensusSmall) {
  auto c1 = GluingIndexCategory::enumerate(1);
  EXPECT_EQ(c1.objects().size(), 1u);
  EXPECT_EQ(c1.morphism_count(), 1u);
  auto c2 = GluingIndexCategory::enumerate(2);
  EXPECT_EQ(c2.objects().size(), 4u);
  EXPECT_EQ(c2.morphism_count(), 10u);
  EXPECT_EQ(GluingIndexCategory::enumerate(3).objects().size(), 12u);
}

TEST(Index, ObjectCountMatchesTupleEnumeration) {
  for (int n = 1; n <= 5; ++n)
    EXPECT_EQ(GluingIndexCategory::enumerate(n).objects().size(), raw_objects(n).size()) << "n=" << n;
}

TEST(Index, MorphismCountMatchesClosure) {
  for (int n = 1; n <= 4; ++n) {
    auto cat = GluingIndexCategory::enumerate(n);
    auto r = closure(cat);
    size_t count = 0;
    for (auto& row : r)
      for (char c : row) count += c;
    EXPECT_EQ(cat.morphism_count(), count) << "n=" << n;
  }
}

TEST(Index, HomExistsIffSupportContained) {
  for (int n = 1; n <= 4; ++n) {
    auto cat = GluingIndexCategory::enumerate(n);
    auto r = closure(cat);
    const auto& obj = cat.objects();
    for (size_t a = 0; a < obj.size(); ++a)
      for (size_t b = 0; b < obj.size(); ++b) {
        const bool sub = (obj[a].support() & ~obj[b].support()) == 0;
        EXPECT_EQ(cat.hom_exists(obj[a], obj[b]), sub);
        EXPECT_EQ(static_cast<bool>(r[a][b]), sub) << obj[a].label() << " -> " << obj[b].label();
      }
  }
}

TEST(Index, PathsCompose) {
  auto cat = GluingIndexCategory::enumerate(3);
  for (const auto& a : cat.objects())
    for (const auto& b : cat.objects()) {
      if (!cat.hom_exists(a, b)) continue;
      GlueObject cur = a;
      for (const auto& g : cat.path(a, b)) {
        EXPECT_EQ(g.dom(), cur);
        cur = g.cod();
      }
      EXPECT_EQ(cur, b);
    }
}

TEST(Index, Canonicalize) {
  EXPECT_EQ(canonicalize({1, 1}, 3), GlueObject::single(1));
  EXPECT_EQ(canonicalize({2, 2, 2}, 3), GlueObject::single(2));
  EXPECT_EQ(canonicalize({0, 0, 1}, 3), GlueObject::pair(0, 1));
  EXPECT_EQ(canonicalize({0, 1, 1}, 3), GlueObject::pair(0, 1));
  EXPECT_EQ(canonicalize({0, 2, 1}, 3), GlueObject::triple(0, 1, 2));
  EXPECT_THROW(canonicalize({0, 3}, 3), InvalidInput);
}

TEST(Index, DotHasOneNodePerObject) {
  std::string dot = GluingIndexCategory::enumerate(2).dot();
  size_t nodes = 0;
  for (size_t p = dot.find("[label=\"["); p != std::string::npos; p = dot.find("[label=\"[", p + 1)) ++nodes;
  EXPECT_EQ(nodes, 4u);
}

TEST(Index, RejectsBadSizes) {
  EXPECT_THROW(GluingIndexCategory::enumerate(0), InvalidInput);
  EXPECT_THROW(GluingIndexCategory::enumerate(GluingIndexCategory::kDefaultMaxN + 1), InvalidInput);
}
