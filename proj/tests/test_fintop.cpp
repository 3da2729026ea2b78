#include <gtest/gtest.h>

#include <set>

#include "glue/generate.hpp"
#include "glue/kernels.hpp"
#include "oracles.hpp"

using namespace glue;

TEST(FinSpace, AxiomsEnforced) {
  EXPECT_THROW(FinSpace::make(2, {0, 1}), InvalidInput);          // whole set missing
  EXPECT_THROW(FinSpace::make(2, {1, 3}), InvalidInput);          // empty set missing
  EXPECT_THROW(FinSpace::make(3, {0, 1, 2, 7}), InvalidInput);    // union {0,1} missing
  EXPECT_THROW(FinSpace::make(3, {0, 3, 6, 7}), InvalidInput);    // intersection {1} missing
  EXPECT_THROW(FinSpace::make(2, {0, 3, 4}), InvalidInput);       // not a subset
  EXPECT_NO_THROW(FinSpace::make(3, {0, 1, 3, 7}));
}

TEST(FinSpace, Sierpinski) {
  FinSpace s = FinSpace::sierpinski();
  EXPECT_EQ(s.opens().size(), 3u);
  EXPECT_EQ(s.minimal_open(0), PointSet{1});
  EXPECT_EQ(s.minimal_open(1), PointSet{3});
  EXPECT_NE(specialization_dot(s).find("p1 -> p0"), std::string::npos);
}

TEST(FinSpace, GeneratedMatchesMinimalNeighbourhoods) {
  gen::Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    FinSpace x = gen::random_space(rng, 1, 6);
    std::vector<PointSet> minimal;
    for (int p = 0; p < x.size(); ++p) minimal.push_back(x.minimal_open(p));
    EXPECT_EQ(x.opens(), oracle::opens_from_minimal(minimal));
  }
}

TEST(ContinuousMap, Properties) {
  FinSpace s = FinSpace::sierpinski();
  FinSpace d = FinSpace::discrete(2), i = FinSpace::indiscrete(2);
  EXPECT_TRUE(is_continuous(ContinuousMap::unchecked(d, s, {1, 0})));
  EXPECT_FALSE(is_continuous(ContinuousMap::unchecked(i, s, {1, 0})));
  EXPECT_TRUE(is_continuous(ContinuousMap::unchecked(s, i, {0, 1})));
  EXPECT_FALSE(is_open_map(ContinuousMap::unchecked(s, i, {0, 1})));
  EXPECT_TRUE(is_homeomorphism(ContinuousMap::identity(s)));
  EXPECT_FALSE(is_homeomorphism(ContinuousMap::unchecked(d, i, {0, 1})));
  EXPECT_THROW(ContinuousMap::make(i, s, {1, 0}), InvalidInput);
}

TEST(Quotient, FinalTopologyMatchesBruteForce) {
  gen::Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    FinSpace x = gen::random_space(rng, 1, 6);
    std::vector<std::pair<int, int>> rel;
    const int k = gen::uniform(rng, 0, 4);
    for (int e = 0; e < k; ++e) rel.emplace_back(gen::uniform(rng, 0, x.size() - 1), gen::uniform(rng, 0, x.size() - 1));
    Quotient q = quotient_final(x, rel);
    std::vector<int> cls = oracle::classes(x.size(), rel);
    EXPECT_EQ(q.projection.assign, cls);
    const int m = *std::max_element(cls.begin(), cls.end()) + 1;
    EXPECT_EQ(q.space.size(), m);
    EXPECT_EQ(q.space.opens(), oracle::final_opens(m, {q.projection}));
  }
}

TEST(FiberProduct, MatchesSetPullback) {
  gen::Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    FinSpace c = gen::random_space(rng, 1, 3);
    FinSpace a = gen::random_space(rng, 1, 4), b = gen::random_space(rng, 1, 4);
    ContinuousMap f = ContinuousMap::unchecked(a, c, std::vector<int>(a.size())), g = f;
    for (int tries = 0; tries < 50; ++tries) {
      std::vector<int> va(a.size()), vb(b.size());
      for (auto& v : va) v = gen::uniform(rng, 0, c.size() - 1);
      for (auto& v : vb) v = gen::uniform(rng, 0, c.size() - 1);
      f = ContinuousMap::unchecked(a, c, va);
      g = ContinuousMap::unchecked(b, c, vb);
      if (is_continuous(f) && is_continuous(g)) break;
    }
    if (!is_continuous(f) || !is_continuous(g)) continue;
    FiberProduct fp = fiber_product(f, g);
    oracle::Pullback pb = oracle::pullback(f, g);
    EXPECT_EQ(fp.points, pb.points);
    EXPECT_EQ(fp.space.opens(), pb.opens);
    EXPECT_EQ(is_pullback_square(Square{fp.p1, fp.p2, f, g}), SquareVerdict::Pullback);
    if (fp.space.size() >= 1) {
      // Dropping a point breaks the universal property.
      Subspace s = subspace(fp.space, fp.space.full() & ~PointSet{1});
      Square sq{compose(fp.p1, s.inclusion), compose(fp.p2, s.inclusion), f, g};
      EXPECT_EQ(is_pullback_square(sq), SquareVerdict::NotPullback);
    }
  }
}

TEST(FiberProduct, OpenIntersection) {
  FinSpace x = FinSpace::make(3, {0, 1, 3, 5, 7});
  Subspace u = subspace(x, 3), v = subspace(x, 5);
  FiberProduct fp = fiber_product(u.inclusion, v.inclusion);
  ASSERT_EQ(fp.space.size(), 1);
  EXPECT_EQ(compose(u.inclusion, fp.p1)(0), 0);
}

TEST(Components, MatchesReachability) {
  gen::Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    FinSpace x = gen::random_space(rng, 1, 6);
    for (PointSet w : x.opens()) {
      auto comps = connected_components(x, w);
      PointSet all = 0;
      for (PointSet c : comps) {
        EXPECT_EQ(all & c, 0u);
        all |= c;
      }
      EXPECT_EQ(all, w);
      // Union-find over overlapping minimal neighbourhoods inside w.
      std::vector<std::pair<int, int>> rel;
      for (int p : members(w))
        for (int q : members(w & x.minimal_open(p))) rel.emplace_back(p, q);
      auto cls = oracle::classes(x.size(), rel);
      std::set<int> ids;
      for (int p : members(w)) ids.insert(cls[p]);
      EXPECT_EQ(ids.size(), comps.size());
    }
  }
}

TEST(Kernels, FinalOpensSerialEqualsParallel) {
  gen::Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    FinSpace x = gen::random_space(rng, 1, 10);
    auto cover = gen::random_cover(rng, x, 4);
    std::vector<ContinuousMap> maps;
    for (PointSet u : cover) maps.push_back(subspace(x, u).inclusion);
    auto s = kernels::final_opens_serial(x.size(), maps);
    EXPECT_EQ(s, kernels::final_opens_parallel(x.size(), maps));
    EXPECT_EQ(s, oracle::final_opens(x.size(), maps));
  }
}

TEST(Kernels, MediatingSerialEqualsParallel) {
  gen::Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    FinSpace q = gen::random_space(rng, 1, 5);
    ContinuousMap h = gen::random_continuous_map(rng, q, 3);
    PointSet u = q.minimal_open(gen::uniform(rng, 0, q.size() - 1));
    ContinuousMap inc = subspace(q, u).inclusion;
    std::vector<kernels::LegConstraint> legs{{inc, compose(h, inc)}};
    for (bool cont : {false, true}) {
      auto a = kernels::count_mediating_serial(q, h.cod, legs, cont);
      auto b = kernels::count_mediating_parallel(q, h.cod, legs, cont);
      EXPECT_EQ(a.count, b.count);
      EXPECT_EQ(a.first, b.first);
      EXPECT_GE(a.count, 1u);
    }
    // Unconstrained points are free: |N|^(|Q| - |U|) point functions.
    auto free_count = kernels::count_mediating_serial(q, h.cod, legs, false).count;
    std::uint64_t expect = 1;
    for (int p = 0; p < q.size() - count(u); ++p) expect *= h.cod.size();
    EXPECT_EQ(free_count, expect);
  }
}
