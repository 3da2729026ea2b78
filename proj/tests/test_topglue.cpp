#include <gtest/gtest.h>

#include "glue/generate.hpp"
#include "glue/kernels.hpp"
#include "oracles.hpp"

using namespace glue;

namespace {

TopGluingData two_origins() {
  TopGluingData d;
  d.n = 2;
  FinSpace s = FinSpace::sierpinski(), p = FinSpace::point();
  d.spaces = {s, s};
  for (auto key : {PairKey{0, 1}, PairKey{1, 0}}) {
    d.overlaps[key] = Overlap{p, ContinuousMap::unchecked(p, s, {0})};
    d.transitions[key] = ContinuousMap::identity(p);
  }
  return d;
}

// Sorted sizes of minimal neighbourhoods: a cheap homeomorphism invariant.
std::vector<int> profile(const FinSpace& x) {
  std::vector<int> v;
  for (int p = 0; p < x.size(); ++p) v.push_back(count(x.minimal_open(p)));
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(TopGlue, TwoOrigins) {
  TopGluingFunctor g = functor_from_data(two_origins());
  EXPECT_EQ(g.cat.objects().size(), 4u);
  GluedSpace q = standard_representative(g);
  EXPECT_EQ(q.q.size(), 3);
  EXPECT_EQ(q.q.opens().size(), 5u);
  GlueReport r = verify_glued(q.q, q.iota, g);
  EXPECT_TRUE(r.verdict);
  EXPECT_TRUE(r.glued_up);
  for (const auto& [k, v] : r.report.conditions) EXPECT_TRUE(v) << k;
  // Q carries the final topology of the quotient of the disjoint union.
  EXPECT_EQ(q.q.opens(), oracle::final_opens(q.q.size(), {q.pi}));
}

TEST(TopGlue, TwoOriginsRoundTrip) {
  TopGluingData d = two_origins();
  EXPECT_EQ(data_from_functor(functor_from_data(d)), d);
}

TEST(TopGlue, RoundTripRandom) {
  gen::Rng rng(30);
  for (int t = 0; t < 200; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5, t % 2 == 0);
    ConditionReport v = validate_data(inst.data);
    ASSERT_TRUE(v.all()) << v.problems.front();
    TopGluingFunctor g = functor_from_data(inst.data);
    EXPECT_TRUE(validate_functor(g).all());
    EXPECT_EQ(data_from_functor(g), inst.data);
    TopGluingFunctor g2 = functor_from_data(data_from_functor(g));
    EXPECT_EQ(g2.objects, g.objects);
    EXPECT_EQ(g2.arrows, g.arrows);
  }
}

TEST(TopGlue, CorruptionsRejected) {
  gen::Rng rng(31);
  int tried = 0;
  for (int t = 0; t < 300; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5);
    std::string what;
    auto bad = gen::corrupt_top_data(rng, inst.data, &what);
    if (!bad) continue;
    ++tried;
    EXPECT_FALSE(validate_data(*bad).all()) << what;
    EXPECT_THROW(functor_from_data(*bad), GluingDataError) << what;
  }
  EXPECT_GT(tried, 50);
}

TEST(TopGlue, StandardRepresentativeRecoversSpace) {
  gen::Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5);
    TopGluingFunctor g = functor_from_data(inst.data);
    GluedSpace q = standard_representative(g);
    GlueReport r = verify_glued(q.q, q.iota, g);
    EXPECT_TRUE(r.glued_up) << (r.report.problems.empty() ? "" : r.report.problems.front());
    EXPECT_EQ(q.q.size(), inst.space.size());
    EXPECT_EQ(q.q.opens().size(), inst.space.opens().size());
    EXPECT_EQ(profile(q.q), profile(inst.space));
    std::vector<ContinuousMap> singles;
    for (int i = 0; i < g.n(); ++i) singles.push_back(q.iota.at(GlueObject::single(i)));
    EXPECT_EQ(q.q.opens(), oracle::final_opens(q.q.size(), singles));
  }
}

TEST(TopGlue, UniversalProperty) {
  gen::Rng rng(33);
  for (int t = 0; t < 40; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5);
    TopGluingFunctor g = functor_from_data(inst.data);
    GluedSpace q = standard_representative(g);
    for (int c = 0; c < 20; ++c) {
      gen::TopCone cone = gen::random_cone(rng, g, q, 4);
      ASSERT_TRUE(is_cone(cone.apex, cone.legs, g).full);
      ContinuousMap mu = mediating_morphism(cone.apex, cone.legs, q, g);
      for (const auto& [a, leg] : cone.legs) EXPECT_EQ(compose(mu, q.iota.at(a)), leg);
      UniquenessCheck u = check_mediating_unique(cone.apex, cone.legs, q, mu, t * 100 + c);
      EXPECT_TRUE(u.exhaustive);
      EXPECT_EQ(u.solutions, 1u);
      EXPECT_TRUE(u.unique);
    }
  }
}

TEST(TopGlue, ConeCharacterizationsAgree) {
  gen::Rng rng(34);
  int rejected = 0;
  for (int t = 0; t < 300; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5);
    TopGluingFunctor g = functor_from_data(inst.data);
    GluedSpace q = standard_representative(g);
    gen::TopCone cone = gen::random_cone(rng, g, q, 4);
    EXPECT_TRUE(is_cone(cone.apex, cone.legs, g).agree());
    Legs bad = gen::corrupt_legs(rng, cone);
    ConeCheck c = is_cone(cone.apex, bad, g);
    EXPECT_TRUE(c.agree());
    rejected += !c.full;
    if (!c.full) EXPECT_THROW(mediating_morphism(cone.apex, bad, q, g), InvalidInput);
  }
  EXPECT_GT(rejected, 0);
}

TEST(TopGlue, PlainTopConditionsDoNotForceFinalTopology) {
  // One discrete chart mapped identically onto the indiscrete space: every listed
  // condition holds but the topology is coarser than the final one.
  TopGluingData d;
  d.n = 1;
  d.open_variant = false;
  d.spaces = {FinSpace::discrete(2)};
  TopGluingFunctor g = functor_from_data(d);
  FinSpace q = FinSpace::indiscrete(2);
  Legs iota{{GlueObject::single(0), ContinuousMap::unchecked(d.spaces[0], q, {0, 1})}};
  GlueReport r = verify_glued(q, iota, g);
  EXPECT_TRUE(r.verdict);
  EXPECT_FALSE(r.report.get("final_topology"));
  EXPECT_FALSE(r.glued_up);
  // The open variant rejects the same legs.
  d.open_variant = true;
  EXPECT_FALSE(verify_glued(q, iota, functor_from_data(d)).verdict);
}

TEST(TopGlue, WrongLegsFail) {
  TopGluingFunctor g = functor_from_data(two_origins());
  GluedSpace q = standard_representative(g);
  Legs bad = q.iota;
  bad.erase(GlueObject::pair(0, 1));
  EXPECT_FALSE(verify_glued(q.q, bad, g).verdict);
}

TEST(TopGlue, ListedConditionsMissOverlapLaw) {
  // Both charts mapped identically onto one Sierpinski space: (a)-(e) hold, yet the
  // two origins are identified and Q is not the glued space.
  TopGluingFunctor g = functor_from_data(two_origins());
  FinSpace s = FinSpace::sierpinski();
  Legs collapsed;
  for (const auto& a : g.cat.objects()) {
    std::vector<int> v(g.at(a).size(), 0);
    if (a.shape == Shape::Single) v = {0, 1};
    collapsed[a] = ContinuousMap::unchecked(g.at(a), s, v);
  }
  GlueReport r = verify_glued(s, collapsed, g);
  EXPECT_TRUE(r.verdict);
  EXPECT_TRUE(r.report.get("final_topology"));
  EXPECT_FALSE(r.report.get("overlap_law"));
  EXPECT_FALSE(r.glued_up);
  EXPECT_NE(standard_representative(g).q.size(), s.size());
}

TEST(TopGlue, CoverFunctors) {
  FinSpace s = FinSpace::sierpinski();
  CoverFunctor trivial = cover_functor(s, {s.full()});
  EXPECT_EQ(trivial.functor.n(), 1);
  CoverFunctor c = cover_functor(s, {s.full(), 1});
  EXPECT_EQ(c.functor.n(), 2);
  EXPECT_TRUE(validate_functor(c.functor).all());
  EXPECT_TRUE(verify_glued(s, c.legs, c.functor).glued_up);

  FinSpace x = FinSpace::make(4, {0, 1, 3, 5, 7, 9, 11, 13, 15});
  CoverFunctor three = cover_functor(x, {3, 5, 9});
  EXPECT_EQ(three.functor.cat.objects().size(), 12u);
  EXPECT_TRUE(validate_functor(three.functor).all());
  EXPECT_TRUE(verify_glued(x, three.legs, three.functor).glued_up);
}

TEST(TopGlue, InvalidFunctorDetected) {
  TopGluingFunctor g = functor_from_data(two_origins());
  // A non-injective overlap map breaks the monomorphism requirement.
  FinSpace two = FinSpace::indiscrete(2);
  TopGluingData d = two_origins();
  d.overlaps[{0, 1}] = Overlap{two, ContinuousMap::unchecked(two, FinSpace::sierpinski(), {0, 0})};
  d.transitions[{0, 1}] = ContinuousMap::unchecked(two, FinSpace::point(), {0, 0});
  d.transitions[{1, 0}] = ContinuousMap::unchecked(FinSpace::point(), two, {0});
  EXPECT_FALSE(validate_data(d).all());
}
