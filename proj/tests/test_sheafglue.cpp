#include <gtest/gtest.h>

#include "glue/generate.hpp"

using namespace glue;

namespace {

FinSpace two_origins_q() { return FinSpace::make(3, {0, 1, 3, 5, 7}); }

SheafGluingData constant_z_two_origins() {
  FinSpace q = two_origins_q();
  Presheaf f = constant_sheaf(q, q.full(), FgAbGroup::free(1));
  return sheaf_data_from_cover(f, {3, 5});
}

}  // namespace

TEST(SheafGlue, TwoOriginsConstantZ) {
  SheafGluingData d = constant_z_two_origins();
  EXPECT_TRUE(validate_sheaf_data(d).all());
  SheafGluingFunctor g = sheaf_functor_from_data(d);
  EXPECT_EQ(g.cat.objects().size(), 4u);
  EXPECT_TRUE(validate_sheaf_functor(g).all());
  LimitSheaf l = build_limit_sheaf(d);
  // Pairs (s1, s2) in Z x Z agreeing on the open point: the diagonal.
  for (PointSet v : {PointSet{1}, PointSet{3}, PointSet{5}, PointSet{7}})
    EXPECT_TRUE(are_isomorphic(l.sheaf.sections(v), FgAbGroup::free(1))) << set_str(v);
  EXPECT_TRUE(l.sheaf.sections(0).is_trivial());
  EXPECT_TRUE(is_sheaf(l.sheaf).sheaf);
  EXPECT_TRUE(verify_sheaf_glued(l.sheaf, l.pi, d, l).verdict);
  // A global section restricts to the same value on both charts.
  Vec x = l.inclusion[l.sheaf.index(7)].apply({5});
  EXPECT_EQ(x.size(), 2u);
}

TEST(SheafGlue, ExtendSection) {
  SheafGluingData d = constant_z_two_origins();
  LimitSheaf l = build_limit_sheaf(d);
  auto e = extend_section(d, l, 0, 3, {4});
  ASSERT_TRUE(e);
  EXPECT_TRUE(d.sheaves[0].sections(3).equal(l.pi[0].at(3).apply(*e), {4}));
  EXPECT_FALSE(extend_section(d, l, 0, 7, {4}));  // the whole space is not inside U_0
}

TEST(SheafGlue, RandomDataGlues) {
  gen::Rng rng(40);
  for (int t = 0; t < 60; ++t) {
    gen::SheafInstance inst = gen::random_sheaf_data(rng, 3, 4, 4);
    const SheafGluingData& d = inst.data;
    ConditionReport v = validate_sheaf_data(d);
    ASSERT_TRUE(v.all()) << v.problems.front();
    EXPECT_EQ(data_from_sheaf_functor(sheaf_functor_from_data(d)), d);
    LimitSheaf l = build_limit_sheaf(d);
    EXPECT_TRUE(is_sheaf(l.sheaf).sheaf);
    for (const auto& p : l.pi) EXPECT_TRUE(check_enriched_morphism(p).ok);
    // The limit recovers the sheaf that was cut up.
    for (PointSet w : l.sheaf.opens()) EXPECT_TRUE(are_isomorphic(l.sheaf.sections(w), inst.global.sections(w)));
    SheafGlueReport r = verify_sheaf_glued(l.sheaf, l.pi, d, l);
    EXPECT_TRUE(r.verdict);
    ASSERT_TRUE(r.comparison);
    // So does a twisted copy with composite projections.
    NatIso theta = gen::twist_presheaf(rng, l.sheaf);
    std::vector<EnrichedMorphism> p;
    for (const auto& pi : l.pi) p.push_back(compose_enriched(pi, theta.forward));
    EXPECT_TRUE(verify_sheaf_glued(theta.forward.src, p, d, l).verdict);
    // Zeroing one component breaks the family.
    auto bad = gen::corrupt_projections(rng, l.pi);
    if (bad) EXPECT_FALSE(verify_sheaf_glued(l.sheaf, *bad, d, l).verdict);
  }
}

TEST(SheafGlue, ExtendSectionRandom) {
  gen::Rng rng(41);
  for (int t = 0; t < 40; ++t) {
    gen::SheafInstance inst = gen::random_sheaf_data(rng, 3, 4, 3);
    const SheafGluingData& d = inst.data;
    LimitSheaf l = build_limit_sheaf(d);
    for (int i = 0; i < d.n(); ++i)
      for (PointSet v : d.base.opens_within(d.cover[i])) {
        const FgAbGroup& g = d.sheaves[i].sections(v);
        Vec s(g.ambient());
        for (auto& x : s) x = gen::uniform(rng, -3, 3);
        auto e = extend_section(d, l, i, v, s);
        ASSERT_TRUE(e);
        EXPECT_TRUE(g.equal(l.pi[i].at(v).apply(*e), s));
      }
  }
}

TEST(SheafGlue, BrokenTransitionsRejected) {
  gen::Rng rng(42);
  int broken = 0;
  for (int t = 0; t < 60; ++t) {
    gen::SheafInstance inst = gen::random_sheaf_data(rng, 3, 4, 3);
    SheafGluingData d = inst.data;
    if (d.n() < 2) continue;
    auto& m = d.transitions.at({0, 1});
    bool changed = false;
    for (auto& a : m.alpha)
      if (!a.equals(AbHom::zero(a.dom(), a.cod()))) {
        a = AbHom::zero(a.dom(), a.cod());
        changed = true;
        break;
      }
    if (!changed) continue;
    ++broken;
    EXPECT_FALSE(validate_sheaf_data(d).all());
    EXPECT_THROW(sheaf_functor_from_data(d), GluingDataError);
  }
  EXPECT_GT(broken, 5);
}

TEST(SheafGlue, PresheafVariant) {
  // Constant presheaf on two points: not a sheaf, so only the presheaf variant accepts it.
  FinSpace x = FinSpace::discrete(2);
  FgAbGroup z = FgAbGroup::free(1);
  std::map<PointSet, FgAbGroup> s{{0, FgAbGroup()}, {1, z}, {2, z}, {3, z}};
  std::map<std::pair<PointSet, PointSet>, AbHom> r;
  for (PointSet u : x.opens())
    for (PointSet v : x.opens())
      if (subset_of(v, u)) r.emplace(std::make_pair(u, v), v ? AbHom::identity(z) : AbHom::zero(s[u], s[v]));
  Presheaf f = make_presheaf(x, 3, s, r);
  SheafGluingData d = sheaf_data_from_cover(f, {3});
  EXPECT_FALSE(validate_sheaf_data(d).all());
  d.sheaf_variant = false;
  EXPECT_TRUE(validate_sheaf_data(d).all());
  LimitSheaf l = build_limit_sheaf(d);
  EXPECT_TRUE(verify_sheaf_glued(l.sheaf, l.pi, d, l).verdict);
}

TEST(SheafGlue, CanonicalProjections) {
  FinSpace q = two_origins_q();
  Presheaf f = constant_sheaf(q, q.full(), FgAbGroup::cyclic(4));
  SheafGluingData d = sheaf_data_from_cover(f, {3, 5});
  LimitSheaf l = build_limit_sheaf(d);
  EXPECT_TRUE(verify_sheaf_glued(f, canonical_projections(f, {3, 5}), d, l).verdict);
}
