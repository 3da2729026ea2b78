#include <gtest/gtest.h>

#include <set>

#include "glue/generate.hpp"

using namespace glue;

namespace {

// All elements of a finite group, as coordinate vectors.
std::vector<Vec> elements(const FgAbGroup& g) {
  const Vec& inv = g.invariant_factors();
  const Int e = inv.empty() ? 1 : inv.back();
  std::map<Vec, Vec> seen;
  Vec v(g.ambient(), 0);
  while (true) {
    seen.emplace(g.normal_form(v), v);
    int i = 0;
    while (i < g.ambient() && ++v[i] == e) v[i++] = 0;
    if (i == g.ambient()) break;
  }
  std::vector<Vec> out;
  for (auto& [k, x] : seen) out.push_back(x);
  return out;
}

// Sheaf axioms by enumerating sections, over every cover of every open.
bool brute_sheaf(const Presheaf& f) {
  if (!f.sections(0).is_trivial()) return false;
  for (PointSet v : f.opens()) {
    auto inside = f.ambient().opens_within(v);
    const size_t m = inside.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<PointSet> cover;
      PointSet all = 0;
      for (size_t a = 0; a < m; ++a)
        if (mask >> a & 1) {
          cover.push_back(inside[a]);
          all |= inside[a];
        }
      if (all != v) continue;
      auto nf = [&](PointSet u, const Vec& x) { return f.sections(u).normal_form(x); };
      std::set<std::vector<Vec>> images;
      auto sv = elements(f.sections(v));
      for (const Vec& s : sv) {
        std::vector<Vec> t;
        for (PointSet u : cover) t.push_back(nf(u, f.restriction(v, u).apply(s)));
        images.insert(t);
      }
      if (images.size() != sv.size()) return false;  // identity axiom
      // Count compatible families.
      std::vector<std::vector<Vec>> el;
      for (PointSet u : cover) el.push_back(elements(f.sections(u)));
      size_t compatible = 0;
      std::vector<size_t> idx(cover.size(), 0);
      while (true) {
        bool ok = true;
        for (size_t a = 0; a < cover.size() && ok; ++a)
          for (size_t b = a + 1; b < cover.size() && ok; ++b) {
            PointSet w = cover[a] & cover[b];
            ok = nf(w, f.restriction(cover[a], w).apply(el[a][idx[a]])) ==
                 nf(w, f.restriction(cover[b], w).apply(el[b][idx[b]]));
          }
        compatible += ok;
        size_t i = 0;
        while (i < idx.size() && ++idx[i] == el[i].size()) idx[i++] = 0;
        if (i == idx.size()) break;
      }
      if (compatible != sv.size()) return false;  // gluing axiom
    }
  }
  return true;
}

// G on every nonempty open with identity restrictions.
Presheaf constant_presheaf(const FinSpace& x, const FgAbGroup& g) {
  std::map<PointSet, FgAbGroup> s;
  std::map<std::pair<PointSet, PointSet>, AbHom> r;
  for (PointSet u : x.opens()) s[u] = u ? g : FgAbGroup();
  for (PointSet u : x.opens())
    for (PointSet v : x.opens())
      if (subset_of(v, u)) r.emplace(std::make_pair(u, v), v ? AbHom::identity(g) : AbHom::zero(s[u], s[v]));
  return make_presheaf(x, x.full(), s, r);
}

}  // namespace

TEST(Presheaf, ConstantSheafIsSheaf) {
  gen::Rng rng(20);
  for (int t = 0; t < 60; ++t) {
    FinSpace x = gen::random_space(rng, 1, 4);
    Presheaf f = constant_sheaf(x, x.full(), FgAbGroup::cyclic(gen::uniform(rng, 2, 3)));
    EXPECT_TRUE(is_sheaf(f).sheaf);
    EXPECT_TRUE(brute_sheaf(f));
  }
}

TEST(Presheaf, SheafCheckMatchesBruteForce) {
  gen::Rng rng(21);
  int failures = 0;
  for (int t = 0; t < 80; ++t) {
    FinSpace x = gen::random_space(rng, 1, 4);
    Presheaf f = constant_presheaf(x, FgAbGroup::cyclic(2));
    const bool expect = brute_sheaf(f);
    failures += !expect;
    EXPECT_EQ(is_sheaf(f).sheaf, expect) << x.str();
  }
  EXPECT_GT(failures, 0);  // disconnected opens occur
}

TEST(Presheaf, DisconnectedGluingFails) {
  Presheaf f = constant_presheaf(FinSpace::discrete(2), FgAbGroup::free(1));
  SheafCertificate c = is_sheaf(f);
  EXPECT_FALSE(c.sheaf);
  EXPECT_EQ(c.axiom, "gluing");
  EXPECT_EQ(c.open, PointSet{3});
}

TEST(Presheaf, NonzeroEmptySections) {
  FinSpace p = FinSpace::point();
  std::map<PointSet, FgAbGroup> s{{0, FgAbGroup::cyclic(2)}, {1, FgAbGroup::cyclic(2)}};
  std::map<std::pair<PointSet, PointSet>, AbHom> r{{{1, 0}, AbHom::identity(FgAbGroup::cyclic(2))}};
  Presheaf f = make_presheaf(p, 1, s, r, true);
  SheafCertificate c = is_sheaf(f);
  EXPECT_FALSE(c.sheaf);
  EXPECT_FALSE(c.empty_trivial);
}

TEST(Presheaf, FunctorialityEnforced) {
  FinSpace x = FinSpace::make(2, {0, 1, 3});
  FgAbGroup z = FgAbGroup::free(1);
  std::map<PointSet, FgAbGroup> s{{0, FgAbGroup()}, {1, z}, {3, z}};
  std::map<std::pair<PointSet, PointSet>, AbHom> r{{{3, 1}, AbHom(z, z, Matrix::from_rows({{2}}))}};
  EXPECT_NO_THROW(make_presheaf(x, 3, s, r, true));
  s.erase(1);
  EXPECT_THROW(make_presheaf(x, 3, s, r, true), PresheafError);
}

TEST(Presheaf, RestrictAndPushforward) {
  FinSpace x = FinSpace::make(3, {0, 1, 3, 5, 7});
  Presheaf f = constant_sheaf(x, x.full(), FgAbGroup::free(1));
  EXPECT_EQ(f.sections(7).ambient(), 1);
  Presheaf r = restrict_presheaf(f, 3);
  EXPECT_EQ(r.opens().size(), 3u);
  Subspace u = subspace(x, 3);
  Presheaf g = constant_sheaf(u.space, u.space.full(), FgAbGroup::free(1));
  Presheaf push = pushforward_embedding(g, u.inclusion);
  EXPECT_EQ(push.carrier(), PointSet{3});
  EXPECT_TRUE(are_isomorphic(push.sections(3), r.sections(3)));
  // {0, 2} is still an open embedding; swapping the points is not (the image of {0} is {1}).
  EXPECT_NO_THROW(pushforward_embedding(g, ContinuousMap::unchecked(u.space, x, {0, 2})));
  EXPECT_THROW(pushforward_embedding(g, ContinuousMap::unchecked(u.space, x, {1, 0})), InvalidInput);
}

TEST(Enriched, TwistIsNaturalIso) {
  gen::Rng rng(22);
  for (int t = 0; t < 40; ++t) {
    FinSpace x = gen::random_space(rng, 1, 4);
    Presheaf f = constant_sheaf(x, x.full(), gen::random_group(rng, 2));
    NatIso n = gen::twist_presheaf(rng, f);
    std::vector<std::string> problems;
    EXPECT_TRUE(is_nat_iso(n, &problems));
    EXPECT_TRUE(check_enriched_morphism(n.forward).ok);
    EXPECT_TRUE(is_sheaf(n.forward.src).sheaf);
    auto inv = invert_natural(n.forward);
    ASSERT_TRUE(inv);
    EXPECT_TRUE(equal_enriched(compose_enriched(inv->backward, n.forward), identity_enriched(n.forward.src)));
  }
}

TEST(Enriched, RestrictionComposes) {
  FinSpace x = FinSpace::make(3, {0, 1, 3, 7});
  Presheaf f = constant_sheaf(x, x.full(), FgAbGroup::cyclic(4));
  EnrichedMorphism a = restriction_enriched(f, 3);
  EnrichedMorphism b = restriction_enriched(a.dst, 1);
  EXPECT_TRUE(equal_enriched(compose_enriched(b, a), restriction_enriched(f, 1)));
  EXPECT_TRUE(equal_enriched(compose_enriched(identity_enriched(a.dst), a), a));
}
