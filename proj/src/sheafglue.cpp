#include "glue/sheafglue.hpp"

#include <sstream>

namespace glue {

namespace {

std::string pair_name(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

// Phi_ij restricted to the opens inside w.
EnrichedMorphism restrict_enriched(const EnrichedMorphism& m, PointSet w) {
  EnrichedMorphism out{restrict_presheaf(m.src, w), restrict_presheaf(m.dst, w), {}};
  for (PointSet x : out.src.opens()) out.alpha.push_back(m.at(x));
  return out;
}

}  // namespace

bool SheafGluingData::operator==(const SheafGluingData& o) const {
  if (!(base == o.base) || cover != o.cover || sheaf_variant != o.sheaf_variant || !(sheaves == o.sheaves) ||
      transitions.size() != o.transitions.size())
    return false;
  for (const auto& [k, m] : transitions) {
    auto it = o.transitions.find(k);
    if (it == o.transitions.end() || !equal_enriched(m, it->second)) return false;
  }
  return true;
}

ConditionReport validate_sheaf_data(const SheafGluingData& d) {
  ConditionReport r;
  const int n = d.n();
  r.set("structure", n >= 1 && static_cast<int>(d.sheaves.size()) == n, "cover and sheaf list disagree");
  if (!r.all()) return r;
  PointSet all = 0;
  for (int i = 0; i < n; ++i) {
    if (!d.base.is_open(d.cover[i])) r.set("structure", false, "cover member " + set_str(d.cover[i]) + " is not open");
    all |= d.cover[i];
    const Presheaf& f = d.sheaves[i];
    if (!(f.ambient() == d.base) || f.carrier() != d.cover[i])
      r.set("structure", false, "sheaf " + std::to_string(i) + " does not live on its cover member");
  }
  r.set("structure", all == d.base.full(), "cover does not exhaust the base");
  if (!r.all()) return r;
  for (const auto& [key, m] : d.transitions) {
    auto [i, j] = key;
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
      r.set("structure", false, "transition key " + pair_name(i, j) + " invalid");
      continue;
    }
    const PointSet w = d.overlap(i, j);
    if (!(m.src == restrict_presheaf(d.sheaves[i], w)) || !(m.dst == restrict_presheaf(d.sheaves[j], w)))
      r.set("structure", false, "transition " + pair_name(i, j) + " has wrong endpoints");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !d.transitions.count({i, j})) r.set("structure", false, "missing transition " + pair_name(i, j));
  if (!r.all()) return r;

  r.set("natural", true);
  r.set("inverse", true);
  r.set("cocycle", true);
  for (const auto& [key, m] : d.transitions) {
    EnrichedCheck c = check_enriched_morphism(m);
    r.set("natural", c.ok, "transition " + pair_name(key.first, key.second) + " is not natural");
    const auto& back = d.transitions.at({key.second, key.first});
    for (PointSet w : m.src.opens())
      r.set("inverse", compose(back.at(w), m.at(w)).equals(AbHom::identity(m.src.sections(w))),
            "Phi" + pair_name(key.second, key.first) + " does not invert Phi" + pair_name(key.first, key.second) +
                " over " + set_str(w));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const PointSet t = d.cover[i] & d.cover[j] & d.cover[k];
        for (PointSet w : d.base.opens_within(t)) {
          AbHom lhs = compose(d.transitions.at({j, k}).at(w), d.transitions.at({i, j}).at(w));
          r.set("cocycle", lhs.equals(d.transitions.at({i, k}).at(w)),
                "cocycle fails at (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                    ") over " + set_str(w));
        }
      }
  r.set("sheaf", true);
  if (d.sheaf_variant)
    for (int i = 0; i < n; ++i) {
      SheafCertificate c = is_sheaf(d.sheaves[i]);
      r.set("sheaf", c.sheaf, "F_" + std::to_string(i) + ": " + c.str());
    }
  return r;
}

// ---------------------------------------------------------------- functor

const Presheaf& SheafGluingFunctor::at(const GlueObject& a) const {
  auto it = objects.find(a);
  if (it == objects.end()) throw InvalidInput("functor has no image for " + a.label());
  return it->second;
}

const EnrichedMorphism& SheafGluingFunctor::arrow(const Generator& g) const {
  auto it = arrows.find(g);
  if (it == arrows.end()) throw InvalidInput("functor has no image for " + g.label());
  return it->second;
}

TargetOps<EnrichedMorphism> enriched_ops(const SheafGluingFunctor& g) {
  TargetOps<EnrichedMorphism> ops;
  ops.compose = [](const EnrichedMorphism& later, const EnrichedMorphism& earlier) {
    return compose_enriched(later, earlier);
  };
  ops.identity = [&g](const GlueObject& a) { return identity_enriched(g.at(a)); };
  ops.equal = [](const EnrichedMorphism& a, const EnrichedMorphism& b) { return equal_enriched(a, b); };
  return ops;
}

SheafGluingFunctor sheaf_functor_from_data(const SheafGluingData& d) {
  ConditionReport r = validate_sheaf_data(d);
  if (!r.all()) throw GluingDataError(r);
  const int n = d.n();
  SheafGluingFunctor g{GluingIndexCategory::enumerate(n), d.sheaf_variant, {}, {}};
  for (int i = 0; i < n; ++i) g.objects[GlueObject::single(i)] = d.sheaves[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      g.objects[GlueObject::pair(i, j)] = restrict_presheaf(d.sheaves[i], d.overlap(i, j));
      g.arrows[Generator::eta(i, j)] = restriction_enriched(d.sheaves[i], d.overlap(i, j));
      // tau(i,j) : [j,i] -> [i,j] goes F_j|U_ij -> F_i|U_ij
      g.arrows[Generator::tau(i, j)] = d.transitions.at({j, i});
    }
  for (const auto& a : g.cat.objects()) {
    if (a.shape != Shape::Triple) continue;
    const PointSet t = d.overlap(a.i, a.j) & d.cover[a.k];
    g.objects[a] = restrict_presheaf(d.sheaves[a.i], t);
    for (int m : {a.j, a.k})
      g.arrows[Generator::eta3(a.i, a.j, a.k, m)] = restriction_enriched(g.objects.at(GlueObject::pair(a.i, m)), t);
  }
  for (const auto& gen : g.cat.generators())
    if (gen.kind == GenKind::Tau3) {
      const PointSet t = d.cover[gen.i] & d.cover[gen.j] & d.cover[gen.k];
      g.arrows[gen] = restrict_enriched(d.transitions.at({gen.j, gen.i}), t);
    }
  return g;
}

SheafGluingData data_from_sheaf_functor(const SheafGluingFunctor& g) {
  SheafGluingData d;
  const int n = g.n();
  d.sheaf_variant = g.sheaf_variant;
  d.base = g.at(GlueObject::single(0)).ambient();
  for (int i = 0; i < n; ++i) {
    d.sheaves.push_back(g.at(GlueObject::single(i)));
    d.cover.push_back(d.sheaves.back().carrier());
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) d.transitions[{j, i}] = g.arrow(Generator::tau(i, j));
  return d;
}

ConditionReport validate_sheaf_functor(const SheafGluingFunctor& g) {
  ConditionReport r;
  r.set("structure", true);
  for (const auto& a : g.cat.objects())
    if (!g.objects.count(a)) r.set("structure", false, "no image for object " + a.label());
  if (!r.all()) return r;
  for (const auto& gen : g.cat.generators()) {
    auto it = g.arrows.find(gen);
    if (it == g.arrows.end()) {
      r.set("structure", false, "no image for " + gen.label());
      continue;
    }
    if (!(it->second.src == g.at(gen.dom())) || !(it->second.dst == g.at(gen.cod())))
      r.set("structure", false, "image of " + gen.label() + " has wrong endpoints");
  }
  if (!r.all()) return r;
  r.set("natural", true);
  for (const auto& [gen, m] : g.arrows) r.set("natural", check_enriched_morphism(m).ok, gen.label() + " is not natural");
  GeneratorImages<EnrichedMorphism> images = [&g](const Generator& gen) -> const EnrichedMorphism* {
    auto it = g.arrows.find(gen);
    return it == g.arrows.end() ? nullptr : &it->second;
  };
  RelationReport rel = check_generator_relations<EnrichedMorphism>(g.cat, images, enriched_ops(g));
  r.set("relations", rel.empty());
  for (const auto& f : rel) r.problems.push_back("relations: (" + f.relation + ") " + f.detail);
  r.set("sheaf", true);
  if (g.sheaf_variant)
    for (int i = 0; i < g.n(); ++i) {
      SheafCertificate c = is_sheaf(g.at(GlueObject::single(i)));
      r.set("sheaf", c.sheaf, "G_" + std::to_string(i) + ": " + c.str());
    }
  return r;
}

// ---------------------------------------------------------------- limit sheaf

LimitSheaf build_limit_sheaf(const SheafGluingData& d) {
  const int n = d.n();
  const auto opens = d.base.opens();
  LimitSheaf out;
  std::map<PointSet, FgAbGroup> sections;
  for (PointSet v : opens) {
    std::vector<FgAbGroup> parts;
    for (int i = 0; i < n; ++i) parts.push_back(d.sheaves[i].sections(v & d.cover[i]));
    ProductResult p = product(parts);
    // Both sides of the compatibility condition land in prod_{i<j} F_j(V n U_ij).
    std::vector<FgAbGroup> targets;
    std::vector<AbHom> lhs, rhs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const PointSet w = v & d.overlap(i, j);
        const Presheaf& fi = d.sheaves[i];
        const Presheaf& fj = d.sheaves[j];
        targets.push_back(fj.sections(w));
        lhs.push_back(compose(d.transitions.at({i, j}).at(w),
                              compose(fi.restriction(v & d.cover[i], w), p.projections[i])));
        rhs.push_back(compose(fj.restriction(v & d.cover[j], w), p.projections[j]));
      }
    ProductResult t = product(targets);
    SubgroupResult e = equalizer(pairing_into_product(t, p.group, lhs), pairing_into_product(t, p.group, rhs));
    sections[v] = e.group;
    out.product.push_back(p);
    out.inclusion.push_back(e.inclusion);
  }
  std::map<std::pair<PointSet, PointSet>, AbHom> res;
  for (size_t a = 0; a < opens.size(); ++a)
    for (size_t b = 0; b < opens.size(); ++b) {
      const PointSet v = opens[a], w = opens[b];
      if (!subset_of(w, v)) continue;
      std::vector<AbHom> legs;
      for (int i = 0; i < n; ++i)
        legs.push_back(compose(d.sheaves[i].restriction(v & d.cover[i], w & d.cover[i]),
                               compose(out.product[a].projections[i], out.inclusion[a])));
      AbHom t = pairing_into_product(out.product[b], sections.at(v), legs);
      auto u = factor_through(out.inclusion[b], t);
      if (!u) throw Falsification("restriction of a compatible family leaves L over " + set_str(v) + " > " + set_str(w));
      res.emplace(std::make_pair(v, w), *u);
    }
  out.sheaf = make_presheaf(d.base, d.base.full(), sections, res);
  for (int i = 0; i < n; ++i) {
    EnrichedMorphism m{out.sheaf, d.sheaves[i], {}};
    for (size_t a = 0; a < opens.size(); ++a) m.alpha.push_back(compose(out.product[a].projections[i], out.inclusion[a]));
    out.pi.push_back(std::move(m));
  }
  return out;
}

std::optional<Vec> extend_section(const SheafGluingData& d, const LimitSheaf& l, int i, PointSet v, const Vec& s) {
  if (i < 0 || i >= d.n()) throw InvalidInput("extend_section: chart index out of range");
  if (!subset_of(v, d.cover[i]) || !d.base.is_open(v)) return std::nullopt;
  const int a = l.sheaf.index(v);
  Vec tuple;
  for (int j = 0; j < d.n(); ++j) {
    Vec part;
    if (j == i) {
      part = s;
    } else {
      const PointSet w = v & d.cover[j];  // = V n U_ij since V lies in U_i
      part = d.transitions.at({i, j}).at(w).apply(d.sheaves[i].restriction(v, w).apply(s));
    }
    tuple.insert(tuple.end(), part.begin(), part.end());
  }
  return preimage(l.inclusion[a], tuple);
}

std::optional<EnrichedMorphism> comparison_map(const Presheaf& f, const std::vector<EnrichedMorphism>& p,
                                               const SheafGluingData& d, const LimitSheaf& l) {
  EnrichedMorphism mu{f, l.sheaf, {}};
  for (PointSet v : f.opens()) {
    const int a = l.sheaf.index(v);
    std::vector<AbHom> legs;
    for (int i = 0; i < d.n(); ++i) legs.push_back(p[i].at(v));
    auto u = factor_through(l.inclusion[a], pairing_into_product(l.product[a], f.sections(v), legs));
    if (!u) return std::nullopt;
    mu.alpha.push_back(*u);
  }
  return mu;
}

SheafGlueReport verify_sheaf_glued(const Presheaf& f, const std::vector<EnrichedMorphism>& p, const SheafGluingData& d,
                                   const LimitSheaf& l) {
  SheafGlueReport out;
  ConditionReport& r = out.report;
  const int n = d.n();
  r.set("legs", f.ambient() == d.base && f.carrier() == d.base.full() && static_cast<int>(p.size()) == n,
        "candidate must live on the base with one projection per chart");
  if (r.get("legs"))
    for (int i = 0; i < n; ++i) {
      r.set("legs", p[i].src == f && p[i].dst == d.sheaves[i], "projection " + std::to_string(i) + " has wrong endpoints");
      if (p[i].src == f && p[i].dst == d.sheaves[i])
        r.set("legs", check_enriched_morphism(p[i]).ok, "projection " + std::to_string(i) + " is not natural");
    }
  if (!r.get("legs")) {
    for (const char* c : {"cone", "natural", "iso", "commute"}) r.set(c, false);
    return out;
  }
  r.set("cone", true);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const PointSet uij = d.overlap(i, j);
      for (PointSet v : f.opens()) {
        const PointSet w = v & uij;
        AbHom lhs = compose(d.transitions.at({i, j}).at(w),
                            compose(d.sheaves[i].restriction(v & d.cover[i], w), p[i].at(v)));
        AbHom rhs = compose(d.sheaves[j].restriction(v & d.cover[j], w), p[j].at(v));
        r.set("cone", lhs.equals(rhs), "projections " + pair_name(i, j) + " disagree over " + set_str(v));
      }
    }
  if (!r.get("cone")) {
    for (const char* c : {"natural", "iso", "commute"}) r.set(c, false);
    return out;
  }
  out.comparison = comparison_map(f, p, d, l);
  if (!out.comparison) throw Falsification("compatible projection family does not factor through the limit sheaf");
  const EnrichedMorphism& mu = *out.comparison;
  r.set("natural", check_enriched_morphism(mu).ok, "comparison map is not natural");
  auto inv = invert_natural(mu);
  std::vector<std::string> why;
  r.set("iso", inv && is_nat_iso(*inv, &why), "comparison map is not an isomorphism");
  r.set("commute", true);
  for (int i = 0; i < n; ++i)
    r.set("commute", equal_enriched(compose_enriched(l.pi[i], mu), p[i]),
          "comparison does not commute with projection " + std::to_string(i));
  out.verdict = r.all();
  return out;
}

SheafGluingData sheaf_data_from_cover(const Presheaf& f, const std::vector<PointSet>& cover) {
  SheafGluingData d;
  d.base = f.ambient();
  d.cover = cover;
  for (PointSet u : cover) d.sheaves.push_back(restrict_presheaf(f, u));
  for (size_t i = 0; i < cover.size(); ++i)
    for (size_t j = 0; j < cover.size(); ++j)
      if (i != j) d.transitions[{static_cast<int>(i), static_cast<int>(j)}] = identity_enriched(restrict_presheaf(f, cover[i] & cover[j]));
  return d;
}

std::vector<EnrichedMorphism> canonical_projections(const Presheaf& f, const std::vector<PointSet>& cover) {
  std::vector<EnrichedMorphism> out;
  for (PointSet u : cover) out.push_back(restriction_enriched(f, u));
  return out;
}

}  // namespace glue
