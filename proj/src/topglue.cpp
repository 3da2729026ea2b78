#include "glue/topglue.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "glue/kernels.hpp"

namespace glue {

// ---------------------------------------------------------------- reports

void ConditionReport::set(const std::string& name, bool ok, const std::string& why) {
  auto it = conditions.find(name);
  if (it == conditions.end())
    conditions[name] = ok;
  else
    it->second = it->second && ok;
  if (!ok && !why.empty()) problems.push_back(name + ": " + why);
}

bool ConditionReport::all() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& kv) { return kv.second; });
}

bool ConditionReport::get(const std::string& name) const {
  auto it = conditions.find(name);
  return it != conditions.end() && it->second;
}

namespace {

std::string describe_failures(const ConditionReport& r) {
  std::ostringstream os;
  os << "invalid gluing data:";
  for (const auto& [k, v] : r.conditions)
    if (!v) os << " " << k;
  for (const auto& p : r.problems) os << "; " << p;
  return os.str();
}

std::string pair_name(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

std::string triple_name(int i, int j, int k) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

bool typed(const ContinuousMap& f, const FinSpace& dom, const FinSpace& cod) {
  return f.dom == dom && f.cod == cod && is_total(f);
}

}  // namespace

GluingDataError::GluingDataError(ConditionReport report)
    : InvalidInput(describe_failures(report)), report_(std::move(report)) {}

// ---------------------------------------------------------------- data

const TripleOverlap& TopGluingData::triple(int i, int j, int k) const {
  auto it = triples.find({i, std::min(j, k), std::max(j, k)});
  if (it == triples.end()) throw InvalidInput("missing triple overlap " + triple_name(i, j, k));
  return it->second;
}

const ContinuousMap& TopGluingData::triple_leg(int i, int j, int k, int m) const {
  const TripleOverlap& t = triple(i, j, k);
  if (m == std::min(j, k)) return t.to_j;
  if (m == std::max(j, k)) return t.to_k;
  throw InvalidInput("triple leg index must be one of the pair");
}

ConditionReport validate_data(const TopGluingData& d) {
  ConditionReport r;
  const int n = d.n;
  r.set("structure", n >= 1 && static_cast<int>(d.spaces.size()) == n, "index count and chart list disagree");
  if (!r.all()) return r;
  auto distinct = [](int a, int b, int c) { return a != b && a != c && b != c; };

  for (const auto& [key, ov] : d.overlaps) {
    auto [i, j] = key;
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
      r.set("structure", false, "overlap key " + pair_name(i, j) + " out of range or diagonal");
      continue;
    }
    if (!typed(ov.upsilon, ov.space, d.spaces[i])) r.set("structure", false, "overlap map " + pair_name(i, j) + " mistyped");
  }
  for (const auto& [key, phi] : d.transitions) {
    auto [i, j] = key;
    if (!d.overlaps.count({i, j}) || !d.overlaps.count({j, i})) {
      r.set("structure", false, "transition " + pair_name(i, j) + " without overlaps");
      continue;
    }
    if (!typed(phi, d.overlaps.at({i, j}).space, d.overlaps.at({j, i}).space))
      r.set("structure", false, "transition " + pair_name(i, j) + " mistyped");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        if (!d.overlaps.count({i, j})) r.set("structure", false, "missing overlap " + pair_name(i, j));
        if (!d.transitions.count({i, j})) r.set("structure", false, "missing transition " + pair_name(i, j));
      }
  if (!r.all()) return r;

  for (const auto& [key, t] : d.triples) {
    auto [i, j, k] = key;
    if (!(j < k) || !distinct(i, j, k) || i < 0 || k >= n || j < 0) {
      r.set("structure", false, "triple key " + triple_name(i, j, k) + " not canonical");
      continue;
    }
    if (!typed(t.to_j, t.space, d.overlaps.at({i, j}).space) || !typed(t.to_k, t.space, d.overlaps.at({i, k}).space))
      r.set("structure", false, "triple legs " + triple_name(i, j, k) + " mistyped");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (distinct(i, j, k) && !d.triples.count({i, j, k}))
          r.set("structure", false, "missing triple overlap " + triple_name(i, j, k));
  if (!r.all()) return r;
  for (const auto& [key, phi] : d.triple_transitions) {
    auto [i, j, k] = key;
    if (!distinct(i, j, k) || i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) {
      r.set("structure", false, "triple transition key " + triple_name(i, j, k) + " invalid");
      continue;
    }
    if (!typed(phi, d.triple(i, j, k).space, d.triple(j, i, k).space))
      r.set("structure", false, "triple transition " + triple_name(i, j, k) + " mistyped");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (distinct(i, j, k) && !d.triple_transitions.count({i, j, k}))
          r.set("structure", false, "missing triple transition " + triple_name(i, j, k));
  if (!r.all()) return r;

  auto check_map = [&](const ContinuousMap& f, const std::string& what) {
    r.set("continuity", is_continuous(f), what + " is not continuous");
    if (d.open_variant) r.set("openness", is_open_map(f), what + " is not open");
  };
  r.set("continuity", true);
  r.set("openness", true);
  for (const auto& [key, ov] : d.overlaps) {
    check_map(ov.upsilon, "overlap map " + pair_name(key.first, key.second));
    r.set("overlap_mono", is_injective(ov.upsilon),
          "overlap map " + pair_name(key.first, key.second) + " is not injective (degenerate triple [i,j,j] is not a pullback)");
  }
  for (const auto& [key, phi] : d.transitions) check_map(phi, "transition " + pair_name(key.first, key.second));
  for (const auto& [key, t] : d.triples) {
    check_map(t.to_j, "triple leg " + triple_name(key[0], key[1], key[2]));
    check_map(t.to_k, "triple leg " + triple_name(key[0], key[1], key[2]));
  }
  for (const auto& [key, phi] : d.triple_transitions) check_map(phi, "triple transition " + triple_name(key[0], key[1], key[2]));

  r.set("inverse", true);
  for (const auto& [key, phi] : d.transitions) {
    auto [i, j] = key;
    r.set("inverse", compose(d.transitions.at({j, i}), phi) == ContinuousMap::identity(phi.dom),
          "phi" + pair_name(j, i) + " o phi" + pair_name(i, j) + " is not the identity");
  }
  r.set("c", true);
  r.set("d", true);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!distinct(i, j, k)) continue;
        const auto& pk = d.triple_transitions.at({i, j, k});
        r.set("c", compose(d.triple_transitions.at({j, k, i}), pk) == d.triple_transitions.at({i, k, j}),
              "cocycle fails at " + triple_name(i, j, k));
        r.set("c", compose(d.triple_transitions.at({j, i, k}), pk) == ContinuousMap::identity(pk.dom),
              "triple transition " + triple_name(i, j, k) + " not inverted by " + triple_name(j, i, k));
        r.set("d", compose(d.triple_leg(j, i, k, i), pk) == compose(d.transitions.at({i, j}), d.triple_leg(i, j, k, j)),
              "triple transition " + triple_name(i, j, k) + " incompatible with phi" + pair_name(i, j));
      }
  r.set("pullback", true);
  for (const auto& [key, t] : d.triples) {
    auto [i, j, k] = key;
    Square sq{t.to_j, t.to_k, d.overlaps.at({i, j}).upsilon, d.overlaps.at({i, k}).upsilon};
    r.set("pullback", is_pullback_square(sq) == SquareVerdict::Pullback,
          "triple overlap " + triple_name(i, j, k) + " is not a pullback");
  }
  r.set("overlap_mono", true);
  return r;
}

// ---------------------------------------------------------------- functor

const FinSpace& TopGluingFunctor::at(const GlueObject& a) const {
  auto it = objects.find(a);
  if (it == objects.end()) throw InvalidInput("functor has no image for " + a.label());
  return it->second;
}

const ContinuousMap& TopGluingFunctor::arrow(const Generator& g) const {
  auto it = arrows.find(g);
  if (it == arrows.end()) throw InvalidInput("functor has no image for " + g.label());
  return it->second;
}

TargetOps<ContinuousMap> top_op_ops(const TopGluingFunctor& g) {
  TargetOps<ContinuousMap> ops;
  ops.compose = [](const ContinuousMap& later, const ContinuousMap& earlier) { return compose(earlier, later); };
  ops.identity = [&g](const GlueObject& a) { return ContinuousMap::identity(g.at(a)); };
  ops.equal = [](const ContinuousMap& a, const ContinuousMap& b) { return a == b; };
  return ops;
}

namespace {

GeneratorImages<ContinuousMap> images_of(const TopGluingFunctor& g) {
  return [&g](const Generator& gen) -> const ContinuousMap* {
    auto it = g.arrows.find(gen);
    return it == g.arrows.end() ? nullptr : &it->second;
  };
}

}  // namespace

ContinuousMap TopGluingFunctor::op_arrow(const GlueObject& a, const GlueObject& b) const {
  return evaluate_arrow(cat, images_of(*this), top_op_ops(*this), a, b);
}

TopGluingFunctor functor_from_data(const TopGluingData& d) {
  ConditionReport r = validate_data(d);
  if (!r.all()) throw GluingDataError(r);
  TopGluingFunctor g{GluingIndexCategory::enumerate(d.n), d.open_variant, {}, {}};
  for (int i = 0; i < d.n; ++i) g.objects[GlueObject::single(i)] = d.spaces[i];
  for (const auto& [key, ov] : d.overlaps) {
    g.objects[GlueObject::pair(key.first, key.second)] = ov.space;
    g.arrows[Generator::eta(key.first, key.second)] = ov.upsilon;
  }
  for (const auto& [key, phi] : d.transitions) g.arrows[Generator::tau(key.first, key.second)] = phi;
  for (const auto& [key, t] : d.triples) {
    auto [i, j, k] = key;
    g.objects[GlueObject::triple(i, j, k)] = t.space;
    g.arrows[Generator::eta3(i, j, k, j)] = t.to_j;
    g.arrows[Generator::eta3(i, j, k, k)] = t.to_k;
  }
  for (const auto& [key, phi] : d.triple_transitions) g.arrows[Generator::tau3(key[0], key[1], key[2])] = phi;
  return g;
}

TopGluingData data_from_functor(const TopGluingFunctor& g) {
  TopGluingData d;
  d.n = g.n();
  d.open_variant = g.open_variant;
  for (int i = 0; i < d.n; ++i) d.spaces.push_back(g.at(GlueObject::single(i)));
  for (const auto& gen : g.cat.generators()) {
    const ContinuousMap& f = g.arrow(gen);
    switch (gen.kind) {
      case GenKind::Eta: d.overlaps[{gen.i, gen.j}] = Overlap{f.dom, f}; break;
      case GenKind::Tau: d.transitions[{gen.i, gen.j}] = f; break;
      case GenKind::Eta3: {
        TripleOverlap& t = d.triples[{gen.i, gen.j, gen.k}];
        t.space = f.dom;
        (gen.n == gen.j ? t.to_j : t.to_k) = f;
        break;
      }
      case GenKind::Tau3: d.triple_transitions[{gen.i, gen.j, gen.k}] = f; break;
    }
  }
  return d;
}

ConditionReport validate_functor(const TopGluingFunctor& g) {
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
    if (!typed(it->second, g.at(gen.cod()), g.at(gen.dom())))
      r.set("structure", false, "image of " + gen.label() + " has wrong endpoints");
  }
  if (!r.all()) return r;
  r.set("continuity", true);
  r.set("openness", true);
  for (const auto& [gen, f] : g.arrows) {
    r.set("continuity", is_continuous(f), gen.label() + " is not continuous");
    if (g.open_variant) r.set("openness", is_open_map(f), gen.label() + " is not open");
  }
  RelationReport rel = check_generator_relations<ContinuousMap>(g.cat, images_of(g), top_op_ops(g));
  r.set("relations", rel.empty());
  for (const auto& f : rel) r.problems.push_back("relations: (" + f.relation + ") " + f.detail);
  r.set("pullback", true);
  r.set("overlap_mono", true);
  for (const auto& a : g.cat.objects()) {
    if (a.shape == Shape::Pair)
      r.set("overlap_mono", is_injective(g.arrow(Generator::eta(a.i, a.j))), "image of eta" + pair_name(a.i, a.j) + " not injective");
    if (a.shape != Shape::Triple) continue;
    Square sq{g.arrow(Generator::eta3(a.i, a.j, a.k, a.j)), g.arrow(Generator::eta3(a.i, a.j, a.k, a.k)),
              g.arrow(Generator::eta(a.i, a.j)), g.arrow(Generator::eta(a.i, a.k))};
    r.set("pullback", is_pullback_square(sq) == SquareVerdict::Pullback, a.label() + " is not a pullback");
  }
  return r;
}

// ---------------------------------------------------------------- standard representative

GluedSpace standard_representative(const TopGluingFunctor& g) {
  const int n = g.n();
  std::vector<FinSpace> charts;
  for (int i = 0; i < n; ++i) charts.push_back(g.at(GlueObject::single(i)));
  Coproduct cp = coproduct(charts);
  GluedSpace out;
  out.disjoint_union = cp.space;
  out.eps = cp.injections;
  const int total = cp.space.size();
  std::vector<PointSet> rel(total, 0);
  for (int x = 0; x < total; ++x) rel[x] |= bit(x);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const ContinuousMap& ups_ij = g.arrow(Generator::eta(i, j));
      const ContinuousMap& ups_ji = g.arrow(Generator::eta(j, i));
      const ContinuousMap& phi = g.arrow(Generator::tau(i, j));
      for (int u = 0; u < ups_ij.dom.size(); ++u) {
        int x = cp.offsets[i] + ups_ij(u);
        int y = cp.offsets[j] + ups_ji(phi(u));
        rel[x] |= bit(y);
      }
    }
  for (int x = 0; x < total; ++x)
    for (int y : members(rel[x])) {
      if (!(rel[y] & bit(x)))
        throw Falsification("R_G is not symmetric: " + std::to_string(x) + " ~ " + std::to_string(y));
      if (!subset_of(rel[y], rel[x]))
        throw Falsification("R_G is not transitive at " + std::to_string(x) + " ~ " + std::to_string(y));
    }
  for (int x = 0; x < total; ++x)
    for (int y : members(rel[x])) out.relation.emplace_back(x, y);
  Quotient quo = quotient_final(cp.space, out.relation);
  out.q = quo.space;
  out.pi = quo.projection;
  for (int i = 0; i < n; ++i) {
    ContinuousMap iota = compose(out.pi, out.eps[i]);
    if (!is_injective(iota)) throw Falsification("iota_" + std::to_string(i) + " is not injective");
    if (!is_continuous(iota)) throw Falsification("iota_" + std::to_string(i) + " is not continuous");
    if (g.open_variant && !is_open_map(iota)) throw Falsification("iota_" + std::to_string(i) + " is not open");
    out.iota[GlueObject::single(i)] = iota;
  }
  for (const auto& a : g.cat.objects()) {
    if (a.shape == Shape::Pair)
      out.iota[a] = compose(out.iota.at(GlueObject::single(a.i)), g.arrow(Generator::eta(a.i, a.j)));
  }
  for (const auto& a : g.cat.objects()) {
    if (a.shape == Shape::Triple)
      out.iota[a] = compose(out.iota.at(GlueObject::pair(a.i, a.j)), g.arrow(Generator::eta3(a.i, a.j, a.k, a.j)));
  }
  return out;
}

// ---------------------------------------------------------------- cones

ConeCheck is_cone(const FinSpace& apex, const Legs& psi, const TopGluingFunctor& g) {
  for (const auto& a : g.cat.objects()) {
    auto it = psi.find(a);
    if (it == psi.end()) throw InvalidInput("cone has no leg for " + a.label());
    if (!typed(it->second, g.at(a), apex)) throw InvalidInput("cone leg for " + a.label() + " has wrong endpoints");
  }
  ConeCheck c;
  c.full = true;
  for (const auto& m : g.cat.morphisms())
    if (!(compose(psi.at(m.dom), g.op_arrow(m.dom, m.cod)) == psi.at(m.cod))) {
      c.full = false;
      break;
    }
  bool eta_ok = true, triple_ok = true, tau_ok = true, tau_composite_ok = true;
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto ij = GlueObject::pair(i, j), ji = GlueObject::pair(j, i);
      const auto& phi = g.arrow(Generator::tau(i, j));
      eta_ok &= compose(psi.at(GlueObject::single(i)), g.arrow(Generator::eta(i, j))) == psi.at(ij);
      tau_ok &= compose(psi.at(ji), phi) == psi.at(ij);
      tau_composite_ok &=
          compose(psi.at(GlueObject::single(j)), compose(g.arrow(Generator::eta(j, i)), phi)) == psi.at(ij);
    }
  for (const auto& a : g.cat.objects()) {
    if (a.shape != Shape::Triple) continue;
    for (int m : {a.j, a.k})
      triple_ok &= compose(psi.at(GlueObject::pair(a.i, m)), g.arrow(Generator::eta3(a.i, a.j, a.k, m))) == psi.at(a);
  }
  c.figure = tau_ok && eta_ok && triple_ok;
  c.composite = tau_composite_ok && eta_ok && triple_ok;
  return c;
}

GlueReport verify_glued(const FinSpace& q, const Legs& iota, const TopGluingFunctor& g) {
  GlueReport out;
  ConditionReport& r = out.report;
  r.set("legs", true);
  for (const auto& a : g.cat.objects()) {
    auto it = iota.find(a);
    if (it == iota.end() || !typed(it->second, g.at(a), q)) r.set("legs", false, "leg for " + a.label() + " missing or mistyped");
  }
  if (!r.get("legs")) {
    for (const char* c : {"a", "b", "c", "d", "e", "final_topology", "overlap_law", "triple_law"}) r.set(c, false);
    return out;
  }
  const int n = g.n();
  auto single = [&](int i) -> const ContinuousMap& { return iota.at(GlueObject::single(i)); };
  auto image_of = [&](const GlueObject& a) { return iota.at(a).image(g.at(a).full()); };
  for (const char* c : {"a", "b", "c", "e", "overlap_law", "triple_law"}) r.set(c, true);
  PointSet covered = 0;
  std::vector<ContinuousMap> singles;
  for (int i = 0; i < n; ++i) {
    const ContinuousMap& li = single(i);
    singles.push_back(li);
    covered |= image_of(GlueObject::single(i));
    std::string name = "iota_" + std::to_string(i);
    r.set("e", is_injective(li), name + " is not injective");
    r.set("e", is_continuous(li), name + " is not continuous");
    if (g.open_variant) r.set("e", is_open_map(li), name + " is not open");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& ups = g.arrow(Generator::eta(i, j));
      r.set("a", iota.at(GlueObject::pair(i, j)) == compose(li, ups), "iota" + pair_name(i, j) + " != iota_i o upsilon");
      r.set("c", compose(li, ups) == compose(single(j), compose(g.arrow(Generator::eta(j, i)), g.arrow(Generator::tau(i, j)))),
            "charts " + pair_name(i, j) + " disagree on the overlap");
      PointSet meet = image_of(GlueObject::single(i)) & image_of(GlueObject::single(j));
      r.set("overlap_law", meet == image_of(GlueObject::pair(i, j)) && meet == image_of(GlueObject::pair(j, i)),
            "image intersection " + pair_name(i, j) + " differs from the overlap image");
    }
  }
  for (const auto& a : g.cat.objects()) {
    if (a.shape != Shape::Triple) continue;
    for (int m : {a.j, a.k})
      r.set("b", iota.at(a) == compose(iota.at(GlueObject::pair(a.i, m)), g.arrow(Generator::eta3(a.i, a.j, a.k, m))),
            "triple leg " + a.label() + " incompatible");
    PointSet meet = image_of(GlueObject::single(a.i)) & image_of(GlueObject::single(a.j)) & image_of(GlueObject::single(a.k));
    r.set("triple_law", meet == image_of(a), "triple image " + a.label() + " differs from the triple intersection");
  }
  r.set("d", covered == q.full(), "charts do not cover Q");
  if (q.size() <= 24) {
    r.set("final_topology", kernels::final_opens_parallel(q.size(), singles) == q.opens(),
          "topology of Q is not final for the chart maps");
  } else {
    r.set("final_topology", false, "final topology check limited to 24 points");
  }
  out.verdict = r.get("legs") && r.get("a") && r.get("b") && r.get("c") && r.get("d") && r.get("e");
  out.glued_up = r.all();
  return out;
}

ContinuousMap mediating_morphism(const FinSpace& apex, const Legs& psi, const GluedSpace& glued,
                                 const TopGluingFunctor& g) {
  if (!is_cone(apex, psi, g).full) throw InvalidInput("mediating_morphism: legs do not form a cone");
  const FinSpace& q = glued.q;
  std::vector<int> mu(q.size(), -1);
  for (int i = 0; i < g.n(); ++i) {
    const ContinuousMap& li = glued.iota.at(GlueObject::single(i));
    const ContinuousMap& pi = psi.at(GlueObject::single(i));
    for (int x = 0; x < li.dom.size(); ++x) {
      int& slot = mu[li(x)];
      if (slot >= 0 && slot != pi(x))
        throw Falsification("mediating map ill-defined at point " + std::to_string(li(x)) + " of Q");
      slot = pi(x);
    }
  }
  for (int p = 0; p < q.size(); ++p)
    if (mu[p] < 0) throw Falsification("point " + std::to_string(p) + " of Q lies in no chart image");
  ContinuousMap m = ContinuousMap::unchecked(q, apex, mu);
  if (!is_continuous(m)) throw Falsification("mediating map is not continuous");
  for (const auto& [a, leg] : glued.iota)
    if (!(compose(m, leg) == psi.at(a))) throw Falsification("mediating map does not commute at " + a.label());
  return m;
}

UniquenessCheck check_mediating_unique(const FinSpace& apex, const Legs& psi, const GluedSpace& glued,
                                       const ContinuousMap& mu, std::uint64_t seed, std::uint64_t exhaustive_limit) {
  UniquenessCheck out;
  std::vector<kernels::LegConstraint> legs;
  for (const auto& [a, leg] : glued.iota) legs.emplace_back(leg, psi.at(a));
  if (kernels::function_space_size(glued.q.size(), apex.size()) <= exhaustive_limit) {
    out.exhaustive = true;
    kernels::MapCount c = kernels::count_mediating_parallel(glued.q, apex, legs, true);
    out.solutions = c.count;
    out.unique = c.count == 1 && c.first == mu.assign;
    return out;
  }
  std::mt19937_64 rng(seed);
  out.unique = true;
  for (int s = 0; s < 64 && apex.size() > 1 && glued.q.size() > 0; ++s) {
    std::vector<int> h = mu.assign;
    int p = static_cast<int>(rng() % static_cast<std::uint64_t>(glued.q.size()));
    int v = static_cast<int>(rng() % static_cast<std::uint64_t>(apex.size() - 1));
    h[p] = v >= mu(p) ? v + 1 : v;
    bool violates = false;
    for (const auto& [in, outleg] : legs)
      for (int x = 0; x < in.dom.size() && !violates; ++x) violates = h[in(x)] != outleg(x);
    if (!violates) out.unique = false;
  }
  return out;
}

// ---------------------------------------------------------------- cover functor

CoverFunctor cover_functor(const FinSpace& u, const std::vector<PointSet>& cover) {
  if (cover.empty()) throw InvalidInput("cover must be nonempty");
  PointSet all = 0;
  for (PointSet c : cover) {
    if (!u.is_open(c)) throw InvalidInput("cover member " + set_str(c) + " is not open");
    all |= c;
  }
  if (all != u.full()) throw InvalidInput("not a cover: union is " + set_str(all));
  const int n = static_cast<int>(cover.size());
  // Maps between subspaces of u, matching ambient labels.
  auto relabel = [](const Subspace& from, const Subspace& to) {
    std::vector<int> a;
    for (int p : from.points) a.push_back(static_cast<int>(std::find(to.points.begin(), to.points.end(), p) - to.points.begin()));
    return ContinuousMap::unchecked(from.space, to.space, a);
  };
  std::vector<Subspace> charts;
  for (PointSet c : cover) charts.push_back(subspace(u, c));
  std::map<PairKey, Subspace> pairs;
  TopGluingData d;
  d.n = n;
  d.open_variant = true;
  for (const auto& c : charts) d.spaces.push_back(c.space);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        pairs.emplace(PairKey{i, j}, subspace(u, cover[i] & cover[j]));
        d.overlaps[{i, j}] = Overlap{pairs.at({i, j}).space, relabel(pairs.at({i, j}), charts[i])};
      }
  for (const auto& [key, s] : pairs) d.transitions[key] = relabel(s, pairs.at({key.second, key.first}));
  std::map<TripleKey, Subspace> trips;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i != j && i != k && j != k) trips.emplace(TripleKey{i, j, k}, subspace(u, cover[i] & cover[j] & cover[k]));
  for (const auto& [key, s] : trips) {
    auto [i, j, k] = key;
    if (j < k) d.triples[key] = TripleOverlap{s.space, relabel(s, pairs.at({i, j})), relabel(s, pairs.at({i, k}))};
    d.triple_transitions[key] = relabel(s, trips.at({j, i, k}));
  }
  CoverFunctor out{functor_from_data(d), {}};
  for (int i = 0; i < n; ++i) out.legs[GlueObject::single(i)] = charts[i].inclusion;
  for (const auto& [key, s] : pairs) out.legs[GlueObject::pair(key.first, key.second)] = s.inclusion;
  for (const auto& [key, s] : trips)
    if (key[1] < key[2]) out.legs[GlueObject::triple(key[0], key[1], key[2])] = s.inclusion;
  return out;
}

}  // namespace glue
