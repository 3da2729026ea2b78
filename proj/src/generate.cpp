#include "glue/generate.hpp"

#include <algorithm>
#include <numeric>

namespace glue::gen {

namespace {

int pos(const std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw InvalidInput("generator: point not found");
  return static_cast<int>(it - v.begin());
}

std::vector<int> shuffled(Rng& rng, std::vector<int> v) {
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

int max_components(const FinSpace& x) {
  int c = 0;
  for (PointSet w : x.opens()) c = std::max(c, static_cast<int>(connected_components(x, w).size()));
  return c;
}

}  // namespace

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<int> permutation(Rng& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

FinSpace random_space(Rng& rng, int min_points, int max_points) {
  const int n = uniform(rng, min_points, max_points);
  std::vector<PointSet> sub;
  const int k = uniform(rng, 0, n + 1);
  for (int t = 0; t < k; ++t) sub.push_back(rng() & full_set(n));
  return FinSpace::generated(n, sub);
}

std::vector<PointSet> random_cover(Rng& rng, const FinSpace& x, int max_members) {
  std::vector<PointSet> nonempty;
  for (PointSet w : x.opens())
    if (w) nonempty.push_back(w);
  if (nonempty.empty()) throw InvalidInput("random_cover: empty space");
  const int m = uniform(rng, 1, max_members);
  std::vector<PointSet> cover;
  PointSet covered = 0;
  for (int t = 0; t + 1 < m; ++t) {
    cover.push_back(nonempty[uniform(rng, 0, static_cast<int>(nonempty.size()) - 1)]);
    covered |= cover.back();
  }
  PointSet rest = 0;
  for (int p : members(x.full() & ~covered)) rest |= x.minimal_open(p);
  cover.push_back(rest ? rest : nonempty[uniform(rng, 0, static_cast<int>(nonempty.size()) - 1)]);
  std::shuffle(cover.begin(), cover.end(), rng);
  return cover;
}

FinSpace labeled_subspace(const FinSpace& x, const std::vector<int>& pts) {
  std::vector<PointSet> opens;
  for (PointSet w : x.opens()) {
    PointSet s = 0;
    for (size_t a = 0; a < pts.size(); ++a)
      if (w & bit(pts[a])) s |= bit(static_cast<int>(a));
    opens.push_back(s);
  }
  return FinSpace::make(static_cast<int>(pts.size()), opens);
}

TopInstance random_top_data(Rng& rng, int max_n, int max_points, bool open_variant) {
  TopInstance inst;
  inst.space = random_space(rng, 1, max_points);
  inst.cover = random_cover(rng, inst.space, max_n);
  const FinSpace& x = inst.space;
  const auto& cover = inst.cover;
  const int n = static_cast<int>(cover.size());
  TopGluingData& d = inst.data;
  d.n = n;
  d.open_variant = open_variant;
  std::vector<std::vector<int>> chart(n);
  std::map<PairKey, std::vector<int>> pair;
  std::map<TripleKey, std::vector<int>> trip;  // key (i, j, k) with j < k
  for (int i = 0; i < n; ++i) {
    chart[i] = shuffled(rng, members(cover[i]));
    d.spaces.push_back(labeled_subspace(x, chart[i]));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) pair[{i, j}] = shuffled(rng, members(cover[i] & cover[j]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (i != j && i != k) trip[{i, j, k}] = shuffled(rng, members(cover[i] & cover[j] & cover[k]));
  auto map_between = [](const FinSpace& dom, const std::vector<int>& from, const FinSpace& cod, const std::vector<int>& to) {
    std::vector<int> a;
    for (int p : from) a.push_back(pos(to, p));
    return ContinuousMap::unchecked(dom, cod, a);
  };
  for (const auto& [key, pts] : pair) {
    FinSpace s = labeled_subspace(x, pts);
    d.overlaps[key] = Overlap{s, map_between(s, pts, d.spaces[key.first], chart[key.first])};
  }
  for (const auto& [key, pts] : pair) {
    const PairKey back{key.second, key.first};
    d.transitions[key] = map_between(d.overlaps.at(key).space, pts, d.overlaps.at(back).space, pair.at(back));
  }
  for (const auto& [key, pts] : trip) {
    auto [i, j, k] = key;
    FinSpace s = labeled_subspace(x, pts);
    d.triples[key] = TripleOverlap{s, map_between(s, pts, d.overlaps.at({i, j}).space, pair.at({i, j})),
                                   map_between(s, pts, d.overlaps.at({i, k}).space, pair.at({i, k}))};
  }
  auto tkey = [](int i, int j, int k) { return TripleKey{i, std::min(j, k), std::max(j, k)}; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || i == k || j == k) continue;
        const auto& from = trip.at(tkey(i, j, k));
        const auto& to = trip.at(tkey(j, i, k));
        d.triple_transitions[{i, j, k}] =
            map_between(d.triples.at(tkey(i, j, k)).space, from, d.triples.at(tkey(j, i, k)).space, to);
      }
  return inst;
}

std::optional<TopGluingData> corrupt_top_data(Rng& rng, const TopGluingData& d, std::string* what) {
  std::vector<std::pair<int, const void*>> spots;  // 0 = pair transition, 1 = triple transition
  std::vector<PairKey> pk;
  std::vector<TripleKey> tk;
  for (const auto& [k, m] : d.transitions)
    if (m.dom.size() >= 2) pk.push_back(k);
  for (const auto& [k, m] : d.triple_transitions)
    if (m.dom.size() >= 2) tk.push_back(k);
  if (pk.empty() && tk.empty()) return std::nullopt;
  TopGluingData out = d;
  const int pick = uniform(rng, 0, static_cast<int>(pk.size() + tk.size()) - 1);
  ContinuousMap* m;
  std::string name;
  if (pick < static_cast<int>(pk.size())) {
    m = &out.transitions.at(pk[pick]);
    name = "transition (" + std::to_string(pk[pick].first) + "," + std::to_string(pk[pick].second) + ")";
  } else {
    const auto& k = tk[pick - pk.size()];
    m = &out.triple_transitions.at(k);
    name = "triple transition (" + std::to_string(k[0]) + "," + std::to_string(k[1]) + "," + std::to_string(k[2]) + ")";
  }
  const int a = uniform(rng, 0, m->dom.size() - 1);
  int v = uniform(rng, 0, m->cod.size() - 2);
  if (v >= m->assign[a]) ++v;
  m->assign[a] = v;
  if (what) *what = name + " at point " + std::to_string(a);
  return out;
}

ContinuousMap random_continuous_map(Rng& rng, const FinSpace& dom, int max_target_points) {
  FinSpace cod = random_space(rng, 1, max_target_points);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<int> a(dom.size());
    for (auto& v : a) v = uniform(rng, 0, cod.size() - 1);
    ContinuousMap f = ContinuousMap::unchecked(dom, cod, a);
    if (is_continuous(f)) return f;
  }
  return ContinuousMap::unchecked(dom, cod, std::vector<int>(dom.size(), 0));
}

TopCone random_cone(Rng& rng, const TopGluingFunctor& g, const GluedSpace& q, int max_apex_points) {
  ContinuousMap h = random_continuous_map(rng, q.q, max_apex_points);
  TopCone c{h.cod, {}};
  for (const auto& a : g.cat.objects()) c.legs[a] = compose(h, q.iota.at(a));
  return c;
}

Legs corrupt_legs(Rng& rng, const TopCone& c) {
  Legs out = c.legs;
  std::vector<GlueObject> usable;
  for (const auto& [a, leg] : out)
    if (leg.dom.size() > 0 && c.apex.size() > 1) usable.push_back(a);
  if (usable.empty()) return out;
  ContinuousMap& leg = out.at(usable[uniform(rng, 0, static_cast<int>(usable.size()) - 1)]);
  const int x = uniform(rng, 0, leg.dom.size() - 1);
  int v = uniform(rng, 0, c.apex.size() - 2);
  if (v >= leg.assign[x]) ++v;
  leg.assign[x] = v;
  return out;
}

Matrix random_unimodular(Rng& rng, int n, Matrix* inverse) {
  Matrix a = Matrix::identity(n), inv = Matrix::identity(n);
  for (int step = 0; n >= 2 && step < n + 1; ++step) {
    int i = uniform(rng, 0, n - 1), j = uniform(rng, 0, n - 2);
    if (j >= i) ++j;
    const Int s = uniform(rng, 0, 1) ? 1 : -1;
    for (int c = 0; c < n; ++c) a(i, c) = checked_add(a(i, c), checked_mul(s, a(j, c)));
    for (int r = 0; r < n; ++r) inv(r, j) = checked_sub(inv(r, j), checked_mul(s, inv(r, i)));
  }
  for (int i = 0; i < n; ++i)
    if (uniform(rng, 0, 1)) {
      for (int c = 0; c < n; ++c) a(i, c) = -a(i, c);
      for (int r = 0; r < n; ++r) inv(r, i) = -inv(r, i);
    }
  if (inverse) *inverse = inv;
  return a;
}

FgAbGroup random_group(Rng& rng, int max_ambient) {
  const int k = uniform(rng, 1, std::max(1, max_ambient));
  Vec diag;
  static const Int choices[] = {0, 0, 2, 3, 4};
  for (int t = 0; t < k; ++t) diag.push_back(choices[uniform(rng, 0, 4)]);
  return FgAbGroup(k, Matrix::diagonal(diag));
}

NatIso twist_presheaf(Rng& rng, const Presheaf& f) {
  std::map<PointSet, FgAbGroup> sections;
  std::vector<AbHom> fwd, bwd;
  for (PointSet v : f.opens()) {
    const FgAbGroup& g = f.sections(v);
    Matrix inv;
    Matrix a = random_unimodular(rng, g.ambient(), &inv);
    FgAbGroup h(g.ambient(), inv * g.relations());
    sections[v] = h;
    fwd.push_back(AbHom::unchecked(h, g, a));
    bwd.push_back(AbHom::unchecked(g, h, inv));
  }
  std::map<std::pair<PointSet, PointSet>, AbHom> res;
  const auto& opens = f.opens();
  for (size_t a = 0; a < opens.size(); ++a)
    for (size_t b = 0; b < opens.size(); ++b)
      if (subset_of(opens[b], opens[a]))
        res.emplace(std::make_pair(opens[a], opens[b]), compose(bwd[b], compose(f.restriction(opens[a], opens[b]), fwd[a])));
  Presheaf g = make_presheaf(f.ambient(), f.carrier(), sections, res);
  return NatIso{natural_transformation(g, f, fwd), natural_transformation(f, g, bwd)};
}

SheafInstance random_sheaf_data(Rng& rng, int max_n, int max_points, int max_ambient) {
  FinSpace x = random_space(rng, 1, max_points);
  std::vector<PointSet> cover = random_cover(rng, x, max_n);
  const int per_component = std::max(1, max_ambient / std::max(1, max_components(x)));
  FgAbGroup a = random_group(rng, per_component);
  SheafInstance inst{constant_sheaf(x, x.full(), a), {}};
  SheafGluingData& d = inst.data;
  d.base = x;
  d.cover = cover;
  std::vector<NatIso> theta;  // F_i -> global|U_i
  for (PointSet u : cover) {
    theta.push_back(twist_presheaf(rng, restrict_presheaf(inst.global, u)));
    d.sheaves.push_back(theta.back().forward.src);
  }
  const int n = static_cast<int>(cover.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const PointSet w = cover[i] & cover[j];
      EnrichedMorphism m{restrict_presheaf(d.sheaves[i], w), restrict_presheaf(d.sheaves[j], w), {}};
      for (PointSet v : m.src.opens()) m.alpha.push_back(compose(theta[j].backward.at(v), theta[i].forward.at(v)));
      d.transitions[{i, j}] = std::move(m);
    }
  return inst;
}

std::optional<std::vector<EnrichedMorphism>> corrupt_projections(Rng& rng, const std::vector<EnrichedMorphism>& p) {
  std::vector<std::pair<size_t, size_t>> spots;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t a = 0; a < p[i].alpha.size(); ++a) {
      const AbHom& h = p[i].alpha[a];
      if (!h.equals(AbHom::zero(h.dom(), h.cod()))) spots.emplace_back(i, a);
    }
  if (spots.empty()) return std::nullopt;
  auto [i, a] = spots[uniform(rng, 0, static_cast<int>(spots.size()) - 1)];
  auto out = p;
  const AbHom& h = out[i].alpha[a];
  out[i].alpha[a] = AbHom::zero(h.dom(), h.cod());
  return out;
}

// ---------------------------------------------------------------- rings

namespace {

FinCommRing two_bit_ring(bool field) {
  // Elements b0 + 2 b1 stand for b0 + b1 t, with t^2 = t + 1 (field) or t^2 = 0.
  Table add(4, std::vector<int>(4)), mul(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      add[a][b] = a ^ b;
      int a0 = a & 1, a1 = a >> 1, b0 = b & 1, b1 = b >> 1;
      int c0 = a0 & b0, c1 = (a0 & b1) ^ (a1 & b0), c2 = a1 & b1;
      if (field) {
        c0 ^= c2;
        c1 ^= c2;
      }
      mul[a][b] = c0 | (c1 << 1);
    }
  return FinCommRing::make(add, mul, 1);
}

}  // namespace

FinCommRing named_ring(const std::string& name) {
  if (name == "F4") return two_bit_ring(true);
  if (name == "Z2[x]/x^2") return two_bit_ring(false);
  if (name == "Z2xZ2") return product_ring({FinCommRing::zmod(2), FinCommRing::zmod(2)});
  if (name.rfind("Z/", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(name.substr(2));
    } catch (...) {
      throw InvalidInput("bad ring name " + name);
    }
    return FinCommRing::zmod(n);
  }
  throw InvalidInput("unknown ring name " + name);
}

std::vector<std::pair<std::string, FinCommRing>> small_rings() {
  std::vector<std::pair<std::string, FinCommRing>> out;
  for (const char* n : {"Z/2", "Z/3", "Z/4", "F4", "Z2[x]/x^2", "Z/6", "Z2xZ2", "Z/8"}) out.emplace_back(n, named_ring(n));
  return out;
}

std::vector<RingMap> ring_automorphisms(const FinCommRing& r) {
  std::vector<RingMap> out;
  if (r.order() > 8) return {identity_map(r.order())};
  RingMap p = identity_map(r.order());
  do {
    if (is_ring_hom(r, r, p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

RingedInstance random_ringed_data(Rng& rng, int max_n, int max_points, bool local_only) {
  RingedInstance inst;
  inst.space = random_space(rng, 1, max_points);
  inst.cover = random_cover(rng, inst.space, max_n);
  const FinSpace& x = inst.space;
  const int comps = std::max(1, max_components(x));
  std::vector<FinCommRing> pool;
  for (auto& [name, r] : small_rings()) {
    long long size = 1;
    for (int c = 0; c < comps; ++c) size *= r.order();
    if (size <= 256 && (!local_only || is_local_ring(r))) pool.push_back(r);
  }
  inst.ring = pool.empty() ? FinCommRing::zmod(2) : pool[uniform(rng, 0, static_cast<int>(pool.size()) - 1)];
  const FinCommRing& R = inst.ring;
  const auto autos = ring_automorphisms(R);
  const int n = static_cast<int>(inst.cover.size());
  RingedGluingData& d = inst.data;
  d.variant = local_only ? RingedVariant::LRTS : RingedVariant::RTS;
  std::vector<std::vector<int>> pts(n);
  std::vector<RingMap> sigma, sigma_inv;
  for (int i = 0; i < n; ++i) {
    pts[i] = shuffled(rng, members(inst.cover[i]));
    FinSpace top = labeled_subspace(x, pts[i]);
    d.charts.push_back(RingedSpace{top, constant_ring_sheaf(top, top.full(), R)});
    sigma.push_back(autos[uniform(rng, 0, static_cast<int>(autos.size()) - 1)]);
    sigma_inv.push_back(*invert_map(sigma.back()));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      PointSet ov = 0;
      std::vector<int> phi(pts[i].size(), -1);
      for (size_t a = 0; a < pts[i].size(); ++a)
        if (inst.cover[j] & bit(pts[i][a])) {
          ov |= bit(static_cast<int>(a));
          phi[a] = pos(pts[j], pts[i][a]);
        }
      d.overlaps[{i, j}] = ov;
      d.transitions[{i, j}] = phi;
      const FinSpace& ti = d.charts[i].top;
      const FinSpace& tj = d.charts[j].top;
      std::map<PointSet, RingMap> comps_map;
      for (PointSet w : ti.opens_within(ov)) {
        PointSet pw = 0;
        for (int a : members(w)) pw |= bit(phi[a]);
        RingMap m;
        for (int s = 0; s < d.charts[i].sheaf.ring(w).order(); ++s) {
          std::vector<int> vals(tj.size(), 0);
          for (int a : members(w))
            vals[phi[a]] = sigma[j][sigma_inv[i][locally_constant_value(ti, w, R, s, a)]];
          m.push_back(locally_constant_element(tj, pw, R, vals));
        }
        comps_map[w] = std::move(m);
      }
      d.ring_transitions[{i, j}] = std::move(comps_map);
    }
  return inst;
}

}  // namespace glue::gen
