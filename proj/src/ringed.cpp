#include "glue/ringed.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace glue {

namespace {

constexpr int kMaxRingOrder = 1024;

std::string num(int x) { return std::to_string(x); }

std::string pair_name(int i, int j) { return "(" + num(i) + "," + num(j) + ")"; }

int find_open(const std::vector<PointSet>& opens, PointSet u) {
  auto it = std::lower_bound(opens.begin(), opens.end(), u, open_less);
  if (it == opens.end() || *it != u) return -1;
  return static_cast<int>(it - opens.begin());
}

}  // namespace

// ---------------------------------------------------------------- rings

FinCommRing::FinCommRing() : add_{{0}}, mul_{{0}}, neg_{0}, zero_(0), one_(0) {}

FinCommRing FinCommRing::unchecked(Table add, Table mul, int zero, int one) {
  FinCommRing r;
  r.add_ = std::move(add);
  r.mul_ = std::move(mul);
  r.zero_ = zero;
  r.one_ = one;
  const int n = r.order();
  r.neg_.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (r.add_[a][b] == zero) r.neg_[a] = b;
  return r;
}

FinCommRing FinCommRing::make(Table add, Table mul, int one) {
  const int n = static_cast<int>(add.size());
  if (n < 1 || n > kMaxInputOrder) throw InvalidInput("ring order must be between 1 and 64");
  if (static_cast<int>(mul.size()) != n) throw InvalidInput("ring tables differ in size");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(add[a].size()) != n || static_cast<int>(mul[a].size()) != n)
      throw InvalidInput("ring tables are not square");
    for (int b = 0; b < n; ++b)
      if (add[a][b] < 0 || add[a][b] >= n || mul[a][b] < 0 || mul[a][b] >= n)
        throw InvalidInput("ring table entry out of range at (" + num(a) + "," + num(b) + ")");
  }
  if (one < 0 || one >= n) throw InvalidInput("unity out of range");
  int zero = -1;
  for (int z = 0; z < n && zero < 0; ++z) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = add[z][a] == a;
    if (ok) zero = z;
  }
  if (zero < 0) throw InvalidInput("no additive identity");
  for (int a = 0; a < n; ++a) {
    if (mul[one][a] != a) throw InvalidInput("unity fails at " + num(a));
    bool has_neg = false;
    for (int b = 0; b < n; ++b) {
      if (add[a][b] != add[b][a]) throw InvalidInput("addition not commutative at (" + num(a) + "," + num(b) + ")");
      if (mul[a][b] != mul[b][a]) throw InvalidInput("multiplication not commutative at (" + num(a) + "," + num(b) + ")");
      has_neg = has_neg || add[a][b] == zero;
    }
    if (!has_neg) throw InvalidInput("no additive inverse for " + num(a));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::string w = "(" + num(a) + "," + num(b) + "," + num(c) + ")";
        if (add[add[a][b]][c] != add[a][add[b][c]]) throw InvalidInput("addition not associative at " + w);
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]]) throw InvalidInput("multiplication not associative at " + w);
        if (mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]) throw InvalidInput("distributivity fails at " + w);
      }
  return unchecked(std::move(add), std::move(mul), zero, one);
}

FinCommRing FinCommRing::zmod(int n) {
  if (n < 1 || n > kMaxInputOrder) throw InvalidInput("Z/n needs 1 <= n <= 64");
  Table add(n, std::vector<int>(n)), mul(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      add[a][b] = (a + b) % n;
      mul[a][b] = (a * b) % n;
    }
  return unchecked(add, mul, 0, 1 % n);
}

bool FinCommRing::is_unit(int a) const {
  for (int b = 0; b < order(); ++b)
    if (mul_[a][b] == one_) return true;
  return false;
}

std::vector<int> FinCommRing::units() const {
  std::vector<int> out;
  for (int a = 0; a < order(); ++a)
    if (is_unit(a)) out.push_back(a);
  return out;
}

bool is_local_ring(const FinCommRing& r) {
  if (r.one() == r.zero()) return false;
  std::vector<int> nonunits;
  for (int a = 0; a < r.order(); ++a)
    if (!r.is_unit(a)) nonunits.push_back(a);
  for (int a : nonunits)
    for (int b : nonunits)
      if (r.is_unit(r.add(a, b))) return false;
  return true;
}

FinCommRing product_ring(const std::vector<FinCommRing>& rs) {
  long long total = 1;
  for (const auto& r : rs) {
    total *= r.order();
    if (total > kMaxRingOrder) throw InvalidInput("product ring exceeds 1024 elements");
  }
  const int n = static_cast<int>(total);
  std::vector<std::vector<int>> digits(n, std::vector<int>(rs.size()));
  for (int e = 0; e < n; ++e) {
    int x = e;
    for (size_t k = 0; k < rs.size(); ++k) {
      digits[e][k] = x % rs[k].order();
      x /= rs[k].order();
    }
  }
  auto encode = [&](const std::vector<int>& d) {
    int e = 0;
    for (size_t k = rs.size(); k-- > 0;) e = e * rs[k].order() + d[k];
    return e;
  };
  Table add(n, std::vector<int>(n)), mul(n, std::vector<int>(n));
  std::vector<int> tmp(rs.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (size_t k = 0; k < rs.size(); ++k) tmp[k] = rs[k].add(digits[a][k], digits[b][k]);
      add[a][b] = encode(tmp);
      for (size_t k = 0; k < rs.size(); ++k) tmp[k] = rs[k].mul(digits[a][k], digits[b][k]);
      mul[a][b] = encode(tmp);
    }
  for (size_t k = 0; k < rs.size(); ++k) tmp[k] = rs[k].zero();
  int zero = encode(tmp);
  for (size_t k = 0; k < rs.size(); ++k) tmp[k] = rs[k].one();
  return FinCommRing::unchecked(add, mul, zero, encode(tmp));
}

bool is_ring_hom(const FinCommRing& r, const FinCommRing& s, const RingMap& f) {
  if (static_cast<int>(f.size()) != r.order()) return false;
  for (int v : f)
    if (v < 0 || v >= s.order()) return false;
  if (f[r.one()] != s.one()) return false;
  for (int a = 0; a < r.order(); ++a)
    for (int b = 0; b < r.order(); ++b)
      if (f[r.add(a, b)] != s.add(f[a], f[b]) || f[r.mul(a, b)] != s.mul(f[a], f[b])) return false;
  return true;
}

bool is_bijective(const RingMap& f, int target_order) {
  if (static_cast<int>(f.size()) != target_order) return false;
  std::vector<char> seen(target_order, 0);
  for (int v : f) {
    if (v < 0 || v >= target_order || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

bool is_local_hom(const FinCommRing& r, const FinCommRing& s, const RingMap& f) {
  for (int a = 0; a < r.order(); ++a)
    if (r.is_unit(a) != s.is_unit(f[a])) return false;
  return true;
}

RingMap compose_maps(const RingMap& g, const RingMap& f) {
  RingMap out(f.size());
  for (size_t a = 0; a < f.size(); ++a) out[a] = g.at(f[a]);
  return out;
}

RingMap identity_map(int order) {
  RingMap out(order);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::optional<RingMap> invert_map(const RingMap& f) {
  if (!is_bijective(f, static_cast<int>(f.size()))) return std::nullopt;
  RingMap out(f.size());
  for (size_t a = 0; a < f.size(); ++a) out[f[a]] = static_cast<int>(a);
  return out;
}

// ---------------------------------------------------------------- additive groups

int AdditiveGroup::element(const Vec& v) const {
  auto it = by_normal.find(group.normal_form(v));
  if (it == by_normal.end()) throw InvalidInput("coordinates do not name a ring element");
  return it->second;
}

AdditiveGroup additive_group(const FinCommRing& r) {
  // Greedy generators g_1, g_2, ...; c_k is the least multiple of g_k falling
  // into the span of the earlier ones, which gives a triangular presentation.
  const int n = r.order();
  std::vector<char> in_span(n, 0);
  std::vector<Vec> coords(n);
  std::vector<int> span = {r.zero()};
  in_span[r.zero()] = 1;
  coords[r.zero()] = {};
  std::vector<int> gens;
  std::vector<Vec> rel_cols;
  for (int g = 0; g < n; ++g) {
    if (in_span[g]) continue;
    int c = 1, m = g;
    while (!in_span[m]) {
      m = r.add(m, g);
      ++c;
    }
    const int k = static_cast<int>(gens.size());
    gens.push_back(g);
    for (int e : span) coords[e].push_back(0);
    Vec col = coords[m];
    for (auto& x : col) x = -x;
    col[k] = c;
    for (auto& rc : rel_cols) rc.push_back(0);
    rel_cols.push_back(col);
    std::vector<int> next;
    for (int e : span) {
      int cur = e;
      for (int t = 0; t < c; ++t) {
        if (t > 0) {
          in_span[cur] = 1;
          coords[cur] = coords[e];
          coords[cur][k] = t;
        }
        next.push_back(cur);
        cur = r.add(cur, g);
      }
    }
    span = std::move(next);
  }
  const int k = static_cast<int>(gens.size());
  AdditiveGroup out;
  out.group = k == 0 ? FgAbGroup() : FgAbGroup(k, Matrix::from_columns(k, rel_cols));
  out.coords = coords;
  out.generators = gens;
  for (int e = 0; e < n; ++e) out.by_normal[out.group.normal_form(coords[e])] = e;
  if (static_cast<int>(out.by_normal.size()) != n) throw Falsification("additive presentation of a ring lost elements");
  return out;
}

AbHom additive_hom(const AdditiveGroup& a, const AdditiveGroup& b, const FinCommRing&, const RingMap& f) {
  Matrix m(b.group.ambient(), static_cast<int>(a.generators.size()));
  for (size_t t = 0; t < a.generators.size(); ++t) {
    const Vec& c = b.coords[f[a.generators[t]]];
    for (size_t row = 0; row < c.size(); ++row) m(static_cast<int>(row), static_cast<int>(t)) = c[row];
  }
  return AbHom::unchecked(a.group, b.group, m);
}

// ---------------------------------------------------------------- ring presheaves

int RingPresheaf::index(PointSet u) const {
  int i = find_open(opens_, u);
  if (i < 0) throw InvalidInput("ring presheaf has no open " + set_str(u));
  return i;
}

const RingMap& RingPresheaf::restriction(PointSet u, PointSet v) const {
  if (!subset_of(v, u)) throw InvalidInput("restriction " + set_str(u) + " > " + set_str(v) + " is not an inclusion");
  return res_[static_cast<size_t>(index(u)) * opens_.size() + index(v)];
}

bool RingPresheaf::operator==(const RingPresheaf& o) const {
  return ambient_ == o.ambient_ && carrier_ == o.carrier_ && opens_ == o.opens_ && rings_ == o.rings_ && res_ == o.res_;
}

RingPresheaf make_ring_presheaf(const FinSpace& ambient, PointSet carrier, const std::map<PointSet, FinCommRing>& rings,
                                const std::map<std::pair<PointSet, PointSet>, RingMap>& restrictions) {
  if (!ambient.is_open(carrier)) throw PresheafError({"carrier " + set_str(carrier) + " is not open"});
  RingPresheaf f;
  f.ambient_ = ambient;
  f.carrier_ = carrier;
  f.opens_ = ambient.opens_within(carrier);
  const size_t k = f.opens_.size();
  std::vector<std::string> problems;
  for (PointSet u : f.opens_) {
    auto it = rings.find(u);
    if (it == rings.end()) {
      problems.push_back("missing ring over " + set_str(u));
      f.rings_.emplace_back();
    } else {
      f.rings_.push_back(it->second);
    }
  }
  for (const auto& [key, m] : restrictions)
    if (find_open(f.opens_, key.first) < 0 || find_open(f.opens_, key.second) < 0 || !subset_of(key.second, key.first))
      problems.push_back("restriction " + set_str(key.first) + " > " + set_str(key.second) + " is not between opens");
  if (!problems.empty()) throw PresheafError(problems);
  f.res_.assign(k * k, RingMap());
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b) {
      if (!subset_of(f.opens_[b], f.opens_[a])) continue;
      auto it = restrictions.find({f.opens_[a], f.opens_[b]});
      if (it != restrictions.end()) {
        f.res_[a * k + b] = it->second;
      } else if (a == b) {
        f.res_[a * k + b] = identity_map(f.rings_[a].order());
      } else {
        problems.push_back("missing restriction " + set_str(f.opens_[a]) + " > " + set_str(f.opens_[b]));
        continue;
      }
      if (!is_ring_hom(f.rings_[a], f.rings_[b], f.res_[a * k + b]))
        problems.push_back("restriction " + set_str(f.opens_[a]) + " > " + set_str(f.opens_[b]) + " is not a ring hom");
      else if (a == b && f.res_[a * k + b] != identity_map(f.rings_[a].order()))
        problems.push_back("restriction to " + set_str(f.opens_[a]) + " itself is not the identity");
    }
  if (!problems.empty()) throw PresheafError(problems);
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b) {
      if (a == b || !subset_of(f.opens_[b], f.opens_[a])) continue;
      for (size_t c = 0; c < k; ++c) {
        if (c == b || !subset_of(f.opens_[c], f.opens_[b])) continue;
        if (compose_maps(f.res_[b * k + c], f.res_[a * k + b]) != f.res_[a * k + c])
          problems.push_back("functoriality fails on chain " + set_str(f.opens_[a]) + " > " + set_str(f.opens_[b]) + " > " +
                             set_str(f.opens_[c]));
      }
    }
  if (!problems.empty()) throw PresheafError(problems);
  return f;
}

namespace {

int component_digit(const std::vector<PointSet>& comps, const FinCommRing& r, int element, int p) {
  for (size_t c = 0; c < comps.size(); ++c) {
    if (comps[c] & bit(p)) return element % r.order();
    element /= r.order();
  }
  throw InvalidInput("point " + num(p) + " is outside the open");
}

}  // namespace

int locally_constant_value(const FinSpace& ambient, PointSet w, const FinCommRing& r, int element, int p) {
  return component_digit(connected_components(ambient, w), r, element, p);
}

int locally_constant_element(const FinSpace& ambient, PointSet w, const FinCommRing& r,
                             const std::vector<int>& values_by_point) {
  auto comps = connected_components(ambient, w);
  int e = 0;
  for (size_t c = comps.size(); c-- > 0;) {
    const auto pts = members(comps[c]);
    for (int p : pts)
      if (values_by_point.at(p) != values_by_point.at(pts[0]))
        throw InvalidInput("values are not constant on a component");
    e = e * r.order() + values_by_point.at(pts[0]);
  }
  return e;
}

RingPresheaf constant_ring_sheaf(const FinSpace& ambient, PointSet carrier, const FinCommRing& r) {
  std::map<PointSet, FinCommRing> rings;
  std::map<PointSet, std::vector<PointSet>> comps;
  for (PointSet w : ambient.opens_within(carrier)) {
    comps[w] = connected_components(ambient, w);
    rings[w] = product_ring(std::vector<FinCommRing>(comps[w].size(), r));
  }
  std::map<std::pair<PointSet, PointSet>, RingMap> res;
  for (const auto& [w, cw] : comps)
    for (const auto& [v, cv] : comps) {
      if (!subset_of(v, w) || v == w) continue;
      RingMap m(rings.at(w).order());
      for (int e = 0; e < rings.at(w).order(); ++e) {
        int out = 0;
        for (size_t c = cv.size(); c-- > 0;) out = out * r.order() + component_digit(cw, r, e, std::countr_zero(cv[c]));
        m[e] = out;
      }
      res.emplace(std::make_pair(w, v), std::move(m));
    }
  return make_ring_presheaf(ambient, carrier, rings, res);
}

RingPresheaf restrict_ring_presheaf(const RingPresheaf& f, PointSet u) {
  if (!f.ambient().is_open(u) || !subset_of(u, f.carrier()))
    throw InvalidInput("restriction target " + set_str(u) + " is not an open inside the carrier");
  std::map<PointSet, FinCommRing> rings;
  std::map<std::pair<PointSet, PointSet>, RingMap> res;
  const auto opens = f.ambient().opens_within(u);
  for (PointSet w : opens) rings[w] = f.ring(w);
  for (PointSet w : opens)
    for (PointSet v : opens)
      if (subset_of(v, w)) res[{w, v}] = f.restriction(w, v);
  return make_ring_presheaf(f.ambient(), u, rings, res);
}

RingPresheaf pushforward_ring(const RingPresheaf& f, const ContinuousMap& e) {
  if (!(f.ambient() == e.dom) || f.carrier() != e.dom.full())
    throw InvalidInput("pushforward: ring presheaf must live on the whole domain of the embedding");
  if (!is_injective(e) || !is_continuous(e) || !is_open_map(e))
    throw InvalidInput("pushforward: map is not an open embedding");
  const PointSet img = e.image(e.dom.full());
  std::map<PointSet, FinCommRing> rings;
  std::map<std::pair<PointSet, PointSet>, RingMap> res;
  const auto opens = e.cod.opens_within(img);
  for (PointSet w : opens) rings[w] = f.ring(e.preimage(w));
  for (PointSet w : opens)
    for (PointSet v : opens)
      if (subset_of(v, w)) res[{w, v}] = f.restriction(e.preimage(w), e.preimage(v));
  return make_ring_presheaf(e.cod, img, rings, res);
}

AdditivePresheaf additive_presheaf(const RingPresheaf& f) {
  AdditivePresheaf out;
  std::map<PointSet, FgAbGroup> sections;
  for (PointSet w : f.opens()) {
    out.groups.push_back(additive_group(f.ring(w)));
    sections[w] = out.groups.back().group;
  }
  std::map<std::pair<PointSet, PointSet>, AbHom> res;
  for (PointSet w : f.opens())
    for (PointSet v : f.opens())
      if (subset_of(v, w))
        res.emplace(std::make_pair(w, v), additive_hom(out.groups[f.index(w)], out.groups[f.index(v)], f.ring(w),
                                                       f.restriction(w, v)));
  out.presheaf = make_presheaf(f.ambient(), f.carrier(), sections, res);
  return out;
}

// ---------------------------------------------------------------- ringed spaces

ConditionReport validate_ringed_space(const RingedSpace& r) {
  ConditionReport rep;
  rep.set("presheaf", r.sheaf.ambient() == r.top && r.sheaf.carrier() == r.top.full(),
          "structure sheaf does not live on the whole space");
  if (!rep.get("presheaf")) {
    rep.set("sheaf", false);
    return rep;
  }
  SheafCertificate c = is_sheaf(additive_presheaf(r.sheaf).presheaf);
  rep.set("sheaf", c.sheaf, c.str());
  return rep;
}

bool is_locally_ringed(const RingedSpace& r) {
  for (int x = 0; x < r.top.size(); ++x)
    if (!is_local_ring(r.sheaf.ring(r.top.minimal_open(x)))) return false;
  return true;
}

Stalk stalk_at(const RingedSpace& r, int x) {
  if (x < 0 || x >= r.top.size()) throw InvalidInput("stalk_at: point out of range");
  Stalk s;
  s.point = x;
  s.minimal_open = r.top.minimal_open(x);
  s.ring = r.sheaf.ring(s.minimal_open);
  for (PointSet u : r.top.opens())
    if (u & bit(x)) s.germ[u] = r.sheaf.restriction(u, s.minimal_open);
  return s;
}

bool is_stalk_cocone(const RingedSpace& r, int x, const StalkCocone& c) {
  std::vector<PointSet> nbhd;
  for (PointSet u : r.top.opens())
    if (u & bit(x)) nbhd.push_back(u);
  for (PointSet u : nbhd) {
    auto it = c.maps.find(u);
    if (it == c.maps.end() || static_cast<int>(it->second.size()) != r.sheaf.ring(u).order()) return false;
    for (int v : it->second)
      if (v < 0 || v >= c.size) return false;
  }
  for (PointSet u : nbhd)
    for (PointSet v : nbhd)
      if (subset_of(v, u) && compose_maps(c.maps.at(v), r.sheaf.restriction(u, v)) != c.maps.at(u)) return false;
  return true;
}

std::optional<std::vector<int>> stalk_mediating(const RingedSpace& r, int x, const StalkCocone& c) {
  if (!is_stalk_cocone(r, x, c)) return std::nullopt;
  Stalk s = stalk_at(r, x);
  std::vector<int> m = c.maps.at(s.minimal_open);
  for (const auto& [u, germ] : s.germ)
    if (compose_maps(m, germ) != c.maps.at(u)) throw Falsification("stalk fails the colimit property at " + set_str(u));
  return m;
}

std::vector<std::string> check_ringed_morphism(const RingedMorphism& m) {
  std::vector<std::string> p;
  if (!(m.top.dom == m.src.top) || !(m.top.cod == m.dst.top) || !is_total(m.top)) p.push_back("underlying map mistyped");
  if (!p.empty()) return p;
  if (!is_continuous(m.top)) p.push_back("underlying map is not continuous");
  if (m.comorphism.size() != m.dst.sheaf.opens().size()) p.push_back("comorphism is not total");
  if (!p.empty()) return p;
  const auto& opens = m.dst.sheaf.opens();
  for (PointSet v : opens)
    if (!is_ring_hom(m.dst.sheaf.ring(v), m.src.sheaf.ring(m.top.preimage(v)), m.at(v)))
      p.push_back("comorphism over " + set_str(v) + " is not a ring hom");
  if (!p.empty()) return p;
  for (PointSet v : opens)
    for (PointSet w : opens) {
      if (w == v || !subset_of(w, v)) continue;
      auto lhs = compose_maps(m.src.sheaf.restriction(m.top.preimage(v), m.top.preimage(w)), m.at(v));
      auto rhs = compose_maps(m.at(w), m.dst.sheaf.restriction(v, w));
      if (lhs != rhs) p.push_back("comorphism not natural on " + set_str(v) + " > " + set_str(w));
    }
  return p;
}

RingedMorphism identity_ringed(const RingedSpace& r) {
  RingedMorphism m{r, r, ContinuousMap::identity(r.top), {}};
  for (PointSet v : r.sheaf.opens()) m.comorphism.push_back(identity_map(r.sheaf.ring(v).order()));
  return m;
}

RingedMorphism compose_ringed(const RingedMorphism& g, const RingedMorphism& f) {
  if (!(f.dst.top == g.src.top) || !(f.dst.sheaf == g.src.sheaf)) throw InvalidInput("compose_ringed: endpoints differ");
  RingedMorphism m{f.src, g.dst, compose(g.top, f.top), {}};
  for (PointSet w : g.dst.sheaf.opens()) m.comorphism.push_back(compose_maps(f.at(g.top.preimage(w)), g.at(w)));
  return m;
}

namespace {

// r transported along a bijection of points onto `space`.
RingPresheaf transport(const RingPresheaf& f, const FinSpace& space, const std::vector<int>& to_old_points) {
  auto old_set = [&](PointSet w) {
    PointSet s = 0;
    for (int p : members(w)) s |= bit(to_old_points[p]);
    return s;
  };
  std::map<PointSet, FinCommRing> rings;
  std::map<std::pair<PointSet, PointSet>, RingMap> res;
  for (PointSet w : space.opens()) rings[w] = f.ring(old_set(w));
  for (PointSet w : space.opens())
    for (PointSet v : space.opens())
      if (subset_of(v, w)) res[{w, v}] = f.restriction(old_set(w), old_set(v));
  return make_ring_presheaf(space, space.full(), rings, res);
}

}  // namespace

RingedMorphism open_inclusion(const RingedSpace& r, PointSet u) {
  if (!r.top.is_open(u)) throw InvalidInput("open_inclusion: " + set_str(u) + " is not open");
  Subspace s = subspace(r.top, u);
  RingedSpace sub{s.space, transport(r.sheaf, s.space, s.points)};
  RingedMorphism m{sub, r, s.inclusion, {}};
  for (PointSet v : r.sheaf.opens()) m.comorphism.push_back(r.sheaf.restriction(v, v & u));
  return m;
}

RingedMorphism relabel_ringed(const RingedSpace& r, const std::vector<int>& perm) {
  const int n = r.top.size();
  if (static_cast<int>(perm.size()) != n) throw InvalidInput("relabel_ringed: permutation has wrong length");
  std::vector<int> back(n, -1);
  for (int p = 0; p < n; ++p) {
    if (perm[p] < 0 || perm[p] >= n || back[perm[p]] >= 0) throw InvalidInput("relabel_ringed: not a permutation");
    back[perm[p]] = p;
  }
  std::vector<PointSet> opens;
  for (PointSet w : r.top.opens()) {
    PointSet s = 0;
    for (int p : members(w)) s |= bit(perm[p]);
    opens.push_back(s);
  }
  FinSpace space = FinSpace::make(n, opens);
  RingedSpace copy{space, transport(r.sheaf, space, back)};
  RingedMorphism m{r, copy, ContinuousMap::unchecked(r.top, space, perm), {}};
  for (PointSet v : space.opens()) m.comorphism.push_back(identity_map(copy.sheaf.ring(v).order()));
  return m;
}

RingMap stalk_hom(const RingedMorphism& m, int y) {
  const int x = m.top(y);
  const PointSet ux = m.dst.top.minimal_open(x);
  const PointSet pre = m.top.preimage(ux);
  return compose_maps(m.src.sheaf.restriction(pre, m.src.top.minimal_open(y)), m.at(ux));
}

std::string variant_name(RingedVariant v) {
  switch (v) {
    case RingedVariant::RTS: return "rts";
    case RingedVariant::LRTS: return "lrts";
    case RingedVariant::Sch: return "sch";
  }
  return "?";
}

// ---------------------------------------------------------------- gluing data

bool RingedGluingData::operator==(const RingedGluingData& o) const {
  if (variant != o.variant || charts.size() != o.charts.size()) return false;
  for (size_t i = 0; i < charts.size(); ++i)
    if (!(charts[i].top == o.charts[i].top) || !(charts[i].sheaf == o.charts[i].sheaf)) return false;
  return overlaps == o.overlaps && transitions == o.transitions && ring_transitions == o.ring_transitions;
}

namespace {

int local_index(const Subspace& s, int p) {
  auto it = std::find(s.points.begin(), s.points.end(), p);
  return it == s.points.end() ? -1 : static_cast<int>(it - s.points.begin());
}

PointSet image_set(const std::vector<int>& phi, PointSet w) {
  PointSet s = 0;
  for (int p : members(w)) s |= bit(phi[p]);
  return s;
}

}  // namespace

TopGluingData induced_top_data(const RingedGluingData& d) {
  TopGluingData t;
  const int n = d.n();
  t.n = n;
  t.open_variant = true;
  std::map<PairKey, Subspace> pairs;
  for (const auto& c : d.charts) t.spaces.push_back(c.top);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        pairs.emplace(PairKey{i, j}, subspace(d.charts[i].top, d.overlaps.at({i, j})));
        t.overlaps[{i, j}] = Overlap{pairs.at({i, j}).space, pairs.at({i, j}).inclusion};
      }
  for (const auto& [key, s] : pairs) {
    const Subspace& target = pairs.at({key.second, key.first});
    const auto& phi = d.transitions.at(key);
    std::vector<int> a;
    for (int p : s.points) {
      int q = local_index(target, phi.at(p));
      if (q < 0) throw InvalidInput("transition " + pair_name(key.first, key.second) + " leaves the overlap");
      a.push_back(q);
    }
    t.transitions[key] = ContinuousMap::unchecked(s.space, target.space, a);
  }
  std::map<TripleKey, Subspace> trips;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i != j && i != k && j != k)
          trips.emplace(TripleKey{i, j, k}, subspace(d.charts[i].top, d.overlaps.at({i, j}) & d.overlaps.at({i, k})));
  auto into = [](const Subspace& from, const Subspace& to, const std::vector<int>* phi) {
    std::vector<int> a;
    for (int p : from.points) {
      int q = local_index(to, phi ? phi->at(p) : p);
      if (q < 0) throw InvalidInput("transition does not carry a triple overlap into the matching triple overlap");
      a.push_back(q);
    }
    return ContinuousMap::unchecked(from.space, to.space, a);
  };
  for (const auto& [key, s] : trips) {
    auto [i, j, k] = key;
    if (j < k) t.triples[key] = TripleOverlap{s.space, into(s, pairs.at({i, j}), nullptr), into(s, pairs.at({i, k}), nullptr)};
    t.triple_transitions[key] = into(s, trips.at({j, i, k}), &d.transitions.at({i, j}));
  }
  return t;
}

TopGluingFunctor induced_top_functor(const RingedGluingData& d) { return functor_from_data(induced_top_data(d)); }

ConditionReport validate_ringed_data(const RingedGluingData& d) {
  if (d.variant == RingedVariant::Sch) throw Unsupported("scheme verification unsupported");
  ConditionReport r;
  const int n = d.n();
  r.set("structure", n >= 1, "no charts");
  for (int i = 0; i < n; ++i)
    r.set("structure", validate_ringed_space(d.charts[i]).get("presheaf"),
          "chart " + num(i) + " structure sheaf does not cover the chart");
  for (int i = 0; i < n && r.all(); ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto ov = d.overlaps.find({i, j});
      auto tr = d.transitions.find({i, j});
      if (ov == d.overlaps.end() || tr == d.transitions.end() || !d.ring_transitions.count({i, j}) ||
          !d.overlaps.count({j, i})) {
        r.set("structure", false, "missing overlap data for " + pair_name(i, j));
        continue;
      }
      if (!d.charts[i].top.is_open(ov->second)) r.set("structure", false, "overlap " + pair_name(i, j) + " is not open");
      const auto& phi = tr->second;
      if (static_cast<int>(phi.size()) != d.charts[i].top.size()) {
        r.set("structure", false, "transition " + pair_name(i, j) + " has wrong length");
        continue;
      }
      for (int p = 0; p < static_cast<int>(phi.size()); ++p) {
        bool inside = ov->second & bit(p);
        bool ok = inside ? (phi[p] >= 0 && phi[p] < d.charts[j].top.size() && (d.overlaps.at({j, i}) & bit(phi[p])))
                         : phi[p] == -1;
        if (!ok) r.set("structure", false, "transition " + pair_name(i, j) + " misbehaves at point " + num(p));
      }
    }
  if (!r.all()) return r;
  try {
    ConditionReport t = validate_data(induced_top_data(d));
    r.set("top", t.all());
    for (const auto& p : t.problems) r.problems.push_back("top: " + p);
  } catch (const InvalidInput& e) {
    r.set("top", false, e.what());
  }
  if (!r.all()) return r;

  r.set("rings", true);
  for (const auto& [key, maps] : d.ring_transitions) {
    auto [i, j] = key;
    const auto& fi = d.charts[i].sheaf;
    const auto& fj = d.charts[j].sheaf;
    const auto& phi = d.transitions.at(key);
    const auto opens = d.charts[i].top.opens_within(d.overlaps.at(key));
    for (PointSet w : opens) {
      auto it = maps.find(w);
      if (it == maps.end()) {
        r.set("rings", false, "Phi" + pair_name(i, j) + " missing over " + set_str(w));
        continue;
      }
      const PointSet pw = image_set(phi, w);
      if (!is_ring_hom(fi.ring(w), fj.ring(pw), it->second) || !is_bijective(it->second, fj.ring(pw).order()))
        r.set("rings", false, "Phi" + pair_name(i, j) + " over " + set_str(w) + " is not a ring isomorphism");
    }
    if (!r.get("rings")) continue;
    for (PointSet w : opens)
      for (PointSet v : opens) {
        if (v == w || !subset_of(v, w)) continue;
        auto lhs = compose_maps(fj.restriction(image_set(phi, w), image_set(phi, v)), maps.at(w));
        auto rhs = compose_maps(maps.at(v), fi.restriction(w, v));
        r.set("rings", lhs == rhs, "Phi" + pair_name(i, j) + " not natural on " + set_str(w) + " > " + set_str(v));
      }
  }
  if (!r.all()) return r;
  r.set("inverse", true);
  r.set("cocycle", true);
  for (const auto& [key, maps] : d.ring_transitions) {
    auto [i, j] = key;
    const auto& phi = d.transitions.at(key);
    for (const auto& [w, m] : maps)
      r.set("inverse", compose_maps(d.ring_transitions.at({j, i}).at(image_set(phi, w)), m) == identity_map(static_cast<int>(m.size())),
            "Phi" + pair_name(j, i) + " does not invert Phi" + pair_name(i, j) + " over " + set_str(w));
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      for (PointSet w : d.charts[i].top.opens_within(d.overlaps.at({i, j}) & d.overlaps.at({i, k}))) {
        auto lhs = compose_maps(d.ring_transitions.at({j, k}).at(image_set(phi, w)), maps.at(w));
        r.set("cocycle", lhs == d.ring_transitions.at({i, k}).at(w),
              "ring cocycle fails at (" + num(i) + "," + num(j) + "," + num(k) + ") over " + set_str(w));
      }
    }
  }
  r.set("sheaf", true);
  r.set("local", true);
  for (int i = 0; i < n; ++i) {
    ConditionReport c = validate_ringed_space(d.charts[i]);
    r.set("sheaf", c.get("sheaf"), "chart " + num(i) + " structure presheaf is not a sheaf");
    if (d.variant == RingedVariant::LRTS)
      r.set("local", is_locally_ringed(d.charts[i]), "chart " + num(i) + " has a non-local stalk");
  }
  return r;
}

InducedSheaf induced_sheaf(const RingedGluingData& d, const GluedSpace& q) {
  InducedSheaf out;
  const int n = d.n();
  std::vector<const ContinuousMap*> iota;
  for (int i = 0; i < n; ++i) iota.push_back(&q.iota.at(GlueObject::single(i)));
  out.data.base = q.q;
  out.data.sheaf_variant = true;
  for (int i = 0; i < n; ++i) {
    out.ring_sheaves.push_back(pushforward_ring(d.charts[i].sheaf, *iota[i]));
    out.additive.push_back(additive_presheaf(out.ring_sheaves.back()));
    out.data.cover.push_back(out.ring_sheaves.back().carrier());
    out.data.sheaves.push_back(out.additive.back().presheaf);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const PointSet vij = out.data.cover[i] & out.data.cover[j];
      const auto& phi = d.transitions.at({i, j});
      EnrichedMorphism m{restrict_presheaf(out.data.sheaves[i], vij), restrict_presheaf(out.data.sheaves[j], vij), {}};
      std::vector<RingMap> rmaps;
      for (PointSet w : q.q.opens_within(vij)) {
        const PointSet wi = iota[i]->preimage(w), wj = iota[j]->preimage(w);
        if (!subset_of(wi, d.overlaps.at({i, j})))
          throw Falsification("chart images meet outside the overlap " + pair_name(i, j));
        if (image_set(phi, wi) != wj) throw Falsification("iota_j o phi_ij differs from iota_i over " + set_str(w));
        const RingMap& rm = d.ring_transitions.at({i, j}).at(wi);
        rmaps.push_back(rm);
        const auto& ai = out.additive[i];
        const auto& aj = out.additive[j];
        m.alpha.push_back(additive_hom(ai.groups[out.ring_sheaves[i].index(w)], aj.groups[out.ring_sheaves[j].index(w)],
                                       out.ring_sheaves[i].ring(w), rm));
      }
      out.ring_transitions[{i, j}] = std::move(rmaps);
      out.data.transitions[{i, j}] = std::move(m);
    }
  return out;
}

SheafGluingFunctor induced_sheaf_functor(const RingedGluingData& d) {
  TopGluingFunctor g = induced_top_functor(d);
  return sheaf_functor_from_data(induced_sheaf(d, standard_representative(g)).data);
}

// ---------------------------------------------------------------- gluing

StalkLemmaReport check_stalk_lemma(const GluedRinged& g, bool check_local) {
  StalkLemmaReport rep;
  const RingedSpace& q = g.space;
  for (size_t i = 0; i < g.projections.size(); ++i) {
    const RingedMorphism& p = g.projections[i];
    for (int x = 0; x < p.src.top.size(); ++x) {
      const int y = p.top(x);
      RingMap h = stalk_hom(p, x);
      const FinCommRing& qs = q.sheaf.ring(q.top.minimal_open(y));
      const FinCommRing& cs = p.src.sheaf.ring(p.src.top.minimal_open(x));
      std::string where = "chart " + num(static_cast<int>(i)) + " point " + num(x);
      if (!is_ring_hom(qs, cs, h) || !is_bijective(h, cs.order())) {
        rep.iso = false;
        rep.problems.push_back(where + ": projection stalk map is not an isomorphism");
      }
      for (PointSet u : q.top.opens()) {
        if (!(u & bit(y))) continue;
        auto lhs = compose_maps(p.src.sheaf.restriction(p.top.preimage(u), p.src.top.minimal_open(x)), p.at(u));
        auto rhs = compose_maps(h, q.sheaf.restriction(u, q.top.minimal_open(y)));
        if (lhs != rhs) {
          rep.square = false;
          rep.problems.push_back(where + ": germ square fails over " + set_str(u));
        }
      }
      if (check_local && !is_local_hom(qs, cs, h)) {
        rep.local = false;
        rep.problems.push_back(where + ": stalk map is not local");
      }
    }
  }
  if (check_local && !is_locally_ringed(q)) {
    rep.local = false;
    rep.problems.push_back("glued space has a non-local stalk");
  }
  return rep;
}

GluedRinged glue_ringed(const RingedGluingData& d) {
  ConditionReport r = validate_ringed_data(d);
  if (!r.all()) throw GluingDataError(r);
  GluedRinged out;
  const int n = d.n();
  out.top_functor = induced_top_functor(d);
  out.top = standard_representative(out.top_functor);
  out.induced = induced_sheaf(d, out.top);
  ConditionReport sr = validate_sheaf_data(out.induced.data);
  if (!sr.all()) throw Falsification(std::string("induced sheaf gluing data is invalid: ") + GluingDataError(sr).what());
  out.additive_limit = build_limit_sheaf(out.induced.data);

  const FinSpace& Q = out.top.q;
  const auto& cover = out.induced.data.cover;
  const auto& rs = out.induced.ring_sheaves;
  const auto opens = Q.opens();
  std::map<PointSet, FinCommRing> rings;
  std::vector<std::map<std::vector<int>, int>> lookup(opens.size());
  for (size_t a = 0; a < opens.size(); ++a) {
    const PointSet v = opens[a];
    std::vector<const FinCommRing*> parts;
    for (int i = 0; i < n; ++i) parts.push_back(&rs[i].ring(v & cover[i]));
    // Compatibility of component i with an earlier component j.
    auto compatible = [&](const std::vector<int>& t, int i) {
      for (int j = 0; j < i; ++j) {
        const PointSet w = v & cover[i] & cover[j];
        const auto& phi = out.induced.ring_transitions.at({j, i});
        const RingMap& m = phi[find_open(Q.opens_within(cover[i] & cover[j]), w)];
        if (m[rs[j].restriction(v & cover[j], w)[t[j]]] != rs[i].restriction(v & cover[i], w)[t[i]]) return false;
      }
      return true;
    };
    std::vector<std::vector<int>> tuples;
    std::vector<int> t(n, 0);
    // Depth-first over charts, pruning as soon as a component is incompatible.
    auto rec = [&](auto&& self, int i) -> void {
      if (i == n) {
        tuples.push_back(t);
        return;
      }
      for (int e = 0; e < parts[i]->order(); ++e) {
        t[i] = e;
        if (compatible(t, i)) self(self, i + 1);
      }
    };
    rec(rec, 0);
    const Int expected = out.additive_limit.sheaf.sections(v).order();
    if (static_cast<Int>(tuples.size()) != expected)
      throw Falsification("ring-valued limit over " + set_str(v) + " has " + num(static_cast<int>(tuples.size())) +
                          " elements but the additive limit has order " + std::to_string(expected));
    if (tuples.size() > static_cast<size_t>(kMaxRingOrder)) throw InvalidInput("glued ring exceeds 1024 elements");
    for (size_t e = 0; e < tuples.size(); ++e) lookup[a][tuples[e]] = static_cast<int>(e);
    const int m = static_cast<int>(tuples.size());
    Table add(m, std::vector<int>(m)), mul(m, std::vector<int>(m));
    std::vector<int> tmp(n);
    auto find = [&](const std::vector<int>& x) {
      auto it = lookup[a].find(x);
      if (it == lookup[a].end()) throw Falsification("compatible families over " + set_str(v) + " are not closed under ring operations");
      return it->second;
    };
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        for (int i = 0; i < n; ++i) tmp[i] = parts[i]->add(tuples[x][i], tuples[y][i]);
        add[x][y] = find(tmp);
        for (int i = 0; i < n; ++i) tmp[i] = parts[i]->mul(tuples[x][i], tuples[y][i]);
        mul[x][y] = find(tmp);
      }
    for (int i = 0; i < n; ++i) tmp[i] = parts[i]->zero();
    int zero = find(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = parts[i]->one();
    rings[v] = FinCommRing::unchecked(add, mul, zero, find(tmp));
    out.tuples.push_back(std::move(tuples));
  }
  std::map<std::pair<PointSet, PointSet>, RingMap> res;
  for (size_t a = 0; a < opens.size(); ++a)
    for (size_t b = 0; b < opens.size(); ++b) {
      if (!subset_of(opens[b], opens[a])) continue;
      RingMap m;
      std::vector<int> tmp(n);
      for (const auto& t : out.tuples[a]) {
        for (int i = 0; i < n; ++i) tmp[i] = rs[i].restriction(opens[a] & cover[i], opens[b] & cover[i])[t[i]];
        auto it = lookup[b].find(tmp);
        if (it == lookup[b].end()) throw Falsification("restriction leaves the ring-valued limit");
        m.push_back(it->second);
      }
      res[{opens[a], opens[b]}] = std::move(m);
    }
  out.space = RingedSpace{Q, make_ring_presheaf(Q, Q.full(), rings, res)};
  for (int i = 0; i < n; ++i) {
    RingedMorphism p{d.charts[i], out.space, out.top.iota.at(GlueObject::single(i)), {}};
    for (size_t a = 0; a < opens.size(); ++a) {
      RingMap m;
      for (const auto& t : out.tuples[a]) m.push_back(t[i]);
      p.comorphism.push_back(std::move(m));
    }
    out.projections.push_back(std::move(p));
  }
  SheafCertificate c = is_sheaf(additive_presheaf(out.space.sheaf).presheaf);
  if (!c.sheaf) throw Falsification("glued structure presheaf is not a sheaf: " + c.str());
  out.stalk_lemma = check_stalk_lemma(out, d.variant == RingedVariant::LRTS);
  if (!out.stalk_lemma.ok()) {
    std::string msg = "stalk lemma fails:";
    for (const auto& p : out.stalk_lemma.problems) msg += " " + p + ";";
    throw Falsification(msg);
  }
  return out;
}

RingedGlueReport verify_ringed_glued(const RingedSpace& c, const std::vector<RingedMorphism>& p,
                                     const RingedGluingData& d, const GluedRinged& glued) {
  RingedGlueReport out;
  ConditionReport& r = out.report;
  const int n = d.n();
  auto fail_rest = [&](std::initializer_list<const char*> names) {
    for (const char* k : names) r.set(k, false);
  };
  r.set("legs", static_cast<int>(p.size()) == n, "need one projection per chart");
  for (int i = 0; i < n && r.get("legs"); ++i) {
    bool typed = p[i].src.top == d.charts[i].top && p[i].src.sheaf == d.charts[i].sheaf && p[i].dst.top == c.top &&
                 p[i].dst.sheaf == c.sheaf;
    r.set("legs", typed, "projection " + num(i) + " has wrong endpoints");
    if (typed)
      for (const auto& why : check_ringed_morphism(p[i])) r.set("legs", false, "projection " + num(i) + ": " + why);
  }
  if (!r.get("legs")) {
    fail_rest({"top", "cone", "homeomorphism", "iso", "natural", "local"});
    return out;
  }
  const TopGluingFunctor& g = glued.top_functor;
  Legs legs;
  for (int i = 0; i < n; ++i) legs[GlueObject::single(i)] = p[i].top;
  for (const auto& a : g.cat.objects()) {
    if (a.shape == Shape::Pair) legs[a] = compose(p[a.i].top, g.arrow(Generator::eta(a.i, a.j)));
  }
  for (const auto& a : g.cat.objects()) {
    if (a.shape == Shape::Triple)
      legs[a] = compose(legs.at(GlueObject::pair(a.i, a.j)), g.arrow(Generator::eta3(a.i, a.j, a.k, a.j)));
  }
  GlueReport gr = verify_glued(c.top, legs, g);
  r.set("top", gr.glued_up);
  for (const auto& why : gr.report.problems) r.problems.push_back("top: " + why);
  r.set("cone", is_cone(c.top, legs, g).full, "chart maps do not form a cone");
  if (!r.get("cone")) {
    fail_rest({"homeomorphism", "iso", "natural", "local"});
    return out;
  }
  ContinuousMap mu = mediating_morphism(c.top, legs, glued.top, g);
  r.set("homeomorphism", is_homeomorphism(mu), "comparison of underlying spaces is not a homeomorphism");
  if (!r.get("homeomorphism")) {
    fail_rest({"iso", "natural", "local"});
    return out;
  }
  const RingPresheaf& L = glued.space.sheaf;
  std::vector<RingMap> theta;
  r.set("iso", true);
  for (PointSet v : c.sheaf.opens()) {
    const PointSet vq = mu.preimage(v);
    const int a = L.index(vq);
    std::map<std::vector<int>, int> lookup;
    for (size_t e = 0; e < glued.tuples[a].size(); ++e) lookup[glued.tuples[a][e]] = static_cast<int>(e);
    RingMap th;
    std::vector<int> t(n);
    for (int s = 0; s < c.sheaf.ring(v).order(); ++s) {
      for (int i = 0; i < n; ++i) t[i] = p[i].at(v)[s];
      auto it = lookup.find(t);
      if (it == lookup.end()) {
        r.set("cone", false, "sections over " + set_str(v) + " project to an incompatible family");
        th.push_back(0);
      } else {
        th.push_back(it->second);
      }
    }
    r.set("iso", is_ring_hom(c.sheaf.ring(v), L.ring(vq), th) && is_bijective(th, L.ring(vq).order()),
          "comparison over " + set_str(v) + " is not a ring isomorphism");
    theta.push_back(std::move(th));
  }
  r.set("natural", true);
  const auto& opens = c.sheaf.opens();
  for (size_t a = 0; a < opens.size(); ++a)
    for (size_t b = 0; b < opens.size(); ++b) {
      if (a == b || !subset_of(opens[b], opens[a])) continue;
      auto lhs = compose_maps(L.restriction(mu.preimage(opens[a]), mu.preimage(opens[b])), theta[a]);
      auto rhs = compose_maps(theta[b], c.sheaf.restriction(opens[a], opens[b]));
      r.set("natural", lhs == rhs, "comparison not natural on " + set_str(opens[a]) + " > " + set_str(opens[b]));
    }
  r.set("local", true);
  if (d.variant == RingedVariant::LRTS) {
    r.set("local", is_locally_ringed(c), "candidate has a non-local stalk");
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < p[i].src.top.size(); ++x) {
        const int y = p[i].top(x);
        r.set("local",
              is_local_hom(c.sheaf.ring(c.top.minimal_open(y)), p[i].src.sheaf.ring(p[i].src.top.minimal_open(x)),
                           stalk_hom(p[i], x)),
              "projection " + num(i) + " stalk map at " + num(x) + " is not local");
      }
  }
  out.verdict = r.all();
  return out;
}

}  // namespace glue
