#include "glue/fintop.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "glue/errors.hpp"

namespace glue {

std::vector<int> members(PointSet s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

PointSet set_of(const std::vector<int>& pts) {
  PointSet s = 0;
  for (int p : pts) {
    if (p < 0 || p >= kMaxPoints) throw InvalidInput("point label out of range: " + std::to_string(p));
    s |= bit(p);
  }
  return s;
}

std::string set_str(PointSet s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int p : members(s)) {
    os << (first ? "" : ",") << p;
    first = false;
  }
  os << "}";
  return os.str();
}

bool open_less(PointSet a, PointSet b) {
  int ca = count(a), cb = count(b);
  return ca != cb ? ca < cb : a < b;
}

// ---------------------------------------------------------------- FinSpace

FinSpace::FinSpace() : n_(0), opens_{0} {}

FinSpace FinSpace::make(int n, std::vector<PointSet> opens) {
  if (n < 0 || n > kMaxPoints) throw InvalidInput("point count out of range: " + std::to_string(n));
  const PointSet all = full_set(n);
  for (PointSet u : opens)
    if (!subset_of(u, all)) throw InvalidInput("open " + set_str(u) + " is not a subset of the points");
  std::sort(opens.begin(), opens.end(), open_less);
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  auto has = [&](PointSet s) { return std::binary_search(opens.begin(), opens.end(), s, open_less); };
  if (!has(0)) throw InvalidInput("empty set missing");
  if (!has(all)) throw InvalidInput("full set missing");
  for (size_t i = 0; i < opens.size(); ++i)
    for (size_t j = i + 1; j < opens.size(); ++j) {
      if (!has(opens[i] | opens[j])) throw InvalidInput("union " + set_str(opens[i] | opens[j]) + " missing");
      if (!has(opens[i] & opens[j]))
        throw InvalidInput("intersection " + set_str(opens[i] & opens[j]) + " missing");
    }
  FinSpace x;
  x.n_ = n;
  x.opens_ = std::move(opens);
  return x;
}

FinSpace FinSpace::generated(int n, const std::vector<PointSet>& subbasis) {
  if (n < 0 || n > kMaxPoints) throw InvalidInput("point count out of range: " + std::to_string(n));
  const PointSet all = full_set(n);
  std::vector<PointSet> minimal(n, all);
  for (PointSet s : subbasis) {
    s &= all;
    for (int x : members(s)) minimal[x] &= s;
  }
  std::set<PointSet> seen{0};
  std::vector<PointSet> work{0};
  while (!work.empty()) {
    PointSet w = work.back();
    work.pop_back();
    for (int x = 0; x < n; ++x) {
      PointSet u = w | minimal[x];
      if (seen.insert(u).second) work.push_back(u);
    }
  }
  FinSpace sp;
  sp.n_ = n;
  sp.opens_.assign(seen.begin(), seen.end());
  std::sort(sp.opens_.begin(), sp.opens_.end(), open_less);
  return sp;
}

FinSpace FinSpace::discrete(int n) {
  std::vector<PointSet> sb;
  for (int i = 0; i < n; ++i) sb.push_back(bit(i));
  return generated(n, sb);
}

FinSpace FinSpace::indiscrete(int n) { return make(n, {0, full_set(n)}); }

FinSpace FinSpace::sierpinski() { return make(2, {0, 1, 3}); }

bool FinSpace::is_open(PointSet s) const { return std::binary_search(opens_.begin(), opens_.end(), s, open_less); }

int FinSpace::open_index(PointSet s) const {
  auto it = std::lower_bound(opens_.begin(), opens_.end(), s, open_less);
  if (it == opens_.end() || *it != s) return -1;
  return static_cast<int>(it - opens_.begin());
}

PointSet FinSpace::minimal_open(int x) const {
  PointSet m = full();
  for (PointSet u : opens_)
    if (u & bit(x)) m &= u;
  return m;
}

std::vector<PointSet> FinSpace::opens_within(PointSet u) const {
  std::vector<PointSet> out;
  for (PointSet v : opens_)
    if (subset_of(v, u)) out.push_back(v);
  return out;
}

std::string FinSpace::str() const {
  std::ostringstream os;
  os << n_ << " points, opens";
  for (PointSet u : opens_) os << " " << set_str(u);
  return os.str();
}

// ---------------------------------------------------------------- maps

ContinuousMap ContinuousMap::make(const FinSpace& dom, const FinSpace& cod, std::vector<int> assign,
                                  bool require_open) {
  ContinuousMap f{dom, cod, std::move(assign)};
  if (!is_total(f)) throw InvalidInput("map is not a total function into the codomain");
  if (!is_continuous(f)) throw InvalidInput("map is not continuous");
  if (require_open && !is_open_map(f)) throw InvalidInput("map is not open");
  return f;
}

ContinuousMap ContinuousMap::unchecked(const FinSpace& dom, const FinSpace& cod, std::vector<int> assign) {
  return ContinuousMap{dom, cod, std::move(assign)};
}

ContinuousMap ContinuousMap::identity(const FinSpace& x) {
  std::vector<int> a(x.size());
  std::iota(a.begin(), a.end(), 0);
  return ContinuousMap{x, x, std::move(a)};
}

PointSet ContinuousMap::image(PointSet s) const {
  PointSet out = 0;
  for (int p : members(s)) out |= bit(assign[p]);
  return out;
}

PointSet ContinuousMap::preimage(PointSet s) const {
  PointSet out = 0;
  for (int p = 0; p < dom.size(); ++p)
    if (s & bit(assign[p])) out |= bit(p);
  return out;
}

bool is_total(const ContinuousMap& f) {
  if (static_cast<int>(f.assign.size()) != f.dom.size()) return false;
  return std::all_of(f.assign.begin(), f.assign.end(), [&](int y) { return y >= 0 && y < f.cod.size(); });
}

bool is_continuous(const ContinuousMap& f) {
  for (PointSet v : f.cod.opens())
    if (!f.dom.is_open(f.preimage(v))) return false;
  return true;
}

bool is_open_map(const ContinuousMap& f) {
  for (PointSet u : f.dom.opens())
    if (!f.cod.is_open(f.image(u))) return false;
  return true;
}

bool is_injective(const ContinuousMap& f) { return count(f.image(f.dom.full())) == f.dom.size(); }

bool is_surjective(const ContinuousMap& f) { return f.image(f.dom.full()) == f.cod.full(); }

bool is_homeomorphism(const ContinuousMap& f) {
  if (!is_total(f) || !is_injective(f) || !is_surjective(f)) return false;
  return is_continuous(f) && is_continuous(inverse_bijection(f));
}

ContinuousMap compose(const ContinuousMap& g, const ContinuousMap& f) {
  if (!(f.cod == g.dom)) throw InvalidInput("compose: codomain/domain mismatch");
  std::vector<int> a(f.dom.size());
  for (int x = 0; x < f.dom.size(); ++x) a[x] = g.assign[f.assign[x]];
  return ContinuousMap{f.dom, g.cod, std::move(a)};
}

ContinuousMap inverse_bijection(const ContinuousMap& f) {
  if (f.dom.size() != f.cod.size() || !is_injective(f)) throw InvalidInput("inverse of a non-bijection");
  std::vector<int> a(f.cod.size());
  for (int x = 0; x < f.dom.size(); ++x) a[f.assign[x]] = x;
  return ContinuousMap{f.cod, f.dom, std::move(a)};
}

// ---------------------------------------------------------------- constructions

Coproduct coproduct(const std::vector<FinSpace>& spaces) {
  int n = 0;
  std::vector<int> offsets;
  std::vector<PointSet> subbasis;
  for (const auto& s : spaces) {
    if (n + s.size() > kMaxPoints) throw InvalidInput("coproduct exceeds 64 points");
    offsets.push_back(n);
    for (PointSet u : s.opens()) subbasis.push_back(u << n);
    n += s.size();
  }
  // Each summand is itself open, so generated opens are unions of one open per summand.
  for (size_t i = 0; i < spaces.size(); ++i) subbasis.push_back(spaces[i].full() << offsets[i]);
  Coproduct out{FinSpace::generated(n, subbasis), {}, offsets};
  for (size_t i = 0; i < spaces.size(); ++i) {
    std::vector<int> a(spaces[i].size());
    std::iota(a.begin(), a.end(), offsets[i]);
    out.injections.push_back(ContinuousMap{spaces[i], out.space, std::move(a)});
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Quotient quotient_final(const FinSpace& x, const std::vector<std::pair<int, int>>& relation) {
  const int n = x.size();
  UnionFind uf(n);
  for (auto [a, b] : relation) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw InvalidInput("relation mentions a point outside the space");
    uf.unite(a, b);
  }
  std::map<int, int> class_id;
  std::vector<int> assign(n);
  std::vector<PointSet> classes;
  for (int p = 0; p < n; ++p) {
    int r = uf.find(p);
    auto [it, fresh] = class_id.emplace(r, static_cast<int>(classes.size()));
    if (fresh) classes.push_back(0);
    classes[it->second] |= bit(p);
    assign[p] = it->second;
  }
  const int k = static_cast<int>(classes.size());
  // W is open in the final topology iff its preimage is open; those preimages are the saturated opens.
  std::vector<PointSet> opens;
  for (PointSet u : x.opens()) {
    PointSet img = 0, sat = 0;
    for (int p : members(u)) img |= bit(assign[p]);
    for (int c : members(img)) sat |= classes[c];
    if (sat == u) opens.push_back(img);
  }
  FinSpace q = FinSpace::make(k, opens);
  return Quotient{q, ContinuousMap{x, q, assign}, classes};
}

FiberProduct fiber_product(const ContinuousMap& f, const ContinuousMap& g) {
  if (!(f.cod == g.cod)) throw InvalidInput("fiber_product: maps have different codomains");
  FiberProduct out;
  for (int a = 0; a < f.dom.size(); ++a)
    for (int b = 0; b < g.dom.size(); ++b)
      if (f.assign[a] == g.assign[b]) out.points.emplace_back(a, b);
  const int n = static_cast<int>(out.points.size());
  if (n > kMaxPoints) throw InvalidInput("fiber product exceeds 64 points");
  std::vector<int> a1(n), a2(n);
  for (int i = 0; i < n; ++i) {
    a1[i] = out.points[i].first;
    a2[i] = out.points[i].second;
  }
  std::vector<PointSet> subbasis;
  for (PointSet u : f.dom.opens()) {
    PointSet s = 0;
    for (int i = 0; i < n; ++i)
      if (u & bit(a1[i])) s |= bit(i);
    subbasis.push_back(s);
  }
  for (PointSet v : g.dom.opens()) {
    PointSet s = 0;
    for (int i = 0; i < n; ++i)
      if (v & bit(a2[i])) s |= bit(i);
    subbasis.push_back(s);
  }
  out.space = FinSpace::generated(n, subbasis);
  out.p1 = ContinuousMap{out.space, f.dom, a1};
  out.p2 = ContinuousMap{out.space, g.dom, a2};
  return out;
}

Subspace subspace(const FinSpace& x, PointSet s) {
  if (!subset_of(s, x.full())) throw InvalidInput("subspace: " + set_str(s) + " is not a subset of the points");
  std::vector<int> pts = members(s);
  const int k = static_cast<int>(pts.size());
  std::vector<PointSet> opens;
  for (PointSet u : x.opens()) {
    PointSet t = 0;
    for (int i = 0; i < k; ++i)
      if (u & bit(pts[i])) t |= bit(i);
    opens.push_back(t);
  }
  FinSpace sub = FinSpace::make(k, opens);
  return Subspace{sub, ContinuousMap{sub, x, pts}, pts};
}

std::vector<PointSet> connected_components(const FinSpace& x, PointSet s) {
  std::vector<int> pts = members(s);
  UnionFind uf(x.size());
  for (int p : pts) {
    PointSet up = x.minimal_open(p) & s;
    for (int q : members(up)) uf.unite(p, q);
  }
  std::map<int, PointSet> comp;
  for (int p : pts) comp[uf.find(p)] |= bit(p);
  std::vector<PointSet> out;
  for (const auto& [root, c] : comp) out.push_back(c);
  std::sort(out.begin(), out.end(), [](PointSet a, PointSet b) { return std::countr_zero(a) < std::countr_zero(b); });
  return out;
}

SquareVerdict is_pullback_square(const Square& sq) {
  const auto& [p1, p2, f, g] = sq;
  if (!(p1.dom == p2.dom) || !(p1.cod == f.dom) || !(p2.cod == g.dom) || !(f.cod == g.cod))
    throw InvalidInput("square endpoints do not match");
  for (int x = 0; x < p1.dom.size(); ++x)
    if (f.assign[p1.assign[x]] != g.assign[p2.assign[x]]) return SquareVerdict::NotCommuting;
  FiberProduct fp = fiber_product(f, g);
  std::vector<int> c(p1.dom.size());
  for (int x = 0; x < p1.dom.size(); ++x) {
    auto it = std::lower_bound(fp.points.begin(), fp.points.end(), std::make_pair(p1.assign[x], p2.assign[x]));
    c[x] = static_cast<int>(it - fp.points.begin());
  }
  return is_homeomorphism(ContinuousMap{p1.dom, fp.space, c}) ? SquareVerdict::Pullback : SquareVerdict::NotPullback;
}

std::string specialization_dot(const FinSpace& x, const std::string& name) {
  const int n = x.size();
  std::vector<PointSet> up(n);  // up[p] = points q with p <= q
  for (int p = 0; p < n; ++p) up[p] = x.minimal_open(p);
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (int p = 0; p < n; ++p) os << "  p" << p << " [label=\"" << p << "\"];\n";
  auto below = [&](int p, int q) { return p != q && (up[p] & bit(q)) && !(up[q] & bit(p)); };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (!below(p, q)) continue;
      bool covering = true;
      for (int r = 0; r < n && covering; ++r)
        if (below(p, r) && below(r, q)) covering = false;
      if (covering) os << "  p" << p << " -> p" << q << ";\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace glue
