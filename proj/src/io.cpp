#include "glue/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "glue/generate.hpp"

namespace glue::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw InvalidInput((where.empty() ? std::string("/") : where) + ": " + msg);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, size_t idx) { return where + "/" + std::to_string(idx); }

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at(where, key), "missing");
  return *it;
}

long long as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

int as_index(const json& j, int bound, const std::string& where) {
  long long v = as_int(j, where);
  if (v < 0 || v >= bound) fail(where, "index " + std::to_string(v) + " out of range [0," + std::to_string(bound) + ")");
  return static_cast<int>(v);
}

const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

std::vector<int> int_list(const json& j, const std::string& where) {
  std::vector<int> out;
  as_array(j, where);
  for (size_t a = 0; a < j.size(); ++a) out.push_back(static_cast<int>(as_int(j[a], at(where, a))));
  return out;
}

PointSet point_set(const json& j, int n, const std::string& where) {
  PointSet s = 0;
  as_array(j, where);
  for (size_t a = 0; a < j.size(); ++a) s |= bit(as_index(j[a], n, at(where, a)));
  return s;
}

// Escapes a key for use inside a JSON pointer.
std::string esc(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::pair<PointSet, PointSet> parse_restriction_key(const std::string& key, const std::string& where) {
  auto gt = key.find('>');
  if (gt == std::string::npos) fail(where, "restriction key must look like \"U>V\"");
  return {parse_open_key(key.substr(0, gt), where), parse_open_key(key.substr(gt + 1), where)};
}

FgAbGroup parse_group_string(const std::string& s, const std::string& where) {
  std::string t;
  for (char c : s)
    if (c != ' ') t += c;
  if (t == "0") return FgAbGroup();
  Vec torsion;
  int free_rank = 0;
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, '+')) {
    if (part.empty() || part[0] != 'Z') fail(where, "bad group \"" + s + "\"");
    try {
      if (part == "Z") {
        ++free_rank;
      } else if (part.rfind("Z^", 0) == 0) {
        free_rank += std::stoi(part.substr(2));
      } else if (part.rfind("Z/", 0) == 0) {
        Int d = std::stoll(part.substr(2));
        if (d < 1) fail(where, "bad cyclic order in \"" + s + "\"");
        if (d > 1) torsion.push_back(d);
      } else {
        fail(where, "bad group \"" + s + "\"");
      }
    } catch (const std::logic_error&) {
      fail(where, "bad group \"" + s + "\"");
    }
  }
  Matrix rel(static_cast<int>(torsion.size()) + free_rank, static_cast<int>(torsion.size()));
  for (size_t a = 0; a < torsion.size(); ++a) rel(static_cast<int>(a), static_cast<int>(a)) = torsion[a];
  return FgAbGroup(rel.rows(), rel);
}

// Registries of named spaces, groups and rings in a document.
struct Registry {
  std::map<std::string, FinSpace> spaces;
  std::map<std::string, FgAbGroup> groups;
  std::map<std::string, FinCommRing> rings;

  const FinSpace& space(const json& j, const std::string& where) const {
    if (!j.is_string()) fail(where, "expected a space id");
    auto it = spaces.find(j.get<std::string>());
    if (it == spaces.end()) fail(where, "undefined space id '" + j.get<std::string>() + "'");
    return it->second;
  }
  FgAbGroup group(const json& j, const std::string& where) const {
    if (j.is_string()) {
      auto it = groups.find(j.get<std::string>());
      if (it != groups.end()) return it->second;
    }
    return group_from_json(j, where);
  }
  FinCommRing ring(const json& j, const std::string& where) const {
    if (j.is_string()) {
      auto it = rings.find(j.get<std::string>());
      if (it != rings.end()) return it->second;
    }
    return ring_from_json(j, where);
  }
};

Registry read_registry(const json& doc, bool need_spaces) {
  Registry r;
  if (doc.contains("spaces")) {
    const json& s = doc["spaces"];
    if (!s.is_object()) fail("/spaces", "expected an object of id -> space");
    for (auto it = s.begin(); it != s.end(); ++it) r.spaces[it.key()] = space_from_json(it.value(), "/spaces/" + esc(it.key()));
  } else if (need_spaces) {
    fail("/spaces", "missing");
  }
  if (doc.contains("groups")) {
    const json& g = doc["groups"];
    if (!g.is_object()) fail("/groups", "expected an object of id -> group");
    for (auto it = g.begin(); it != g.end(); ++it) r.groups[it.key()] = group_from_json(it.value(), "/groups/" + esc(it.key()));
  }
  if (doc.contains("rings")) {
    const json& g = doc["rings"];
    if (!g.is_object()) fail("/rings", "expected an object of id -> ring");
    for (auto it = g.begin(); it != g.end(); ++it) r.rings[it.key()] = ring_from_json(it.value(), "/rings/" + esc(it.key()));
  }
  return r;
}

ContinuousMap point_map(const FinSpace& dom, const FinSpace& cod, const json& j, const std::string& where) {
  std::vector<int> a = int_list(j, where);
  if (static_cast<int>(a.size()) != dom.size())
    fail(where, "map has " + std::to_string(a.size()) + " values for a domain of " + std::to_string(dom.size()) + " points");
  for (size_t x = 0; x < a.size(); ++x)
    if (a[x] < 0 || a[x] >= cod.size()) fail(at(where, x), "value out of range");
  return ContinuousMap::unchecked(dom, cod, a);
}

PairKey pair_of(const json& e, int n, const std::string& where) {
  int i = as_index(member(e, "i", where), n, at(where, "i"));
  int j = as_index(member(e, "j", where), n, at(where, "j"));
  if (i == j) fail(where, "i and j must differ");
  return {i, j};
}

TripleKey triple_of(const json& e, int n, const std::string& where) {
  auto [i, j] = pair_of(e, n, where);
  int k = as_index(member(e, "k", where), n, at(where, "k"));
  if (k == i || k == j) fail(where, "i, j, k must be distinct");
  return {i, j, k};
}

// Triple overlaps as fiber products and triple transitions induced by the pair transitions.
void derive_triples(TopGluingData& d, bool need_triples, bool need_transitions) {
  const int n = d.n;
  if (need_triples)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          if (i == j || i == k) continue;
          FiberProduct fp = fiber_product(d.overlaps.at({i, j}).upsilon, d.overlaps.at({i, k}).upsilon);
          d.triples[{i, j, k}] = TripleOverlap{fp.space, fp.p1, fp.p2};
        }
  if (!need_transitions) return;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || i == k || j == k) continue;
        const TripleOverlap& from = d.triple(i, j, k);
        const TripleOverlap& to = d.triple(j, i, k);
        const ContinuousMap& ups_kj = d.overlaps.at({k, j}).upsilon;
        std::vector<int> a(from.space.size(), -1);
        for (int p = 0; p < from.space.size(); ++p) {
          const int x = d.triple_leg(i, j, k, j)(p);
          const int y = d.triple_leg(i, j, k, k)(p);
          const int x2 = d.transitions.at({i, j})(x);
          const int z = d.overlaps.at({k, i}).upsilon(d.transitions.at({i, k})(y));
          int c = -1;
          for (int q = 0; q < ups_kj.dom.size(); ++q)
            if (ups_kj(q) == z) c = q;
          if (c < 0) fail("/triple_transitions", "cannot derive the transition for triple (" + std::to_string(i) + "," +
                                                     std::to_string(j) + "," + std::to_string(k) + "); supply it");
          const int y2 = d.transitions.at({k, j})(c);
          for (int q = 0; q < to.space.size(); ++q)
            if (d.triple_leg(j, i, k, i)(q) == x2 && d.triple_leg(j, i, k, k)(q) == y2) a[p] = q;
          if (a[p] < 0) fail("/triple_transitions", "cannot derive the transition for triple (" + std::to_string(i) + "," +
                                                        std::to_string(j) + "," + std::to_string(k) + "); supply it");
        }
        d.triple_transitions[{i, j, k}] = ContinuousMap::unchecked(from.space, to.space, a);
      }
}

TopGluingData parse_top(const json& doc, const std::string& variant) {
  Registry reg = read_registry(doc, true);
  TopGluingData d;
  d.open_variant = variant == "otop";
  const json& charts = as_array(member(doc, "charts", ""), "/charts");
  d.n = static_cast<int>(charts.size());
  if (d.n == 0) fail("/charts", "at least one chart is required");
  for (size_t a = 0; a < charts.size(); ++a) d.spaces.push_back(reg.space(charts[a], at("/charts", a)));
  const int n = d.n;
  if (n > 1) {
    const json& ov = as_array(member(doc, "overlaps", ""), "/overlaps");
    for (size_t a = 0; a < ov.size(); ++a) {
      const std::string w = at("/overlaps", a);
      PairKey key = pair_of(ov[a], n, w);
      if (d.overlaps.count(key)) fail(w, "duplicate overlap");
      const FinSpace& s = reg.space(member(ov[a], "space", w), at(w, "space"));
      d.overlaps[key] = Overlap{s, point_map(s, d.spaces[key.first], member(ov[a], "map", w), at(w, "map"))};
    }
    const json& tr = as_array(member(doc, "transitions", ""), "/transitions");
    for (size_t a = 0; a < tr.size(); ++a) {
      const std::string w = at("/transitions", a);
      PairKey key = pair_of(tr[a], n, w);
      if (!d.overlaps.count(key) || !d.overlaps.count({key.second, key.first}))
        fail(w, "transition between overlaps that are not declared");
      if (d.transitions.count(key)) fail(w, "duplicate transition");
      d.transitions[key] = point_map(d.overlaps.at(key).space, d.overlaps.at({key.second, key.first}).space,
                                     member(tr[a], "map", w), at(w, "map"));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (!d.overlaps.count({i, j})) fail("/overlaps", "missing overlap (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (!d.transitions.count({i, j}))
          fail("/transitions", "missing transition (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
  }
  const bool has_triples = doc.contains("triples");
  if (has_triples) {
    const json& t = as_array(doc["triples"], "/triples");
    for (size_t a = 0; a < t.size(); ++a) {
      const std::string w = at("/triples", a);
      TripleKey key = triple_of(t[a], n, w);
      if (key[1] > key[2]) fail(w, "triples are listed with j < k");
      if (d.triples.count(key)) fail(w, "duplicate triple");
      const FinSpace& s = reg.space(member(t[a], "space", w), at(w, "space"));
      d.triples[key] = TripleOverlap{s, point_map(s, d.overlaps.at({key[0], key[1]}).space, member(t[a], "to_j", w), at(w, "to_j")),
                                     point_map(s, d.overlaps.at({key[0], key[2]}).space, member(t[a], "to_k", w), at(w, "to_k"))};
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          if (i != j && i != k && !d.triples.count({i, j, k}))
            fail("/triples", "missing triple (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
  }
  const bool has_tt = doc.contains("triple_transitions");
  if (has_tt) {
    if (!has_triples) fail("/triple_transitions", "requires explicit triples");
    const json& t = as_array(doc["triple_transitions"], "/triple_transitions");
    for (size_t a = 0; a < t.size(); ++a) {
      const std::string w = at("/triple_transitions", a);
      TripleKey key = triple_of(t[a], n, w);
      if (d.triple_transitions.count(key)) fail(w, "duplicate triple transition");
      auto [i, j, k] = key;
      d.triple_transitions[key] =
          point_map(d.triple(i, j, k).space, d.triple(j, i, k).space, member(t[a], "map", w), at(w, "map"));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (i != j && i != k && j != k && !d.triple_transitions.count({i, j, k}))
            fail("/triple_transitions",
                 "missing (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
  }
  derive_triples(d, !has_triples, !has_tt);
  return d;
}

Presheaf parse_presheaf(const json& j, const FinSpace& base, PointSet carrier, const Registry& reg, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a presheaf object");
  try {
    if (j.contains("constant")) return constant_sheaf(base, carrier, reg.group(j["constant"], at(where, "constant")));
    std::map<PointSet, FgAbGroup> sections;
    const json& s = member(j, "sections", where);
    if (!s.is_object()) fail(at(where, "sections"), "expected an object of open -> group");
    for (auto it = s.begin(); it != s.end(); ++it) {
      const std::string w = at(at(where, "sections"), esc(it.key()));
      sections[parse_open_key(it.key(), w)] = reg.group(it.value(), w);
    }
    std::map<std::pair<PointSet, PointSet>, AbHom> res;
    if (j.contains("restrictions")) {
      const json& r = j["restrictions"];
      if (!r.is_object()) fail(at(where, "restrictions"), "expected an object of \"U>V\" -> matrix");
      for (auto it = r.begin(); it != r.end(); ++it) {
        const std::string w = at(at(where, "restrictions"), esc(it.key()));
        auto key = parse_restriction_key(it.key(), w);
        if (!sections.count(key.first) || !sections.count(key.second)) fail(w, "restriction between opens without sections");
        const FgAbGroup& a = sections.at(key.first);
        const FgAbGroup& b = sections.at(key.second);
        res.emplace(key, AbHom(a, b, matrix_from_json(it.value(), b.ambient(), a.ambient(), w)));
      }
    }
    return make_presheaf(base, carrier, sections, res, true);
  } catch (const PresheafError& e) {
    fail(where, e.what());
  }
}

SheafGluingData parse_sheaf(const json& doc, const std::string& variant) {
  Registry reg = read_registry(doc, true);
  SheafGluingData d;
  d.sheaf_variant = variant == "sheaf";
  d.base = reg.space(member(doc, "base", ""), "/base");
  const json& cover = as_array(member(doc, "cover", ""), "/cover");
  if (cover.empty()) fail("/cover", "at least one open is required");
  for (size_t a = 0; a < cover.size(); ++a) {
    PointSet u = point_set(cover[a], d.base.size(), at("/cover", a));
    if (!d.base.is_open(u)) fail(at("/cover", a), "not open in the base");
    d.cover.push_back(u);
  }
  const json& sheaves = as_array(member(doc, "sheaves", ""), "/sheaves");
  if (sheaves.size() != cover.size()) fail("/sheaves", "need one sheaf per cover member");
  for (size_t a = 0; a < sheaves.size(); ++a) d.sheaves.push_back(parse_presheaf(sheaves[a], d.base, d.cover[a], reg, at("/sheaves", a)));
  const int n = d.n();
  const json& tr = n > 1 ? as_array(member(doc, "transitions", ""), "/transitions") : json::array();
  for (size_t a = 0; a < tr.size(); ++a) {
    const std::string w = at("/transitions", a);
    auto [i, j] = pair_of(tr[a], n, w);
    if (d.transitions.count({i, j})) fail(w, "duplicate transition");
    const PointSet u = d.overlap(i, j);
    EnrichedMorphism m{restrict_presheaf(d.sheaves[i], u), restrict_presheaf(d.sheaves[j], u), {}};
    if (tr[a].value("identity", false)) {
      for (PointSet v : m.src.opens()) {
        const FgAbGroup& gs = m.src.sections(v);
        const FgAbGroup& gd = m.dst.sections(v);
        if (gs.ambient() != gd.ambient()) fail(w, "identity transition between different ambient ranks");
        m.alpha.push_back(AbHom(gs, gd, Matrix::identity(gs.ambient())));
      }
    } else {
      const json& comps = member(tr[a], "components", w);
      if (!comps.is_object()) fail(at(w, "components"), "expected an object of open -> matrix");
      for (PointSet v : m.src.opens()) {
        const std::string key = open_key(v);
        const std::string cw = at(at(w, "components"), esc(key));
        if (!comps.contains(key)) fail(cw, "missing component");
        const FgAbGroup& gs = m.src.sections(v);
        const FgAbGroup& gd = m.dst.sections(v);
        m.alpha.push_back(AbHom(gs, gd, matrix_from_json(comps[key], gd.ambient(), gs.ambient(), cw)));
      }
    }
    d.transitions[{i, j}] = std::move(m);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || d.transitions.count({i, j})) continue;
      if (!d.transitions.count({j, i}))
        fail("/transitions", "missing transition (" + std::to_string(i) + "," + std::to_string(j) + ")");
      auto inv = invert_natural(d.transitions.at({j, i}));
      if (!inv) fail("/transitions", "transition (" + std::to_string(j) + "," + std::to_string(i) + ") is not invertible");
      d.transitions[{i, j}] = inv->forward;
    }
  return d;
}

struct ChartInfo {
  std::optional<FinCommRing> constant;
};

RingedGluingData parse_ringed(const json& doc, const std::string& variant) {
  Registry reg = read_registry(doc, true);
  RingedGluingData d;
  d.variant = variant == "lrts" ? RingedVariant::LRTS : variant == "sch" ? RingedVariant::Sch : RingedVariant::RTS;
  const json& charts = as_array(member(doc, "charts", ""), "/charts");
  if (charts.empty()) fail("/charts", "at least one chart is required");
  std::vector<ChartInfo> info;
  for (size_t a = 0; a < charts.size(); ++a) {
    const std::string w = at("/charts", a);
    const FinSpace& top = reg.space(member(charts[a], "space", w), at(w, "space"));
    const json& sj = member(charts[a], "sheaf", w);
    const std::string sw = at(w, "sheaf");
    ChartInfo ci;
    RingPresheaf f;
    try {
      if (sj.contains("constant")) {
        ci.constant = reg.ring(sj["constant"], at(sw, "constant"));
        f = constant_ring_sheaf(top, top.full(), *ci.constant);
      } else {
        std::map<PointSet, FinCommRing> rings;
        const json& rj = member(sj, "rings", sw);
        if (!rj.is_object()) fail(at(sw, "rings"), "expected an object of open -> ring");
        for (auto it = rj.begin(); it != rj.end(); ++it) {
          const std::string ow = at(at(sw, "rings"), esc(it.key()));
          rings[parse_open_key(it.key(), ow)] = reg.ring(it.value(), ow);
        }
        std::map<std::pair<PointSet, PointSet>, RingMap> res;
        if (sj.contains("restrictions")) {
          const json& r = sj["restrictions"];
          if (!r.is_object()) fail(at(sw, "restrictions"), "expected an object of \"U>V\" -> map");
          for (auto it = r.begin(); it != r.end(); ++it) {
            const std::string ow = at(at(sw, "restrictions"), esc(it.key()));
            res[parse_restriction_key(it.key(), ow)] = int_list(it.value(), ow);
          }
        }
        f = make_ring_presheaf(top, top.full(), rings, res);
      }
    } catch (const PresheafError& e) {
      fail(sw, e.what());
    }
    d.charts.push_back(RingedSpace{top, f});
    info.push_back(ci);
  }
  const int n = d.n();
  if (n > 1) {
    const json& ov = as_array(member(doc, "overlaps", ""), "/overlaps");
    for (size_t a = 0; a < ov.size(); ++a) {
      const std::string w = at("/overlaps", a);
      PairKey key = pair_of(ov[a], n, w);
      d.overlaps[key] = point_set(member(ov[a], "points", w), d.charts[key.first].top.size(), at(w, "points"));
    }
    const json& tr = as_array(member(doc, "transitions", ""), "/transitions");
    for (size_t a = 0; a < tr.size(); ++a) {
      const std::string w = at("/transitions", a);
      PairKey key = pair_of(tr[a], n, w);
      std::vector<int> m = int_list(member(tr[a], "map", w), at(w, "map"));
      if (static_cast<int>(m.size()) != d.charts[key.first].top.size()) fail(at(w, "map"), "one value per point of chart i");
      for (size_t x = 0; x < m.size(); ++x)
        if (m[x] < -1 || m[x] >= d.charts[key.second].top.size()) fail(at(at(w, "map"), x), "value out of range");
      d.transitions[key] = m;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && (!d.overlaps.count({i, j}) || !d.transitions.count({i, j})))
          fail(d.overlaps.count({i, j}) ? "/transitions" : "/overlaps",
               "missing entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    const json& rt = as_array(member(doc, "ring_transitions", ""), "/ring_transitions");
    for (size_t a = 0; a < rt.size(); ++a) {
      const std::string w = at("/ring_transitions", a);
      auto [i, j] = pair_of(rt[a], n, w);
      const FinSpace& ti = d.charts[i].top;
      const FinSpace& tj = d.charts[j].top;
      const auto& phi = d.transitions.at({i, j});
      std::map<PointSet, RingMap> comps;
      if (rt[a].contains("pointwise")) {
        if (!info[i].constant || !info[j].constant || !(*info[i].constant == *info[j].constant))
          fail(at(w, "pointwise"), "pointwise transitions need constant sheaves with the same ring on both charts");
        const FinCommRing& r = *info[i].constant;
        RingMap sigma = rt[a]["pointwise"].is_string() && rt[a]["pointwise"] == "identity"
                            ? identity_map(r.order())
                            : int_list(rt[a]["pointwise"], at(w, "pointwise"));
        if (static_cast<int>(sigma.size()) != r.order() || !is_ring_hom(r, r, sigma) || !is_bijective(sigma, r.order()))
          fail(at(w, "pointwise"), "not a ring automorphism");
        for (PointSet v : ti.opens_within(d.overlaps.at({i, j}))) {
          PointSet pv = 0;
          for (int p : members(v)) {
            if (phi[p] < 0) fail(at(w, "pointwise"), "transition map undefined on the overlap");
            pv |= bit(phi[p]);
          }
          RingMap m;
          for (int s = 0; s < d.charts[i].sheaf.ring(v).order(); ++s) {
            std::vector<int> vals(tj.size(), 0);
            for (int p : members(v)) vals[phi[p]] = sigma[locally_constant_value(ti, v, r, s, p)];
            m.push_back(locally_constant_element(tj, pv, r, vals));
          }
          comps[v] = m;
        }
      } else {
        const json& cj = member(rt[a], "components", w);
        if (!cj.is_object()) fail(at(w, "components"), "expected an object of open -> map");
        for (auto it = cj.begin(); it != cj.end(); ++it) {
          const std::string ow = at(at(w, "components"), esc(it.key()));
          comps[parse_open_key(it.key(), ow)] = int_list(it.value(), ow);
        }
      }
      d.ring_transitions[{i, j}] = std::move(comps);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && !d.ring_transitions.count({i, j}))
          fail("/ring_transitions", "missing entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return d;
}

}  // namespace

std::string open_key(PointSet s) {
  std::string out;
  for (int p : members(s)) out += (out.empty() ? "" : ",") + std::to_string(p);
  return out;
}

PointSet parse_open_key(const std::string& key, const std::string& where) {
  PointSet s = 0;
  if (key.empty()) return s;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      size_t used = 0;
      int p = std::stoi(part, &used);
      if (used != part.size() || p < 0 || p >= kMaxPoints) throw std::invalid_argument(part);
      s |= bit(p);
    } catch (const std::logic_error&) {
      fail(where, "bad open \"" + key + "\"");
    }
  }
  return s;
}

json space_to_json(const FinSpace& x) {
  json opens = json::array();
  for (PointSet u : x.opens()) opens.push_back(members(u));
  return json{{"points", x.size()}, {"opens", opens}};
}

FinSpace space_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      if (s == "sierpinski") return FinSpace::sierpinski();
      if (s == "point") return FinSpace::point();
      if (s.rfind("discrete:", 0) == 0) return FinSpace::discrete(std::stoi(s.substr(9)));
      if (s.rfind("indiscrete:", 0) == 0) return FinSpace::indiscrete(std::stoi(s.substr(11)));
    } catch (const std::logic_error&) {
    }
    fail(where, "unknown space shorthand \"" + s + "\"");
  }
  const long long n = as_int(member(j, "points", where), at(where, "points"));
  if (n < 0 || n > kMaxPoints) fail(at(where, "points"), "point count out of range");
  const json& o = as_array(member(j, "opens", where), at(where, "opens"));
  std::vector<PointSet> opens;
  for (size_t a = 0; a < o.size(); ++a) opens.push_back(point_set(o[a], static_cast<int>(n), at(at(where, "opens"), a)));
  try {
    return FinSpace::make(static_cast<int>(n), opens);
  } catch (const InvalidInput& e) {
    fail(at(where, "opens"), e.what());
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (const Vec& r : m.to_rows()) rows.push_back(r);
  return rows;
}

Matrix matrix_from_json(const json& j, int rows, int cols, const std::string& where) {
  as_array(j, where);
  if (static_cast<int>(j.size()) != rows) fail(where, "expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rw = at(where, r);
    as_array(j[r], rw);
    if (static_cast<int>(j[r].size()) != cols) fail(rw, "expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c) m(r, c) = as_int(j[r][c], at(rw, c));
  }
  return m;
}

json group_to_json(const FgAbGroup& g) {
  json rel = json::array();
  for (int c = 0; c < g.relations().cols(); ++c) rel.push_back(g.relations().column(c));
  return json{{"ambient", g.ambient()}, {"relations", rel}};
}

FgAbGroup group_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return parse_group_string(j.get<std::string>(), where);
  const long long k = as_int(member(j, "ambient", where), at(where, "ambient"));
  if (k < 0 || k > 64) fail(at(where, "ambient"), "ambient rank out of range");
  const json& rel = j.contains("relations") ? as_array(j["relations"], at(where, "relations")) : json::array();
  std::vector<Vec> cols;
  for (size_t c = 0; c < rel.size(); ++c) {
    const std::string cw = at(at(where, "relations"), c);
    as_array(rel[c], cw);
    if (static_cast<long long>(rel[c].size()) != k) fail(cw, "relation length must equal the ambient rank");
    Vec v;
    for (size_t r = 0; r < rel[c].size(); ++r) v.push_back(as_int(rel[c][r], at(cw, r)));
    cols.push_back(v);
  }
  return FgAbGroup(static_cast<int>(k), Matrix::from_columns(static_cast<int>(k), cols));
}

json presheaf_to_json(const Presheaf& f) {
  json sections = json::object(), res = json::object();
  for (PointSet u : f.opens()) {
    sections[open_key(u)] = group_to_json(f.sections(u));
    for (PointSet v : f.opens())
      if (v != u && subset_of(v, u)) res[open_key(u) + ">" + open_key(v)] = matrix_to_json(f.restriction(u, v).matrix());
  }
  return json{{"sections", sections}, {"restrictions", res}};
}

json ring_to_json(const FinCommRing& r) {
  return json{{"order", r.order()}, {"add", r.add_table()}, {"mul", r.mul_table()}, {"one", r.one()}};
}

FinCommRing ring_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return gen::named_ring(j.get<std::string>());
    } catch (const InvalidInput& e) {
      fail(where, e.what());
    }
  }
  const json& add = as_array(member(j, "add", where), at(where, "add"));
  const int n = static_cast<int>(add.size());
  if (n < 1 || n > FinCommRing::kMaxInputOrder) fail(at(where, "add"), "ring order out of range");
  if (j.contains("order") && as_int(j["order"], at(where, "order")) != n) fail(at(where, "order"), "disagrees with the tables");
  auto table = [&](const std::string& key) {
    const std::string tw = at(where, key);
    const json& t = as_array(member(j, key, where), tw);
    if (static_cast<int>(t.size()) != n) fail(tw, "table must be square");
    Table out;
    for (int a = 0; a < n; ++a) {
      std::vector<int> row = int_list(t[a], at(tw, a));
      if (static_cast<int>(row.size()) != n) fail(at(tw, a), "table must be square");
      for (int b = 0; b < n; ++b)
        if (row[b] < 0 || row[b] >= n) fail(at(at(tw, a), b), "entry out of range");
      out.push_back(row);
    }
    return out;
  };
  Table a = table("add"), m = table("mul");
  const int one = as_index(member(j, "one", where), n, at(where, "one"));
  try {
    return FinCommRing::make(a, m, one);
  } catch (const InvalidInput& e) {
    fail(where, e.what());
  }
}

GluingDocument parse_document_json(const json& j) {
  if (!j.is_object()) fail("", "document must be an object");
  GluingDocument doc;
  const json& kind = member(j, "kind", "");
  if (!kind.is_string()) fail("/kind", "expected a string");
  doc.kind = kind.get<std::string>();
  doc.payload = j;
  auto variant = [&](const std::string& def, std::initializer_list<const char*> allowed) {
    std::string v = def;
    if (j.contains("variant")) {
      if (!j["variant"].is_string()) fail("/variant", "expected a string");
      v = j["variant"].get<std::string>();
    }
    for (const char* a : allowed)
      if (v == a) return v;
    fail("/variant", "variant \"" + v + "\" not allowed for kind \"" + doc.kind + "\"");
  };
  if (doc.kind == "top") {
    doc.variant = variant("otop", {"top", "otop"});
    doc.top = parse_top(j, doc.variant);
  } else if (doc.kind == "sheaf") {
    doc.variant = variant("sheaf", {"sheaf", "presheaf"});
    doc.sheaf = parse_sheaf(j, doc.variant);
  } else if (doc.kind == "ringed") {
    doc.variant = variant("rts", {"rts", "lrts", "sch"});
    if (doc.variant == "sch") throw Unsupported("scheme verification unsupported");
    doc.ringed = parse_ringed(j, doc.variant);
  } else {
    fail("/kind", "unknown kind \"" + doc.kind + "\"");
  }
  return doc;
}

GluingDocument parse_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InvalidInput("/: not valid JSON (" + std::string(e.what()) + ")");
  }
  return parse_document_json(j);
}

json top_data_to_json(const TopGluingData& d) {
  json spaces = json::object(), charts = json::array(), ov = json::array(), tr = json::array(), tri = json::array(),
       tt = json::array();
  for (int i = 0; i < d.n; ++i) {
    const std::string id = "U" + std::to_string(i);
    spaces[id] = space_to_json(d.spaces[i]);
    charts.push_back(id);
  }
  for (const auto& [k, o] : d.overlaps) {
    const std::string id = "U" + std::to_string(k.first) + "_" + std::to_string(k.second);
    spaces[id] = space_to_json(o.space);
    ov.push_back(json{{"i", k.first}, {"j", k.second}, {"space", id}, {"map", o.upsilon.assign}});
  }
  for (const auto& [k, m] : d.transitions) tr.push_back(json{{"i", k.first}, {"j", k.second}, {"map", m.assign}});
  for (const auto& [k, t] : d.triples) {
    const std::string id = "U" + std::to_string(k[0]) + "_" + std::to_string(k[1]) + "_" + std::to_string(k[2]);
    spaces[id] = space_to_json(t.space);
    tri.push_back(json{{"i", k[0]}, {"j", k[1]}, {"k", k[2]}, {"space", id}, {"to_j", t.to_j.assign}, {"to_k", t.to_k.assign}});
  }
  for (const auto& [k, m] : d.triple_transitions) tt.push_back(json{{"i", k[0]}, {"j", k[1]}, {"k", k[2]}, {"map", m.assign}});
  json out{{"kind", "top"}, {"variant", d.open_variant ? "otop" : "top"}, {"spaces", spaces}, {"charts", charts}};
  if (d.n > 1) {
    out["overlaps"] = ov;
    out["transitions"] = tr;
  }
  if (d.n > 2) {
    out["triples"] = tri;
    out["triple_transitions"] = tt;
  }
  return out;
}

json sheaf_data_to_json(const SheafGluingData& d) {
  json cover = json::array(), sheaves = json::array(), tr = json::array();
  for (size_t i = 0; i < d.cover.size(); ++i) {
    cover.push_back(members(d.cover[i]));
    sheaves.push_back(presheaf_to_json(d.sheaves[i]));
  }
  for (const auto& [k, m] : d.transitions) {
    json comps = json::object();
    for (PointSet v : m.src.opens()) comps[open_key(v)] = matrix_to_json(m.at(v).matrix());
    tr.push_back(json{{"i", k.first}, {"j", k.second}, {"components", comps}});
  }
  json out{{"kind", "sheaf"},   {"variant", d.sheaf_variant ? "sheaf" : "presheaf"}, {"spaces", {{"X", space_to_json(d.base)}}},
           {"base", "X"},       {"cover", cover},
           {"sheaves", sheaves}};
  if (d.n() > 1) out["transitions"] = tr;
  return out;
}

json ringed_data_to_json(const RingedGluingData& d) {
  json spaces = json::object(), charts = json::array(), ov = json::array(), tr = json::array(), rt = json::array();
  for (int i = 0; i < d.n(); ++i) {
    const std::string id = "C" + std::to_string(i);
    spaces[id] = space_to_json(d.charts[i].top);
    json rings = json::object(), res = json::object();
    const RingPresheaf& f = d.charts[i].sheaf;
    for (PointSet u : f.opens()) {
      rings[open_key(u)] = ring_to_json(f.ring(u));
      for (PointSet v : f.opens())
        if (v != u && subset_of(v, u)) res[open_key(u) + ">" + open_key(v)] = f.restriction(u, v);
    }
    charts.push_back(json{{"space", id}, {"sheaf", {{"rings", rings}, {"restrictions", res}}}});
  }
  for (const auto& [k, s] : d.overlaps) ov.push_back(json{{"i", k.first}, {"j", k.second}, {"points", members(s)}});
  for (const auto& [k, m] : d.transitions) tr.push_back(json{{"i", k.first}, {"j", k.second}, {"map", m}});
  for (const auto& [k, comps] : d.ring_transitions) {
    json c = json::object();
    for (const auto& [w, m] : comps) c[open_key(w)] = m;
    rt.push_back(json{{"i", k.first}, {"j", k.second}, {"components", c}});
  }
  json out{{"kind", "ringed"}, {"variant", variant_name(d.variant)}, {"spaces", spaces}, {"charts", charts}};
  if (d.n() > 1) {
    out["overlaps"] = ov;
    out["transitions"] = tr;
    out["ring_transitions"] = rt;
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace glue::io
