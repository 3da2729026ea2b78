#include "glue/presheaf.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace glue {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "; " : "") + v[i];
  return out;
}

}  // namespace

PresheafError::PresheafError(std::vector<std::string> problems)
    : InvalidInput("invalid presheaf: " + join(problems)), problems_(std::move(problems)) {}

int Presheaf::index(PointSet u) const {
  auto it = std::lower_bound(opens_.begin(), opens_.end(), u, open_less);
  if (it == opens_.end() || *it != u) throw InvalidInput("presheaf has no open " + set_str(u));
  return static_cast<int>(it - opens_.begin());
}

bool Presheaf::has_open(PointSet u) const { return std::binary_search(opens_.begin(), opens_.end(), u, open_less); }

const AbHom& Presheaf::restriction(PointSet u, PointSet v) const {
  if (!subset_of(v, u)) throw InvalidInput("restriction " + set_str(u) + " > " + set_str(v) + " is not an inclusion");
  return res_[static_cast<size_t>(index(u)) * opens_.size() + index(v)];
}

bool Presheaf::operator==(const Presheaf& o) const {
  if (!(ambient_ == o.ambient_) || carrier_ != o.carrier_ || opens_ != o.opens_) return false;
  for (size_t a = 0; a < groups_.size(); ++a)
    if (!(groups_[a] == o.groups_[a])) return false;
  for (size_t a = 0; a < opens_.size(); ++a)
    for (size_t b = 0; b < opens_.size(); ++b)
      if (subset_of(opens_[b], opens_[a]) &&
          !(res_[a * opens_.size() + b].matrix() == o.res_[a * opens_.size() + b].matrix()))
        return false;
  return true;
}

Presheaf make_presheaf(const FinSpace& ambient, PointSet carrier, const std::map<PointSet, FgAbGroup>& sections,
                       const std::map<std::pair<PointSet, PointSet>, AbHom>& restrictions, bool complete) {
  if (!ambient.is_open(carrier)) throw PresheafError({"carrier " + set_str(carrier) + " is not open"});
  Presheaf f;
  f.ambient_ = ambient;
  f.carrier_ = carrier;
  f.opens_ = ambient.opens_within(carrier);
  const size_t k = f.opens_.size();
  std::vector<std::string> problems;
  for (PointSet u : f.opens_) {
    auto it = sections.find(u);
    if (it == sections.end()) {
      problems.push_back("missing sections over " + set_str(u));
      f.groups_.emplace_back();
    } else {
      f.groups_.push_back(it->second);
    }
  }
  for (const auto& [key, h] : sections)
    if (!f.has_open(key)) problems.push_back("sections given over " + set_str(key) + ", which is not an open of the carrier");
  if (!problems.empty()) throw PresheafError(problems);

  f.res_.assign(k * k, AbHom());
  std::vector<std::vector<char>> have(k, std::vector<char>(k, 0));
  for (const auto& [key, h] : restrictions) {
    auto [u, v] = key;
    std::string name = set_str(u) + ">" + set_str(v);
    if (!f.has_open(u) || !f.has_open(v) || !subset_of(v, u)) {
      problems.push_back("restriction " + name + " is not between nested opens");
      continue;
    }
    int a = f.index(u), b = f.index(v);
    if (!(h.dom() == f.groups_[a]) || !(h.cod() == f.groups_[b])) {
      problems.push_back("restriction " + name + " has wrong endpoints");
      continue;
    }
    if (!h.is_well_defined()) {
      problems.push_back("restriction " + name + " is not well defined");
      continue;
    }
    f.res_[a * k + b] = h;
    have[a][b] = 1;
  }
  if (!problems.empty()) throw PresheafError(problems);

  if (complete) {
    for (size_t a = 0; a < k; ++a) {
      if (!have[a][a]) {
        f.res_[a * k + a] = AbHom::identity(f.groups_[a]);
        have[a][a] = 1;
      }
      // Breadth-first composition along supplied restrictions.
      std::vector<char> seen(k, 0);
      std::deque<size_t> q{a};
      seen[a] = 1;
      std::vector<AbHom> acc(k);
      acc[a] = AbHom::identity(f.groups_[a]);
      while (!q.empty()) {
        size_t b = q.front();
        q.pop_front();
        for (const auto& [key, h] : restrictions) {
          if (key.first != f.opens_[b] || key.first == key.second) continue;
          size_t c = static_cast<size_t>(f.index(key.second));
          if (seen[c]) continue;
          seen[c] = 1;
          acc[c] = compose(h, acc[b]);
          q.push_back(c);
        }
      }
      for (size_t c = 0; c < k; ++c)
        if (!have[a][c] && seen[c]) {
          f.res_[a * k + c] = acc[c];
          have[a][c] = 1;
        } else if (!have[a][c] && f.groups_[c].is_trivial() && subset_of(f.opens_[c], f.opens_[a])) {
          // the only map into a trivial group
          f.res_[a * k + c] = AbHom::zero(f.groups_[a], f.groups_[c]);
          have[a][c] = 1;
        }
    }
  }
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b)
      if (subset_of(f.opens_[b], f.opens_[a]) && !have[a][b])
        problems.push_back("missing restriction " + set_str(f.opens_[a]) + ">" + set_str(f.opens_[b]));
  if (!problems.empty()) throw PresheafError(problems);

  for (size_t a = 0; a < k; ++a)
    if (!f.res_[a * k + a].equals(AbHom::identity(f.groups_[a])))
      problems.push_back("restriction " + set_str(f.opens_[a]) + ">" + set_str(f.opens_[a]) + " is not the identity");
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b) {
      if (a == b || !subset_of(f.opens_[b], f.opens_[a])) continue;
      for (size_t c = 0; c < k; ++c) {
        if (c == b || !subset_of(f.opens_[c], f.opens_[b])) continue;
        if (!compose(f.res_[b * k + c], f.res_[a * k + b]).equals(f.res_[a * k + c]))
          problems.push_back("functoriality fails on chain " + set_str(f.opens_[a]) + " > " + set_str(f.opens_[b]) +
                             " > " + set_str(f.opens_[c]));
      }
    }
  if (!problems.empty()) throw PresheafError(problems);
  return f;
}

Presheaf constant_sheaf(const FinSpace& ambient, PointSet carrier, const FgAbGroup& g) {
  std::map<PointSet, FgAbGroup> sections;
  std::map<PointSet, std::vector<PointSet>> comps;
  const int m = g.ambient();
  for (PointSet v : ambient.opens_within(carrier)) {
    comps[v] = connected_components(ambient, v);
    std::vector<FgAbGroup> copies(comps[v].size(), g);
    sections[v] = product(copies).group;
  }
  std::map<std::pair<PointSet, PointSet>, AbHom> res;
  for (const auto& [v, cv] : comps)
    for (const auto& [w, cw] : comps) {
      if (!subset_of(w, v)) continue;
      Matrix mat(m * static_cast<int>(cw.size()), m * static_cast<int>(cv.size()));
      for (size_t b = 0; b < cw.size(); ++b) {
        size_t a = 0;
        while (!subset_of(cw[b], cv[a])) ++a;
        for (int t = 0; t < m; ++t) mat(static_cast<int>(b) * m + t, static_cast<int>(a) * m + t) = 1;
      }
      res.emplace(std::make_pair(v, w), AbHom::unchecked(sections.at(v), sections.at(w), mat));
    }
  return make_presheaf(ambient, carrier, sections, res);
}

Presheaf restrict_presheaf(const Presheaf& f, PointSet u) {
  if (!f.ambient_.is_open(u) || !subset_of(u, f.carrier_))
    throw InvalidInput("restriction target " + set_str(u) + " is not an open inside the carrier");
  Presheaf r;
  r.ambient_ = f.ambient_;
  r.carrier_ = u;
  r.opens_ = f.ambient_.opens_within(u);
  const size_t k = r.opens_.size(), K = f.opens_.size();
  std::vector<size_t> idx;
  for (PointSet v : r.opens_) {
    idx.push_back(static_cast<size_t>(f.index(v)));
    r.groups_.push_back(f.groups_[idx.back()]);
  }
  r.res_.assign(k * k, AbHom());
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b)
      if (subset_of(r.opens_[b], r.opens_[a])) r.res_[a * k + b] = f.res_[idx[a] * K + idx[b]];
  return r;
}

Presheaf pushforward_embedding(const Presheaf& f, const ContinuousMap& e) {
  if (!(f.ambient() == e.dom) || f.carrier() != e.dom.full())
    throw InvalidInput("pushforward: presheaf must live on the whole domain of the embedding");
  if (!is_injective(e) || !is_continuous(e) || !is_open_map(e))
    throw InvalidInput("pushforward: map is not an open embedding");
  const PointSet img = e.image(e.dom.full());
  std::map<PointSet, FgAbGroup> sections;
  std::map<std::pair<PointSet, PointSet>, AbHom> res;
  const auto opens = e.cod.opens_within(img);
  for (PointSet w : opens) sections[w] = f.sections(e.preimage(w));
  for (PointSet w : opens)
    for (PointSet v : opens)
      if (subset_of(v, w)) res.emplace(std::make_pair(w, v), f.restriction(e.preimage(w), e.preimage(v)));
  return make_presheaf(e.cod, img, sections, res);
}

// ---------------------------------------------------------------- sheaf condition

std::string SheafCertificate::str() const {
  if (!empty_trivial) return "sections over the empty set are nontrivial";
  if (sheaf) return "sheaf";
  std::ostringstream os;
  os << axiom << " axiom fails over " << set_str(open) << " for cover";
  for (PointSet c : cover) os << " " << set_str(c);
  return os.str();
}

std::vector<std::vector<PointSet>> checked_covers(const Presheaf& f, PointSet v, const SheafOptions& opt) {
  std::set<std::vector<PointSet>> out;
  if (v == 0) return {};
  if (opt.minimal_cover) {
    std::set<PointSet> mins;
    for (int x : members(v)) mins.insert(f.ambient().minimal_open(x) & v);
    std::vector<PointSet> c(mins.begin(), mins.end());
    std::sort(c.begin(), c.end(), open_less);
    out.insert(c);
  }
  std::vector<PointSet> cand;
  for (PointSet u : f.ambient().opens_within(v))
    if (u != 0 && u != v) cand.push_back(u);
  const size_t n = cand.size();
  auto irredundant = [&](const std::vector<PointSet>& c) {
    for (size_t i = 0; i < c.size(); ++i) {
      PointSet rest = 0;
      for (size_t j = 0; j < c.size(); ++j)
        if (j != i) rest |= c[j];
      if (subset_of(c[i], rest)) return false;
    }
    return true;
  };
  for (size_t a = 0; a < n && opt.max_cover_size >= 2; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      if ((cand[a] | cand[b]) == v && irredundant({cand[a], cand[b]})) out.insert({cand[a], cand[b]});
      if (opt.max_cover_size < 3) continue;
      for (size_t c = b + 1; c < n; ++c)
        if ((cand[a] | cand[b] | cand[c]) == v && irredundant({cand[a], cand[b], cand[c]}))
          out.insert({cand[a], cand[b], cand[c]});
    }
  return {out.begin(), out.end()};
}

SheafCertificate check_cover(const Presheaf& f, PointSet v, const std::vector<PointSet>& cover) {
  SheafCertificate cert;
  std::vector<FgAbGroup> parts;
  std::vector<AbHom> legs;
  for (PointSet c : cover) {
    parts.push_back(f.sections(c));
    legs.push_back(f.restriction(v, c));
  }
  ProductResult p = product(parts);
  AbHom r = pairing_into_product(p, f.sections(v), legs);
  AbHom incl = AbHom::identity(p.group);
  std::vector<FgAbGroup> overlaps;
  std::vector<AbHom> left, right;
  for (size_t a = 0; a < cover.size(); ++a)
    for (size_t b = a + 1; b < cover.size(); ++b) {
      PointSet w = cover[a] & cover[b];
      overlaps.push_back(f.sections(w));
      left.push_back(compose(f.restriction(cover[a], w), p.projections[a]));
      right.push_back(compose(f.restriction(cover[b], w), p.projections[b]));
    }
  if (!overlaps.empty()) {
    ProductResult q = product(overlaps);
    incl = equalizer(pairing_into_product(q, p.group, left), pairing_into_product(q, p.group, right)).inclusion;
  }
  auto into_eq = factor_through(incl, r);
  if (!into_eq) throw Falsification("restrictions of a section are not compatible over " + set_str(v));
  cert.open = v;
  cert.cover = cover;
  if (!is_injective(*into_eq)) {
    cert.sheaf = false;
    cert.axiom = "identity";
  } else if (!is_surjective(*into_eq)) {
    cert.sheaf = false;
    cert.axiom = "gluing";
  }
  return cert;
}

SheafCertificate is_sheaf(const Presheaf& f, const SheafOptions& opt) {
  SheafCertificate cert;
  if (!f.sections(0).is_trivial()) {
    cert.sheaf = false;
    cert.empty_trivial = false;
    return cert;
  }
  for (PointSet v : f.opens())
    for (const auto& cover : checked_covers(f, v, opt)) {
      SheafCertificate c = check_cover(f, v, cover);
      if (!c.sheaf) return c;
    }
  return cert;
}

// ---------------------------------------------------------------- enriched morphisms

EnrichedCheck check_enriched_morphism(const EnrichedMorphism& m) {
  EnrichedCheck out;
  const PointSet V = m.dst.carrier();
  if (!(m.src.ambient() == m.dst.ambient())) out.problems.push_back("ambient spaces differ");
  if (!subset_of(V, m.src.carrier())) out.problems.push_back("open part is not an inclusion");
  if (m.alpha.size() != m.src.opens().size()) out.problems.push_back("alpha is not total over the source opens");
  if (!out.problems.empty()) {
    out.ok = false;
    return out;
  }
  for (PointSet w : m.src.opens()) {
    const AbHom& a = m.at(w);
    if (!(a.dom() == m.src.sections(w)) || !(a.cod() == m.dst.sections(w & V)) || !a.is_well_defined())
      out.problems.push_back("component over " + set_str(w) + " has wrong endpoints");
  }
  if (!out.problems.empty()) {
    out.ok = false;
    return out;
  }
  for (PointSet w : m.src.opens())
    for (PointSet w2 : m.src.opens()) {
      if (w2 == w || !subset_of(w2, w)) continue;
      AbHom lhs = compose(m.dst.restriction(w & V, w2 & V), m.at(w));
      AbHom rhs = compose(m.at(w2), m.src.restriction(w, w2));
      if (!lhs.equals(rhs)) out.failing.emplace_back(w, w2);
    }
  out.ok = out.failing.empty();
  return out;
}

EnrichedMorphism compose_enriched(const EnrichedMorphism& m2, const EnrichedMorphism& m1) {
  if (!(m1.src.ambient() == m2.dst.ambient())) throw InvalidInput("compose_enriched: mismatched ambient space");
  if (!(m1.dst == m2.src)) throw InvalidInput("compose_enriched: codomain of the first is not the domain of the second");
  EnrichedMorphism out{m1.src, m2.dst, {}};
  const PointSet V = m1.dst.carrier();
  for (PointSet x : m1.src.opens()) out.alpha.push_back(compose(m2.at(x & V), m1.at(x)));
  return out;
}

EnrichedMorphism identity_enriched(const Presheaf& f) {
  EnrichedMorphism out{f, f, {}};
  for (PointSet w : f.opens()) out.alpha.push_back(AbHom::identity(f.sections(w)));
  return out;
}

EnrichedMorphism restriction_enriched(const Presheaf& f, PointSet v) {
  EnrichedMorphism out{f, restrict_presheaf(f, v), {}};
  for (PointSet w : f.opens()) out.alpha.push_back(f.restriction(w, w & v));
  return out;
}

bool equal_enriched(const EnrichedMorphism& a, const EnrichedMorphism& b) {
  if (!(a.src == b.src) || !(a.dst == b.dst) || a.alpha.size() != b.alpha.size()) return false;
  for (size_t i = 0; i < a.alpha.size(); ++i)
    if (!a.alpha[i].equals(b.alpha[i])) return false;
  return true;
}

EnrichedMorphism natural_transformation(const Presheaf& src, const Presheaf& dst, std::vector<AbHom> components) {
  if (!(src.ambient() == dst.ambient()) || src.carrier() != dst.carrier())
    throw InvalidInput("natural transformation between presheaves on different opens");
  if (components.size() != src.opens().size()) throw InvalidInput("natural transformation needs one component per open");
  return EnrichedMorphism{src, dst, std::move(components)};
}

bool is_nat_iso(const NatIso& n, std::vector<std::string>* problems) {
  std::vector<std::string> local;
  auto& p = problems ? *problems : local;
  const auto& f = n.forward;
  const auto& b = n.backward;
  if (f.src.carrier() != f.dst.carrier()) p.push_back("forward open part is not the identity");
  if (!(f.src == b.dst) || !(f.dst == b.src)) p.push_back("forward and backward endpoints do not match");
  if (!p.empty()) return false;
  EnrichedCheck cf = check_enriched_morphism(f), cb = check_enriched_morphism(b);
  if (!cf.ok) p.push_back("forward family is not natural");
  if (!cb.ok) p.push_back("backward family is not natural");
  if (!p.empty()) return false;
  for (PointSet w : f.src.opens()) {
    if (!compose(b.at(w), f.at(w)).equals(AbHom::identity(f.src.sections(w))) ||
        !compose(f.at(w), b.at(w)).equals(AbHom::identity(f.dst.sections(w))))
      p.push_back("components over " + set_str(w) + " are not mutually inverse");
  }
  return p.empty();
}

std::optional<NatIso> invert_natural(const EnrichedMorphism& m) {
  std::vector<AbHom> inv;
  for (const AbHom& a : m.alpha) {
    auto i = inverse(a);
    if (!i) return std::nullopt;
    inv.push_back(*i);
  }
  return NatIso{m, natural_transformation(m.dst, m.src, std::move(inv))};
}

}  // namespace glue
