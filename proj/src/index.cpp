#include "glue/index.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace glue {

GlueObject GlueObject::single(int i) { return GlueObject{Shape::Single, i, -1, -1}; }

GlueObject GlueObject::pair(int i, int j) {
  if (i == j) throw InvalidInput("pair object needs distinct indices");
  return GlueObject{Shape::Pair, i, j, -1};
}

GlueObject GlueObject::triple(int i, int j, int k) {
  if (j == k || i == j || i == k) throw InvalidInput("triple object needs distinct indices");
  return GlueObject{Shape::Triple, i, std::min(j, k), std::max(j, k)};
}

unsigned GlueObject::support() const {
  unsigned s = 1u << i;
  if (j >= 0) s |= 1u << j;
  if (k >= 0) s |= 1u << k;
  return s;
}

std::string GlueObject::label() const {
  std::ostringstream os;
  os << "[" << i;
  if (j >= 0) os << "," << j;
  if (k >= 0) os << "," << k;
  os << "]";
  return os.str();
}

GlueObject canonicalize(const std::vector<int>& raw, int n) {
  if (raw.empty() || raw.size() > 3) throw InvalidInput("index tuple must have 1 to 3 entries");
  for (int x : raw)
    if (x < 0 || x >= n) throw InvalidInput("index " + std::to_string(x) + " out of range");
  if (raw.size() == 1) return GlueObject::single(raw[0]);
  if (raw.size() == 2) return raw[0] == raw[1] ? GlueObject::single(raw[0]) : GlueObject::pair(raw[0], raw[1]);
  int i = raw[0], j = raw[1], k = raw[2];
  if (j == k) return canonicalize({i, j}, n);
  if (i == j) return canonicalize({i, k}, n);
  if (i == k) return canonicalize({i, j}, n);
  return GlueObject::triple(i, j, k);
}

// ---------------------------------------------------------------- generators

Generator Generator::eta(int i, int j) {
  if (i == j) throw InvalidInput("eta(i,i) is an identity, not a generator");
  return Generator{GenKind::Eta, i, j, -1, -1};
}

Generator Generator::tau(int i, int j) {
  if (i == j) throw InvalidInput("tau(i,i) is an identity, not a generator");
  return Generator{GenKind::Tau, i, j, -1, -1};
}

Generator Generator::eta3(int i, int j, int k, int n) {
  if (i == j || i == k || j == k || (n != j && n != k)) throw InvalidInput("eta3 needs distinct i,j,k and n in {j,k}");
  return Generator{GenKind::Eta3, i, std::min(j, k), std::max(j, k), n};
}

Generator Generator::tau3(int i, int j, int k) {
  if (i == j || i == k || j == k) throw InvalidInput("tau3 needs distinct indices");
  return Generator{GenKind::Tau3, i, j, k, -1};
}

GlueObject Generator::dom() const {
  switch (kind) {
    case GenKind::Eta: return GlueObject::single(i);
    case GenKind::Tau: return GlueObject::pair(j, i);
    case GenKind::Eta3: return GlueObject::pair(i, n);
    case GenKind::Tau3: return GlueObject::triple(j, i, k);
  }
  return {};
}

GlueObject Generator::cod() const {
  switch (kind) {
    case GenKind::Eta: return GlueObject::pair(i, j);
    case GenKind::Tau: return GlueObject::pair(i, j);
    case GenKind::Eta3: return GlueObject::triple(i, j, k);
    case GenKind::Tau3: return GlueObject::triple(i, j, k);
  }
  return {};
}

std::string Generator::label() const {
  std::ostringstream os;
  switch (kind) {
    case GenKind::Eta: os << "eta(" << i << "," << j << ")"; break;
    case GenKind::Tau: os << "tau(" << i << "," << j << ")"; break;
    case GenKind::Eta3: os << "eta3(" << i << ";" << j << "," << k << ";" << n << ")"; break;
    case GenKind::Tau3: os << "tau3(" << i << "," << j << ";" << k << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------- category

GluingIndexCategory GluingIndexCategory::enumerate(int n, int max_n) {
  if (n <= 0) throw InvalidInput("index set must be nonempty");
  if (n > max_n) throw InvalidInput("index set size " + std::to_string(n) + " exceeds bound " + std::to_string(max_n));
  GluingIndexCategory c;
  c.n_ = n;
  for (int i = 0; i < n; ++i) c.objects_.push_back(GlueObject::single(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) c.objects_.push_back(GlueObject::pair(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (i != j && i != k) c.objects_.push_back(GlueObject::triple(i, j, k));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) c.generators_.push_back(Generator::eta(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) c.generators_.push_back(Generator::tau(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (i != j && i != k) {
          c.generators_.push_back(Generator::eta3(i, j, k, j));
          c.generators_.push_back(Generator::eta3(i, j, k, k));
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i != j && i != k && j != k) c.generators_.push_back(Generator::tau3(i, j, k));

  const size_t m = c.objects_.size();
  c.hom_.assign(m, std::vector<char>(m, 0));
  c.pred_.assign(m, std::vector<int>(m, -1));
  std::vector<std::vector<int>> out(m);
  for (size_t g = 0; g < c.generators_.size(); ++g)
    out[c.index_of(c.generators_[g].dom())].push_back(static_cast<int>(g));
  for (size_t a = 0; a < m; ++a) {
    std::deque<int> q{static_cast<int>(a)};
    c.hom_[a][a] = 1;
    while (!q.empty()) {
      int b = q.front();
      q.pop_front();
      for (int g : out[b]) {
        int t = c.index_of(c.generators_[g].cod());
        if (c.hom_[a][t]) continue;
        c.hom_[a][t] = 1;
        c.pred_[a][t] = g;
        q.push_back(t);
      }
    }
  }
  return c;
}

int GluingIndexCategory::index_of(const GlueObject& a) const {
  auto it = std::find(objects_.begin(), objects_.end(), a);
  if (it == objects_.end()) throw InvalidInput("object " + a.label() + " not in category");
  return static_cast<int>(it - objects_.begin());
}

bool GluingIndexCategory::contains(const GlueObject& a) const {
  return std::find(objects_.begin(), objects_.end(), a) != objects_.end();
}

bool GluingIndexCategory::hom_exists(const GlueObject& a, const GlueObject& b) const {
  return hom_[index_of(a)][index_of(b)] != 0;
}

std::vector<Morphism> GluingIndexCategory::morphisms() const {
  std::vector<Morphism> out;
  for (size_t a = 0; a < objects_.size(); ++a)
    for (size_t b = 0; b < objects_.size(); ++b)
      if (hom_[a][b]) out.push_back({objects_[a], objects_[b]});
  return out;
}

size_t GluingIndexCategory::morphism_count() const {
  size_t c = 0;
  for (const auto& row : hom_) c += static_cast<size_t>(std::count(row.begin(), row.end(), 1));
  return c;
}

std::vector<Generator> GluingIndexCategory::path(const GlueObject& a, const GlueObject& b) const {
  int ia = index_of(a), ib = index_of(b);
  if (!hom_[ia][ib]) throw InvalidInput("no morphism " + a.label() + " -> " + b.label());
  std::vector<Generator> out;
  for (int t = ib; t != ia;) {
    const Generator& g = generators_[pred_[ia][t]];
    out.push_back(g);
    t = index_of(g.dom());
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Generator> GluingIndexCategory::generators_from(const GlueObject& a) const {
  std::vector<Generator> out;
  for (const auto& g : generators_)
    if (g.dom() == a) out.push_back(g);
  return out;
}

std::string GluingIndexCategory::dot() const {
  std::ostringstream os;
  os << "digraph GL {\n";
  for (size_t a = 0; a < objects_.size(); ++a) os << "  o" << a << " [label=\"" << objects_[a].label() << "\"];\n";
  for (const auto& g : generators_) {
    std::string l;
    switch (g.kind) {
      case GenKind::Eta: l = "η"; break;
      case GenKind::Tau: l = "τ"; break;
      case GenKind::Eta3: l = "η(" + std::to_string(g.n) + ")"; break;
      case GenKind::Tau3: l = "τ(" + std::to_string(g.k) + ")"; break;
    }
    os << "  o" << index_of(g.dom()) << " -> o" << index_of(g.cod()) << " [label=\"" << l << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace glue
