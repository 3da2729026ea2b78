#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "glue/errors.hpp"

namespace glue {

enum class Shape { Single, Pair, Triple };

// Canonical object of GL(I): [i], [i,j] with i != j, or [i,{j,k}] with j < k and i outside {j,k}.
struct GlueObject {
  Shape shape = Shape::Single;
  int i = 0, j = -1, k = -1;

  static GlueObject single(int i);
  static GlueObject pair(int i, int j);
  static GlueObject triple(int i, int j, int k);

  unsigned support() const;
  std::string label() const;
  auto operator<=>(const GlueObject&) const = default;
};

// Collapses (i,i), (i,i,i), (i,i,j), (i,j,j) and orders the last two indices of a triple.
GlueObject canonicalize(const std::vector<int>& raw, int n);

enum class GenKind { Eta, Tau, Eta3, Tau3 };

// Generating arrows, named as follows:
//   eta(i,j)      : [i]     -> [i,j]
//   tau(i,j)      : [j,i]   -> [i,j]
//   eta3(i,j,k;n) : [i,n]   -> [i,{j,k}]      n in {j,k}
//   tau3(i,j;k)   : [j,{i,k}] -> [i,{j,k}]
struct Generator {
  GenKind kind = GenKind::Eta;
  int i = 0, j = 0, k = -1, n = -1;

  static Generator eta(int i, int j);
  static Generator tau(int i, int j);
  static Generator eta3(int i, int j, int k, int n);
  static Generator tau3(int i, int j, int k);

  GlueObject dom() const;
  GlueObject cod() const;
  std::string label() const;
  auto operator<=>(const Generator&) const = default;
};

struct Morphism {
  GlueObject dom, cod;
  auto operator<=>(const Morphism&) const = default;
};

class GluingIndexCategory {
 public:
  static constexpr int kDefaultMaxN = 6;
  static GluingIndexCategory enumerate(int n, int max_n = kDefaultMaxN);

  int n() const { return n_; }
  const std::vector<GlueObject>& objects() const { return objects_; }
  const std::vector<Generator>& generators() const { return generators_; }
  int index_of(const GlueObject& a) const;
  bool contains(const GlueObject& a) const;

  bool hom_exists(const GlueObject& a, const GlueObject& b) const;
  std::vector<Morphism> morphisms() const;
  size_t morphism_count() const;
  // Generators along a shortest path a -> b, first arrow first; empty for a == b.
  std::vector<Generator> path(const GlueObject& a, const GlueObject& b) const;
  std::vector<Generator> generators_from(const GlueObject& a) const;

  std::string dot() const;

 private:
  int n_ = 0;
  std::vector<GlueObject> objects_;
  std::vector<Generator> generators_;
  std::vector<std::vector<char>> hom_;
  std::vector<std::vector<int>> pred_;  // pred_[a][b] = generator index of last arrow on a path a -> b
};

struct RelationFailure {
  std::string relation;  // "b".."e" for the listed relations, "coherence" for path agreement
  std::vector<int> indices;
  std::string detail;
};
using RelationReport = std::vector<RelationFailure>;

// Target-category operations, composition in GL(I) order (g after f).
template <class Arrow>
struct TargetOps {
  std::function<Arrow(const Arrow& g, const Arrow& f)> compose;
  std::function<Arrow(const GlueObject&)> identity;
  std::function<bool(const Arrow&, const Arrow&)> equal;
};

template <class Arrow>
using GeneratorImages = std::function<const Arrow*(const Generator&)>;

// Image of the unique arrow a -> b, composed along a generator path.
template <class Arrow>
Arrow evaluate_arrow(const GluingIndexCategory& cat, const GeneratorImages<Arrow>& image, const TargetOps<Arrow>& ops,
                     const GlueObject& a, const GlueObject& b) {
  Arrow acc = ops.identity(a);
  for (const Generator& g : cat.path(a, b)) {
    const Arrow* img = image(g);
    if (!img) throw InvalidInput("missing image for generator " + g.label());
    acc = ops.compose(*img, acc);
  }
  return acc;
}

// Checks the relations forced by uniqueness of morphisms; the "coherence" pass
// compares every generator extension against a fixed path, so an empty report
// means the assignment extends to a functor.
template <class Arrow>
RelationReport check_generator_relations(const GluingIndexCategory& cat, const GeneratorImages<Arrow>& image,
                                         const TargetOps<Arrow>& ops) {
  for (const Generator& g : cat.generators())
    if (!image(g)) throw InvalidInput("missing image for generator " + g.label());
  RelationReport report;
  auto img = [&](const Generator& g) -> const Arrow& { return *image(g); };
  auto fail = [&](std::string rel, std::vector<int> idx, std::string detail) {
    report.push_back({std::move(rel), std::move(idx), std::move(detail)});
  };
  const int n = cat.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!ops.equal(ops.compose(img(Generator::tau(i, j)), img(Generator::tau(j, i))),
                     ops.identity(GlueObject::pair(i, j))))
        fail("b", {i, j}, "tau(i,j) o tau(j,i) != id");
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (!ops.equal(ops.compose(img(Generator::tau3(i, j, k)), img(Generator::tau3(j, k, i))),
                       img(Generator::tau3(i, k, j))))
          fail("c", {i, j, k}, "tau3(i,j;k) o tau3(j,k;i) != tau3(i,k;j)");
        if (!ops.equal(ops.compose(img(Generator::tau3(i, j, k)), img(Generator::tau3(j, i, k))),
                       ops.identity(GlueObject::triple(i, j, k))))
          fail("c", {i, j, k}, "tau3(i,j;k) o tau3(j,i;k) != id");
        if (j < k && !ops.equal(ops.compose(img(Generator::eta3(i, j, k, j)), img(Generator::eta(i, j))),
                                ops.compose(img(Generator::eta3(i, j, k, k)), img(Generator::eta(i, k)))))
          fail("d", {i, j, k}, "eta3(i;jk;j) o eta(i,j) != eta3(i;jk;k) o eta(i,k)");
        if (!ops.equal(ops.compose(img(Generator::tau3(i, j, k)), img(Generator::eta3(j, i, k, i))),
                       ops.compose(img(Generator::eta3(i, j, k, j)), img(Generator::tau(i, j)))))
          fail("e", {i, j, k}, "tau3(i,j;k) o eta3(j;ik;i) != eta3(i;jk;j) o tau(i,j)");
      }
    }
  const auto& objs = cat.objects();
  for (size_t a = 0; a < objs.size(); ++a) {
    std::map<GlueObject, Arrow> fixed;
    for (const GlueObject& b : objs)
      if (cat.hom_exists(objs[a], b)) fixed.emplace(b, evaluate_arrow(cat, image, ops, objs[a], b));
    for (const auto& [b, arrow] : fixed)
      for (const Generator& g : cat.generators_from(b)) {
        if (!ops.equal(ops.compose(img(g), arrow), fixed.at(g.cod())))
          fail("coherence", {cat.index_of(objs[a]), cat.index_of(g.cod())},
               "paths " + objs[a].label() + " -> " + g.cod().label() + " disagree via " + g.label());
      }
  }
  return report;
}

}  // namespace glue
