// One PASS/FAIL line per acceptance criterion, each with its time budget.
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "glue/generate.hpp"
#include "glue/pipeline.hpp"

using namespace glue;
using boost::multiprecision::cpp_int;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget;  // seconds
  std::function<Outcome()> run;
};

std::string first(const std::vector<std::string>& v) { return v.empty() ? "" : v.front(); }

Outcome census() {
  Outcome o;
  auto c1 = GluingIndexCategory::enumerate(1), c2 = GluingIndexCategory::enumerate(2),
       c3 = GluingIndexCategory::enumerate(3);
  if (c1.objects().size() != 1 || c1.morphism_count() != 1) o.fail("n=1");
  if (c2.objects().size() != 4 || c2.morphism_count() != 10) o.fail("n=2");
  if (c3.objects().size() != 12) o.fail("n=3");
  // 10 morphisms, independently: reachability over generator edges.
  size_t reach = 0;
  const auto& obj = c2.objects();
  std::vector<std::vector<char>> r(obj.size(), std::vector<char>(obj.size(), 0));
  for (size_t a = 0; a < obj.size(); ++a) r[a][a] = 1;
  for (const auto& g : c2.generators()) r[c2.index_of(g.dom())][c2.index_of(g.cod())] = 1;
  for (size_t k = 0; k < obj.size(); ++k)
    for (size_t a = 0; a < obj.size(); ++a)
      for (size_t b = 0; b < obj.size(); ++b)
        if (r[a][k] && r[k][b]) r[a][b] = 1;
  for (auto& row : r) reach += std::accumulate(row.begin(), row.end(), size_t{0});
  if (reach != 10) o.fail("closure gives " + std::to_string(reach));
  return o;
}

Outcome hom_formula() {
  Outcome o;
  for (int n = 1; n <= 4; ++n) {
    auto cat = GluingIndexCategory::enumerate(n);
    const auto& obj = cat.objects();
    const size_t m = obj.size();
    std::vector<std::vector<char>> r(m, std::vector<char>(m, 0));
    for (size_t a = 0; a < m; ++a) r[a][a] = 1;
    for (const auto& g : cat.generators()) r[cat.index_of(g.dom())][cat.index_of(g.cod())] = 1;
    for (size_t k = 0; k < m; ++k)
      for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b)
          if (r[a][k] && r[k][b]) r[a][b] = 1;
    for (size_t a = 0; a < m; ++a)
      for (size_t b = 0; b < m; ++b) {
        const bool sub = (obj[a].support() & ~obj[b].support()) == 0;
        if (sub != static_cast<bool>(r[a][b]) || sub != cat.hom_exists(obj[a], obj[b]))
          o.fail(obj[a].label() + " -> " + obj[b].label());
      }
  }
  return o;
}

Outcome two_origins() {
  Outcome o;
  io::GluingDocument d = io::parse_document(std::string(GLUE_FIXTURES) + "/two_origins.json");
  TopGluingFunctor g = functor_from_data(d.top);
  GluedSpace q = standard_representative(g);
  if (q.q.size() != 3) o.fail("points " + std::to_string(q.q.size()));
  if (q.q.opens().size() != 5) o.fail("opens " + std::to_string(q.q.opens().size()));
  GlueReport r = verify_glued(q.q, q.iota, g);
  for (const char* k : {"legs", "a", "b", "c", "d", "e", "final_topology", "overlap_law"})
    if (!r.report.get(k)) o.fail(k);
  return o;
}

Outcome round_trips() {
  Outcome o;
  gen::Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5, t % 2 == 0);
    TopGluingFunctor g = functor_from_data(inst.data);
    if (!(data_from_functor(g) == inst.data)) o.fail("top data -> functor -> data");
    TopGluingFunctor g2 = functor_from_data(data_from_functor(g));
    if (!(g2.objects == g.objects) || !(g2.arrows == g.arrows)) o.fail("top functor -> data -> functor");
  }
  for (int t = 0; t < 200; ++t) {
    auto inst = gen::random_sheaf_data(rng, 3, 4, 4);
    SheafGluingFunctor g = sheaf_functor_from_data(inst.data);
    if (!(data_from_sheaf_functor(g) == inst.data)) o.fail("sheaf data -> functor -> data");
  }
  return o;
}

Outcome universal() {
  Outcome o;
  gen::Rng rng(102);
  for (int t = 0; t < 100; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5);
    TopGluingFunctor g = functor_from_data(inst.data);
    GluedSpace q = standard_representative(g);
    for (int c = 0; c < 100; ++c) {
      gen::TopCone cone = gen::random_cone(rng, g, q, 5);
      ContinuousMap mu = mediating_morphism(cone.apex, cone.legs, q, g);
      for (const auto& [a, leg] : cone.legs)
        if (!(compose(mu, q.iota.at(a)) == leg)) o.fail("mediating morphism does not commute");
      UniquenessCheck u = check_mediating_unique(cone.apex, cone.legs, q, mu, t * 1000 + c);
      if (!u.exhaustive || u.solutions != 1) o.fail("uniqueness: " + std::to_string(u.solutions) + " solutions");
    }
  }
  return o;
}

Outcome cone_lemma() {
  Outcome o;
  gen::Rng rng(103);
  int corrupted = 0;
  for (int t = 0; t < 1000; ++t) {
    auto inst = gen::random_top_data(rng, 3, 5);
    TopGluingFunctor g = functor_from_data(inst.data);
    GluedSpace q = standard_representative(g);
    gen::TopCone cone = gen::random_cone(rng, g, q, 4);
    Legs legs = t % 2 ? gen::corrupt_legs(rng, cone) : cone.legs;
    ConeCheck c = is_cone(cone.apex, legs, g);
    if (!c.agree()) o.fail("characterizations disagree on family " + std::to_string(t));
    corrupted += !c.full;
  }
  if (corrupted == 0) o.fail("no corrupted family was rejected");
  return o;
}

Outcome sheaf_limit() {
  Outcome o;
  gen::Rng rng(104);
  int corruptions = 0;
  for (int t = 0; t < 200; ++t) {
    auto inst = gen::random_sheaf_data(rng, 3, 4, 4);
    const SheafGluingData& d = inst.data;
    LimitSheaf l = build_limit_sheaf(d);
    if (!is_sheaf(l.sheaf).sheaf) o.fail("limit is not a sheaf");
    for (const auto& p : l.pi)
      if (!check_enriched_morphism(p).ok) o.fail("projection not natural");
    if (!verify_sheaf_glued(l.sheaf, l.pi, d, l).verdict) o.fail("(L, pi) rejected");
    NatIso theta = gen::twist_presheaf(rng, l.sheaf);
    std::vector<EnrichedMorphism> p;
    for (const auto& pi : l.pi) p.push_back(compose_enriched(pi, theta.forward));
    if (!verify_sheaf_glued(theta.forward.src, p, d, l).verdict) o.fail("twisted copy rejected");
    if (auto bad = gen::corrupt_projections(rng, l.pi)) {
      ++corruptions;
      if (verify_sheaf_glued(l.sheaf, *bad, d, l).verdict) o.fail("corrupted projections accepted");
    }
  }
  if (corruptions == 0) o.fail("no corruption generated");
  return o;
}

cpp_int big_det(std::vector<std::vector<cpp_int>> a) {
  const size_t n = a.size();
  cpp_int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return n == 0 ? cpp_int(1) : sign * a[n - 1][n - 1];
}

using BigMatrix = std::vector<std::vector<cpp_int>>;

BigMatrix big(const Matrix& m) {
  BigMatrix a(m.rows(), std::vector<cpp_int>(m.cols()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
  return a;
}

BigMatrix mul(const BigMatrix& a, const BigMatrix& b, size_t inner, size_t cols) {
  BigMatrix c(a.size(), std::vector<cpp_int>(cols));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < inner; ++k)
      for (size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

cpp_int big_det(const Matrix& m) { return big_det(big(m)); }

Outcome snf_suite() {
  Outcome o;
  gen::Rng rng(105);
  for (int t = 0; t < 500; ++t) {
    Matrix a(gen::uniform(rng, 1, 6), gen::uniform(rng, 1, 6));
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c) a(r, c) = gen::uniform(rng, -9, 9);
    SmithForm f = snf(a);
    const size_t rows = a.rows(), cols = a.cols();
    if (mul(mul(big(f.U), big(a), rows, cols), big(f.V), cols, cols) != big(f.S)) o.fail("U A V != S");
    if (abs(big_det(f.U)) != 1 || abs(big_det(f.V)) != 1) o.fail("U or V not unimodular");
    for (int r = 0; r < f.S.rows(); ++r)
      for (int c = 0; c < f.S.cols(); ++c)
        if (r != c && f.S(r, c) != 0) o.fail("S not diagonal");
    Vec d = f.diag();
    for (size_t i = 0; i + 1 < d.size(); ++i) {
      if (d[i] < 0) o.fail("negative invariant");
      if (d[i] == 0 ? d[i + 1] != 0 : d[i + 1] % d[i] != 0) o.fail("divisibility chain broken");
    }
  }
  if (snf(Matrix::diagonal({2, 3})).diag() != Vec{1, 6}) o.fail("diag(2,3)");
  return o;
}

Outcome stalk_lemma() {
  Outcome o;
  if (!is_local_ring(FinCommRing::zmod(4))) o.fail("Z/4 not local");
  if (is_local_ring(FinCommRing::zmod(6))) o.fail("Z/6 local");
  gen::Rng rng(106);
  for (int t = 0; t < 100; ++t) {
    const bool local = t % 2 == 0;
    auto inst = gen::random_ringed_data(rng, 3, 4, local);
    GluedRinged g = glue_ringed(inst.data);
    if (!g.stalk_lemma.iso) o.fail("stalk map not an isomorphism: " + first(g.stalk_lemma.problems));
    if (!g.stalk_lemma.square) o.fail("stalk square does not commute: " + first(g.stalk_lemma.problems));
    if (local && !(g.stalk_lemma.local && is_locally_ringed(g.space))) o.fail("LRTS closure");
  }
  return o;
}

Outcome no_falsification() {
  Outcome o;
  std::vector<io::json> corpus;
  gen::Rng rng(107);
  for (int t = 0; t < 100; ++t) corpus.push_back(io::top_data_to_json(gen::random_top_data(rng, 3, 5, t % 2 == 0).data));
  for (int t = 0; t < 60; ++t) corpus.push_back(io::sheaf_data_to_json(gen::random_sheaf_data(rng, 3, 4, 4).data));
  for (int t = 0; t < 60; ++t) corpus.push_back(io::ringed_data_to_json(gen::random_ringed_data(rng, 3, 4, t % 2 == 0).data));
  for (const auto& e : std::filesystem::directory_iterator(GLUE_FIXTURES))
    if (e.path().extension() == ".json") corpus.push_back(io::json::parse(std::ifstream(e.path())));
  int failed = 0;
  for (const auto& j : corpus) {
    try {
      if (!run_pipeline(io::parse_document_json(j), PipelineOptions{}).verdict) ++failed;
    } catch (const Falsification& e) {
      o.fail(std::string("exit 3: ") + e.what());
    }
  }
  if (failed) o.fail(std::to_string(failed) + " valid documents got a false verdict");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "index census", 1, census},
      {2, "hom existence formula, n <= 4", 5, hom_formula},
      {3, "two origins", 1, two_origins},
      {4, "data/functor round trips", 30, round_trips},
      {5, "universal property, 100 x 100 cones", 120, universal},
      {6, "cone characterizations, 1000 families", 30, cone_lemma},
      {7, "sheaf limit, twisted and corrupted projections", 120, sheaf_limit},
      {8, "Smith normal form, 500 matrices", 10, snf_suite},
      {9, "stalk lemma and locality", 60, stalk_lemma},
      {10, "no falsification on the generated corpus", 300, no_falsification},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && s > c.budget) o.fail("over budget");
    std::ostringstream line;
    line << std::fixed << std::setprecision(3) << (o.ok ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << s << "s, limit " << c.budget << "s)";
    if (!o.ok) line << ": " << o.detail;
    std::puts(line.str().c_str());
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
