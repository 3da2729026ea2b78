#include "glue/pipeline.hpp"

#include <chrono>
#include <cstdlib>

#include "glue/generate.hpp"

namespace glue {

using io::json;

namespace {

json conditions_json(const ConditionReport& r) {
  json c = json::object();
  for (const auto& [k, v] : r.conditions) c[k] = v;
  return c;
}

json legs_json(const Legs& legs) {
  json out = json::object();
  for (const auto& [a, m] : legs) out[a.label()] = m.assign;
  return out;
}

void run_top(const io::GluingDocument& doc, const PipelineOptions& opt, PipelineResult& out, ConditionReport& r) {
  TopGluingFunctor g = functor_from_data(doc.top);
  GluedSpace q = standard_representative(g);
  GlueReport gr = verify_glued(q.q, q.iota, g);
  r = gr.report;

  gen::Rng rng(opt.seed);
  bool cones = true, agree = true, universal = true;
  for (int t = 0; t < opt.cones; ++t) {
    gen::TopCone c = gen::random_cone(rng, g, q, 4);
    ConeCheck cc = is_cone(c.apex, c.legs, g);
    cones = cones && cc.full;
    agree = agree && cc.agree();
    if (!cc.full) continue;
    ContinuousMap mu = mediating_morphism(c.apex, c.legs, q, g);
    universal = universal && check_mediating_unique(c.apex, c.legs, q, mu, opt.seed + t).unique;
  }
  r.set("cone", cones && agree, "a sampled cone was rejected or the cone characterizations disagree");
  r.set("universal_sampled", universal, "a sampled cone has more than one mediating morphism");

  out.glued = json{{"space", io::space_to_json(q.q)}, {"iota", legs_json(q.iota)}};
  out.dot = specialization_dot(q.q, "Q");
}

void run_sheaf(const io::GluingDocument& doc, const PipelineOptions& opt, PipelineResult& out, ConditionReport& r) {
  const SheafGluingData& d = doc.sheaf;
  sheaf_functor_from_data(d);  // validates
  LimitSheaf l = build_limit_sheaf(d);
  if (d.sheaf_variant) {
    SheafCertificate c = is_sheaf(l.sheaf);
    if (!c.sheaf) throw Falsification("limit of sheaves is not a sheaf: " + c.str());
    r.set("limit_sheaf", true);
  }
  SheafGlueReport sr = verify_sheaf_glued(l.sheaf, l.pi, d, l);
  for (const auto& [k, v] : sr.report.conditions) r.set(k, v);
  for (const auto& p : sr.report.problems) r.problems.push_back(p);

  // An isomorphic copy of L with the composite projections must pass as well.
  gen::Rng rng(opt.seed);
  NatIso theta = gen::twist_presheaf(rng, l.sheaf);
  std::vector<EnrichedMorphism> p;
  for (const auto& pi : l.pi) p.push_back(compose_enriched(pi, theta.forward));
  r.set("twisted", verify_sheaf_glued(theta.forward.src, p, d, l).verdict, "an isomorphic copy of the limit was rejected");

  json sections = json::object();
  for (PointSet v : l.sheaf.opens()) sections[io::open_key(v)] = l.sheaf.sections(v).describe();
  out.glued = json{{"base", io::space_to_json(d.base)}, {"sections", sections}};
  out.dot = specialization_dot(d.base, "base");
}

void run_ringed(const io::GluingDocument& doc, PipelineOptions const&, PipelineResult& out, ConditionReport& r) {
  const RingedGluingData& d = doc.ringed;
  GluedRinged g = glue_ringed(d);
  RingedGlueReport rr = verify_ringed_glued(g.space, g.projections, d, g);
  r = rr.report;
  r.set("stalk_iso", g.stalk_lemma.iso);
  r.set("stalk_square", g.stalk_lemma.square);
  if (d.variant == RingedVariant::LRTS) {
    r.set("stalk_local", g.stalk_lemma.local);
    r.set("locally_ringed", is_locally_ringed(g.space));
  }
  for (const auto& p : g.stalk_lemma.problems) r.problems.push_back(p);

  json rings = json::object();
  for (PointSet v : g.space.sheaf.opens()) rings[io::open_key(v)] = g.space.sheaf.ring(v).order();
  out.glued = json{{"space", io::space_to_json(g.space.top)}, {"ring_orders", rings}};
  out.dot = specialization_dot(g.space.top, "Q");
}

}  // namespace

std::uint64_t seed_from_env() {
  const char* s = std::getenv("GLUE_SEED");
  if (!s || !*s) return kDefaultSeed;
  try {
    return std::stoull(s);
  } catch (const std::logic_error&) {
    throw InvalidInput("GLUE_SEED must be an unsigned integer");
  }
}

io::GluingDocument apply_variant(const json& doc, const std::optional<std::string>& variant) {
  if (variant == "sch") throw Unsupported("scheme verification unsupported");
  if (!variant) return io::parse_document_json(doc);
  json j = doc;
  if (j.is_object()) j["variant"] = *variant;
  return io::parse_document_json(j);
}

PipelineResult run_pipeline(const io::GluingDocument& doc, const PipelineOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineResult out;
  ConditionReport r;
  if (doc.kind == "top") run_top(doc, opt, out, r);
  else if (doc.kind == "sheaf") run_sheaf(doc, opt, out, r);
  else if (doc.kind == "ringed") run_ringed(doc, opt, out, r);
  else throw InvalidInput("unknown kind " + doc.kind);
  out.verdict = r.all();
  out.report = json{{"kind", doc.kind},
                    {"variant", doc.variant},
                    {"seed", opt.seed},
                    {"conditions", conditions_json(r)},
                    {"problems", r.problems},
                    {"verdict", out.verdict}};
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

json error_payload(const std::exception& e) {
  json err{{"message", e.what()}};
  if (auto* g = dynamic_cast<const GluingDataError*>(&e)) {
    err["type"] = "invalid_gluing_data";
    err["conditions"] = conditions_json(g->report());
    err["problems"] = g->report().problems;
  } else if (dynamic_cast<const Unsupported*>(&e)) {
    err["type"] = "unsupported";
  } else if (dynamic_cast<const InvalidInput*>(&e)) {
    err["type"] = "invalid_input";
  } else if (dynamic_cast<const Overflow*>(&e)) {
    err["type"] = "overflow";
  } else if (dynamic_cast<const Falsification*>(&e)) {
    err["type"] = "falsification";
  } else {
    err["type"] = "internal";
  }
  return json{{"error", err}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const Falsification*>(&e)) return 3;
  return 2;
}

}  // namespace glue
