#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glue/pipeline.hpp"

namespace fs = std::filesystem;
using glue::io::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw glue::InvalidInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw glue::InvalidInput("/: not valid JSON (" + std::string(e.what()) + ")");
  }
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw glue::InvalidInput("cannot write " + p.string());
  out << text;
}

struct Outcome {
  int code = 0;
  json report;
  glue::PipelineResult result;
};

Outcome run_one(const std::string& path, const std::optional<std::string>& variant, std::uint64_t seed) {
  Outcome o;
  try {
    glue::io::GluingDocument doc = glue::apply_variant(read_json(path), variant);
    glue::PipelineOptions opt;
    opt.variant = variant;
    opt.seed = seed;
    o.result = glue::run_pipeline(doc, opt);
    o.report = o.result.report;
    o.code = o.result.verdict ? 0 : 1;
  } catch (const std::exception& e) {
    o.report = glue::error_payload(e);
    o.code = glue::exit_code_for(e);
    std::cerr << "glue: " << e.what() << "\n";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gluing constructions on finite spaces: build and verify"};
  app.require_subcommand(1);

  std::string path, format = "json", out_dir, dot_path;
  std::optional<std::string> variant;
  int n = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", path, "gluing-data document (or a directory of them for verify)")->required();
    sub->add_option("--variant", variant, "override the document variant (top, otop, sheaf, presheaf, rts, lrts)");
  };

  auto* verify = app.add_subcommand("verify", "construct and verify, print the report");
  add_common(verify);
  verify->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));

  auto* report = app.add_subcommand("report", "print the report in the given format");
  add_common(report);
  report->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));

  auto* build = app.add_subcommand("build", "construct, verify and write artifacts to a directory");
  add_common(build);
  build->add_option("--out", out_dir, "output directory")->required();

  auto* index = app.add_subcommand("index", "census of the gluing index category");
  index->add_option("--n", n, "number of indices")->required()->check(CLI::Range(1, glue::GluingIndexCategory::kDefaultMaxN));
  index->add_option("--dot", dot_path, "write the category as DOT");

  CLI11_PARSE(app, argc, argv);

  std::uint64_t seed = glue::kDefaultSeed;
  try {
    if (variant == "sch") throw glue::Unsupported("scheme verification unsupported");
    seed = glue::seed_from_env();
  } catch (const std::exception& e) {
    std::cout << glue::io::dump(glue::error_payload(e));
    std::cerr << "glue: " << e.what() << "\n";
    return glue::exit_code_for(e);
  }

  if (*index) {
    auto cat = glue::GluingIndexCategory::enumerate(n);
    json j{{"n", n},
           {"objects", cat.objects().size()},
           {"morphisms", cat.morphism_count()},
           {"generators", cat.generators().size()}};
    std::cout << glue::io::dump(j);
    if (!dot_path.empty()) write_file(dot_path, cat.dot());
    return 0;
  }

  if (*verify && fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(path))
      if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    json all = json::object();
    int code = 0;
    for (const auto& f : files) {
      Outcome o = run_one(f, variant, seed);
      all[fs::path(f).filename().string()] = o.report;
      code = std::max(code, o.code);
    }
    std::cout << glue::io::dump(all);
    return code;
  }

  Outcome o = run_one(path, variant, seed);
  if (*build) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "glue: cannot create " << out_dir << "\n";
      return 2;
    }
    write_file(fs::path(out_dir) / "report.json", glue::io::dump(o.report));
    if (o.code <= 1) {
      write_file(fs::path(out_dir) / "glued.json", glue::io::dump(o.result.glued));
      write_file(fs::path(out_dir) / "glued.dot", o.result.dot);
      write_file(fs::path(out_dir) / "timings.json", glue::io::dump(json{{"seconds", o.result.seconds}}));
    }
  }
  if (format == "dot" && o.code <= 1) std::cout << o.result.dot;
  else std::cout << glue::io::dump(o.report);
  return o.code;
}
