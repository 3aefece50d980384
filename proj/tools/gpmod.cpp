// Command-line front end: classify, generate, isomorphic, random, selftest.
//
// Exit codes: 0 success (or "yes"), 1 "no" / failed self-check, 2 parse or
// I/O error, 3 mathematical precondition violated, 4 internal error,
// 5 undetermined.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "gpmod/io.hpp"
#include "gpmod/random.hpp"
#include "gpmod/selftest.hpp"

using namespace gpmod;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw parse_error(path + ": " + ex.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

int cmd_classify(const std::string& in, const std::string& out, const std::string& dot, std::uint64_t seed) {
  const auto file = any_module_from_json(read_json(in));
  return std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        const auto& m = std::get<GPModule<K>>(file.module);
        require_gp(k, m);
        ClassifyOptions opt;
        opt.search.seed = seed;
        const auto report = classify(k, m, opt);
        write_json(out, report_to_json(k, report));
        if (!dot.empty()) write_text(dot, to_dot(rep_of_report(k, report).quiver));
        return 0;
      },
      file.field);
}

int cmd_generate(const std::string& in, const std::string& out) {
  const json spec = read_json(in);
  const Quiver g = spec_quiver(spec);
  const auto bad = validate_kraft(g);
  if (!bad.empty()) {
    for (const auto& v : bad) std::cerr << "Kraft condition (" << v.condition << ") violated: " << v.message << "\n";
    return 3;
  }
  const AnyField f = spec_field(spec);
  return std::visit(
      [&](const auto& k) {
        write_json(out, module_to_json(k, module_of(k, spec_representation(k, spec))));
        return 0;
      },
      f);
}

int cmd_isomorphic(const std::string& a, const std::string& b, std::uint64_t seed) {
  const auto fa = any_module_from_json(read_json(a));
  const auto fb = any_module_from_json(read_json(b));
  if (field_descriptor(fa.field) != field_descriptor(fb.field)) throw domain_error("modules are over different fields");
  return std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        const auto& m1 = std::get<GPModule<K>>(fa.module);
        const auto& m2 = std::get<GPModule<K>>(fb.module);
        require_gp(k, m1);
        require_gp(k, m2);
        ClassifyOptions opt;
        opt.search.seed = seed;
        const auto res = modules_isomorphic(k, m1, m2, opt);
        std::cout << to_string(res.verdict) << "\n";
        if (res.verdict == Verdict::undetermined) std::cerr << res.reason << "\n";
        switch (res.verdict) {
          case Verdict::yes:
            return 0;
          case Verdict::no:
            return 1;
          default:
            return 5;
        }
      },
      fa.field);
}

int cmd_random(const std::string& field, std::size_t max_dim, std::size_t count, std::uint64_t seed) {
  const AnyField f = field_from_name(field);
  Rng rng(seed);
  QuiverSampling s;
  s.max_rep_dim = std::max<std::size_t>(1, max_dim);
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        for (std::size_t i = 0; i < count; ++i) os << spec_to_json(k, random_strict_rep(k, rng, s)).dump() << "\n";
      },
      f);
  std::cout << os.str();
  return 0;
}

int cmd_selftest(const std::string& level) {
  const bool full = level == "full";
  const std::uint64_t seed = 20240601;
  std::vector<SuiteResult> results;
  results.push_back(relation_law_suite(full ? 600 : 150, seed));
  results.push_back(weak_decomposition_suite(full ? 120 : 40, seed + 1));
  auto rt = round_trip_suite(full ? 200 : 45, seed + 2);
  results.push_back(rt.round_trip);
  results.push_back(rt.bookkeeping);
  results.push_back(rt.first_kind);
  results.push_back(additivity_suite(full ? 100 : 30, seed + 3));
  bool ok = true;
  for (const auto& r : results) {
    std::cout << format_result(r) << "\n";
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification of sigma-linear F,V-modules over finite fields"};
  app.require_subcommand(1);

  std::string in, out, dot, a, b, field = "F2", level = "fast";
  std::uint64_t seed = 0x5eed;
  std::size_t max_dim = 3, count = 10;

  auto* classify_cmd = app.add_subcommand("classify", "Classify a module file");
  classify_cmd->add_option("--in", in, "module JSON")->required();
  classify_cmd->add_option("--out", out, "report JSON (stdout if omitted)");
  classify_cmd->add_option("--emit-dot", dot, "write the recovered quiver as DOT");
  classify_cmd->add_option("--seed", seed, "seed for the conjugacy search");

  auto* generate_cmd = app.add_subcommand("generate", "Build the module attached to a quiver spec");
  generate_cmd->add_option("--in", in, "quiver spec JSON")->required();
  generate_cmd->add_option("--out", out, "module JSON (stdout if omitted)");

  auto* iso_cmd = app.add_subcommand("isomorphic", "Decide whether two modules are isomorphic");
  iso_cmd->add_option("--a", a, "first module JSON")->required();
  iso_cmd->add_option("--b", b, "second module JSON")->required();
  iso_cmd->add_option("--seed", seed, "seed for the conjugacy search");

  auto* random_cmd = app.add_subcommand("random", "Emit random quiver specs with strict representations");
  random_cmd->add_option("--field", field, "field name, e.g. F2, F4, F9");
  random_cmd->add_option("--max-dim", max_dim, "largest dimension at a vertex");
  random_cmd->add_option("--count", count, "number of specs");
  random_cmd->add_option("--seed", seed, "random seed");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suites");
  selftest_cmd->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*classify_cmd) return cmd_classify(in, out, dot, seed);
    if (*generate_cmd) return cmd_generate(in, out);
    if (*iso_cmd) return cmd_isomorphic(a, b, seed);
    if (*random_cmd) return cmd_random(field, max_dim, count, seed);
    if (*selftest_cmd) return cmd_selftest(level);
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
