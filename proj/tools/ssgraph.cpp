// ssgraph: build, analyse and walk superspecial (2,2)-isogeny graphs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssg/errors.hpp"
#include "ssg/experiments.hpp"
#include "ssg/walk.hpp"

namespace fs = std::filesystem;
using namespace ssg;

namespace {

constexpr int kExitPrecondition = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string primes;
  long steps = 10000;
  u64 seed = 1;
  std::string out;
  std::string subgraph = "full";
  bool extended = false;
  std::vector<std::string> formats;
  std::string input;
  int dense_threshold = 2000;
};

// "p" or "a..b"; a range keeps the primes p >= 7 inside it.
std::vector<u32> parse_primes(const std::string& s) {
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.empty()) throw PreconditionError("not a prime or range: '" + s + "'");
    return static_cast<u32>(v);
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const u32 p = number(s);
    if (p < 7 || !is_prime(p)) throw PreconditionError("p = " + s + " must be a prime >= 7");
    return {p};
  }
  const u32 a = number(s.substr(0, dots)), b = number(s.substr(dots + 2));
  std::vector<u32> out;
  for (u32 p = std::max<u32>(a, 7); p <= b; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

fs::path out_dir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("SSGRAPH_OUT")) return env;
  return ".";
}

void write_file(const fs::path& path, const std::string& data) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << data;
  if (!f) throw IoError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

bool wants(const Options& o, const std::string& fmt) {
  return std::find(o.formats.begin(), o.formats.end(), fmt) != o.formats.end();
}

int cmd_build(const Options& o) {
  for (u32 p : parse_primes(o.primes)) {
    const auto g = build_graph(p);
    const fs::path base = out_dir(o) / ("gamma2_p" + std::to_string(p));
    std::vector<std::string> formats = o.formats.empty() ? std::vector<std::string>{"json", "dot"} : o.formats;
    for (const auto& f : formats) {
      if (f == "json") write_file(base.string() + ".json", to_json(g));
      if (f == "dot") write_file(base.string() + ".dot", to_dot(g));
      if (f == "csv") write_file(base.string() + ".csv", to_csv(g));
    }
    const std::string s = summary(g);
    write_file(base.string() + "_summary.txt", s);
    std::cout << s;
    std::cerr << "p = " << p << ": built in " << g.stats.seconds << " s\n";
  }
  return 0;
}

int cmd_spectra(const Options& o) {
  SpectralOptions opt;
  opt.dense_threshold = o.dense_threshold;
  std::string csv = spectra_csv_header();
  for (u32 p : parse_primes(o.primes)) {
    const auto g = build_graph(p);
    const auto row = spectra_row(g, opt);
    csv += spectra_csv_line(row);
    const double l2 = 15 * row.full.lambda2;
    const double ramanujan = 2 * std::sqrt(14.0);
    std::cerr << std::setprecision(10) << "p = " << p << ": adjacency lambda_2 = " << l2
              << (l2 > ramanujan ? " > " : " <= ") << "2 sqrt(14) = " << ramanujan
              << (l2 > ramanujan ? ", not Ramanujan" : ", Ramanujan");
    if (p == 11) std::cerr << "; 7 + sqrt(3) = " << 7 + std::sqrt(3.0);
    std::cerr << "\n";
  }
  std::cout << csv;
  write_file(out_dir(o) / "spectra.csv", csv);
  return 0;
}

int cmd_walk(const Options& o) {
  const Selection sel = parse_selection(o.subgraph);
  if (o.steps < 1) throw PreconditionError("--steps must be at least 1");
  for (u32 p : parse_primes(o.primes)) {
    const auto g = build_graph(p);
    WalkConfig cfg;
    cfg.steps = o.steps;
    cfg.seed = o.seed;
    cfg.selection = sel;
    cfg.record = wants(o, "csv");
    if (sel == Selection::Jacobian)
      for (const auto& v : g.vertices)
        if (v.kind == VertexKind::Jacobian) {
          cfg.start = v.id;
          break;
        }
    const auto s = random_walk(g, cfg);
    const std::string base = "walk_p" + std::to_string(p) + "_" + o.subgraph + "_seed" + std::to_string(o.seed);
    const std::string json = walk_json(g, s);
    write_file(out_dir(o) / (base + ".json"), json);
    if (cfg.record) write_file(out_dir(o) / (base + ".csv"), walk_csv(g, s));
    std::cout << json << "\n";
  }
  return 0;
}

// Structural and semantic validation of an exported graph file.
int verify_input(const Options& o) {
  const std::string text = read_file(o.input);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::cout << "error: " << o.input << ": not valid JSON (" << e.what() << ")\n";
    return kExitIo;
  }
  std::vector<std::string> errors;
  auto need = [&](const nlohmann::json& obj, const std::string& path, const char* field, auto pred, const char* what) {
    if (!obj.is_object() || !obj.contains(field) || !pred(obj[field])) {
      errors.push_back(path + "." + field + ": expected " + what);
      return false;
    }
    return true;
  };
  auto is_int = [](const nlohmann::json& x) { return x.is_number_integer(); };
  auto is_arr = [](const nlohmann::json& x) { return x.is_array(); };
  need(j, "$", "p", is_int, "an integer");
  need(j, "$", "seed", [](const nlohmann::json& x) { return x.is_string(); }, "a string");
  const bool has_v = need(j, "$", "vertices", is_arr, "an array");
  const bool has_e = need(j, "$", "edges", is_arr, "an array");
  std::map<std::string, int> orders;
  for (RAType t : kAllRATypes) orders[ra_name(t)] = ra_order(t);
  if (has_v)
    for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
      const auto& v = j["vertices"][i];
      const std::string path = "$.vertices[" + std::to_string(i) + "]";
      if (need(v, path, "id", is_int, "an integer") && v["id"] != static_cast<int>(i))
        errors.push_back(path + ".id: expected " + std::to_string(i));
      need(v, path, "kind", [](const nlohmann::json& x) { return x == "jacobian" || x == "product"; },
           "\"jacobian\" or \"product\"");
      const bool typed = need(v, path, "type", [&](const nlohmann::json& x) { return x.is_string() && orders.count(x); },
                              "a reduced automorphism type name");
      if (need(v, path, "ra_order", is_int, "an integer") && typed && v["ra_order"] != orders[v["type"]])
        errors.push_back(path + ".ra_order: does not match type " + v["type"].get<std::string>());
      need(v, path, "key", is_arr, "an array");
      need(v, path, "model", [](const nlohmann::json& x) { return x.is_object(); }, "an object");
    }
  const long n = has_v ? static_cast<long>(j["vertices"].size()) : 0;
  std::vector<long> out(n, 0);
  if (has_e)
    for (std::size_t i = 0; i < j["edges"].size(); ++i) {
      const auto& e = j["edges"][i];
      const std::string path = "$.edges[" + std::to_string(i) + "]";
      auto in_range = [&](const nlohmann::json& x) { return x.is_number_integer() && x >= 0 && x < n; };
      const bool ok = need(e, path, "src", in_range, "a vertex id") & need(e, path, "dst", in_range, "a vertex id") &
                      need(e, path, "weight", [](const nlohmann::json& x) { return x.is_number_integer() && x > 0; },
                           "a positive integer");
      if (ok) out[e["src"].get<long>()] += e["weight"].get<long>();
    }
  if (!errors.empty()) {
    for (const auto& e : errors) std::cout << "error: " << e << "\n";
    return kExitIo;
  }
  std::vector<std::string> failures;
  for (long v = 0; v < n; ++v)
    if (out[v] != 15) failures.push_back("vertex " + std::to_string(v) + " has out-weight " + std::to_string(out[v]));
  std::set<std::string> keys;
  for (const auto& v : j["vertices"])
    if (!keys.insert(v["key"].dump()).second) failures.push_back("duplicate key at vertex " + v["id"].dump());
  const u32 p = j["p"].get<u32>();
  if (p < 7 || !is_prime(p)) {
    failures.push_back("p = " + std::to_string(p) + " is not a prime >= 7");
  } else {
    const auto g = build_graph(p);
    if (j["seed"] == g.seed) {
      if (nlohmann::json::parse(to_json(g)) != j) failures.push_back("graph differs from a fresh build at p = " + std::to_string(p));
    } else {
      std::map<std::string, int> seen;
      for (const auto& v : j["vertices"]) seen[v["type"]]++;
      const auto c = expected_census(p);
      for (RAType t : kAllRATypes)
        if (Rational(seen[ra_name(t)]) != c.expected.at(t)) failures.push_back("census mismatch for " + ra_name(t));
    }
  }
  for (const auto& f : failures) std::cout << "FAIL " << f << "\n";
  if (failures.empty()) std::cout << "PASS " << o.input << "\n";
  return failures.empty() ? 0 : kExitInvariant;
}

int cmd_verify(const Options& o) {
  if (!o.input.empty()) return verify_input(o);
  if (o.primes.empty()) throw PreconditionError("verify needs --prime or --input");
  bool all = true;
  for (u32 p : parse_primes(o.primes)) {
    const auto g = build_graph(p);
    for (const auto& c : verify_graph(g, o.extended)) {
      std::cout << (c.ok ? "PASS " : "FAIL ") << "p=" << p << " " << c.name;
      if (!c.ok && !c.detail.empty()) std::cout << " (" << c.detail << ")";
      std::cout << "\n";
      all = all && c.ok;
    }
  }
  return all ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superspecial (2,2)-isogeny graphs: build, spectra, walks and checks"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool prime_required) {
    auto* opt = sub->add_option("-p,--prime", o.primes, "prime p or range a..b");
    if (prime_required) opt->required();
    sub->add_option("--seed", o.seed, "global random seed")->capture_default_str();
    sub->add_option("--out", o.out, "output directory (default $SSGRAPH_OUT or .)");
  };
  auto* build = app.add_subcommand("build", "build the graph and write JSON/DOT/CSV and a summary");
  common(build, true);
  build->add_option("--format", o.formats, "json, dot, csv (default json,dot)")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "dot", "csv"}));
  auto* spectra = app.add_subcommand("spectra", "diameters and scaled second eigenvalues as CSV");
  common(spectra, true);
  spectra->add_option("--dense-threshold", o.dense_threshold, "largest size for the dense eigensolver")
      ->capture_default_str();
  auto* walk = app.add_subcommand("walk", "seeded random walk statistics");
  common(walk, true);
  walk->add_option("-n,--steps", o.steps, "number of steps")->capture_default_str();
  walk->add_option("--subgraph", o.subgraph, "full, jacobian or product")
      ->check(CLI::IsMember({"full", "jacobian", "product"}))
      ->capture_default_str();
  walk->add_option("--format", o.formats, "add csv for the step-by-step trajectory")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv"}));
  auto* verify = app.add_subcommand("verify", "run the invariant suite, or validate an exported graph");
  common(verify, false);
  verify->add_flag("--extended-checks", o.extended, "also transport every dual kernel");
  verify->add_option("--input", o.input, "graph JSON file to validate");
  for (auto* sub : {build, spectra, walk}) sub->add_flag("--extended-checks", o.extended, "accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }
  try {
    set_global_seed(o.seed);
    if (build->parsed()) return cmd_build(o);
    if (spectra->parsed()) return cmd_spectra(o);
    if (walk->parsed()) return cmd_walk(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return 0;
}
