// pqgraph: build, certify and audit triangle-free graphs obtained by randomly
// bipartitioning the line cliques of the symplectic quadrangle W(q).
//
// Exit codes: 0 pass, 1 certification or audit failure, 2 usage or I/O error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pqg/pqg.hpp"

namespace fs = std::filesystem;
using pqg::io::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t q = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string graph;
  std::string level = "both";
  std::uint32_t k = 2;
  double tol = 1e-8;
  std::uint64_t samples = 1000;
  std::string families;
  std::string format = "edgelist";
  std::string which = "g";
  unsigned threads = pqg::default_thread_count();
  std::string json_path;
  double max_c = 1.0;
};

// Contents of a build directory (or a bare cache file).
struct Loaded {
  fs::path dir;
  std::optional<std::uint32_t> q;
  std::optional<std::uint64_t> seed;
  pqg::SparseGraph g;
};

fs::path graph_file(const fs::path& p) { return fs::is_directory(p) ? p / "g.pqg" : p; }

Loaded load(const std::string& path) {
  if (path.empty()) throw UsageError("--graph is required");
  if (!fs::exists(path)) throw pqg::IoError("no such file or directory: " + path);
  Loaded l;
  l.dir = fs::is_directory(path) ? fs::path(path) : fs::path(path).parent_path();
  const fs::path prov = l.dir / "provenance.json";
  if (fs::is_directory(path) && fs::exists(prov)) {
    const json p = json::parse(pqg::io::read_file(prov));
    l.q = p.at("result").at("q").get<std::uint32_t>();
    l.seed = p.at("result").at("seed").get<std::uint64_t>();
  }
  pqg::GraphMetadata meta;
  meta.q = l.q;
  meta.seed = l.seed;
  meta.kind = pqg::GraphKind::bipartitioned;
  l.g = pqg::io::read_cache(graph_file(path), meta);
  return l;
}

pqg::CliqueCover load_cover(const Loaded& l) {
  const fs::path p = l.dir / "cover.txt";
  if (!fs::exists(p)) throw pqg::IoError("missing cover file " + p.string());
  return pqg::io::decode_cover(pqg::io::read_file(p), l.g.n());
}

std::uint32_t require_q(const Loaded& l) {
  if (!l.q) throw UsageError("build directory with provenance.json required for this command");
  return *l.q;
}

void emit(const Options& opt, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (opt.json_path.empty()) {
    std::cout << text;
  } else {
    pqg::io::write_atomic(opt.json_path, text);
  }
}

json base_config(const std::string& command, const Options& opt) {
  json c;
  c["command"] = command;
  c["threads"] = opt.threads;
  return c;
}

int cmd_build(const Options& opt) {
  if (opt.out.empty()) throw UsageError("--out is required");
  const auto started = std::chrono::steady_clock::now();
  const pqg::Quadrangle quad = pqg::build_quadrangle(opt.q);
  pqg::require_pass(pqg::certify_gq(quad, {.exhaustive = opt.q <= 8}));
  const pqg::BaseGraph base = pqg::build_g1(quad);
  const auto signs = pqg::SignAssignment::derive(base.cover(), opt.seed, opt.threads);
  pqg::SparseGraph g = pqg::build_g(base.cover(), signs, opt.threads);

  fs::create_directories(opt.out);
  pqg::io::write_cache(fs::path(opt.out) / "g.pqg", g);
  pqg::io::write_cover(fs::path(opt.out) / "cover.txt", base.cover());

  json config = base_config("build", opt);
  config["q"] = opt.q;
  config["seed"] = opt.seed;
  json result;
  result["q"] = opt.q;
  result["seed"] = opt.seed;
  result["n"] = g.n();
  result["m_g1"] = base.graph().m();
  result["m_g"] = g.m();
  result["files"] = {"g.pqg", "cover.txt"};
  pqg::io::write_atomic(fs::path(opt.out) / "provenance.json", pqg::io::report("build", config, result).dump(2) + "\n");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cerr << "built q=" << opt.q << " n=" << g.n() << " m(G1)=" << base.graph().m() << " m(G)=" << g.m() << " in "
            << secs << "s\n";
  return kPass;
}

int cmd_certify(const Options& opt) {
  if (opt.level != "exhaustive" && opt.level != "structural" && opt.level != "both") {
    throw UsageError("--level must be exhaustive, structural or both");
  }
  const Loaded l = load(opt.graph);
  json certs = json::array();
  bool pass = true;
  if (opt.level != "structural") {
    const auto cert = pqg::check_triangle_free(l.g);
    pass = pass && cert.pass;
    certs.push_back(pqg::io::to_json(cert));
  }
  if (opt.level != "exhaustive") {
    if (!l.seed) throw UsageError("structural certification needs a build directory");
    const pqg::CliqueCover cover = load_cover(l);
    const auto signs = pqg::SignAssignment::derive(cover, *l.seed, opt.threads);
    const auto cert = pqg::check_structural(cover, signs, &l.g);
    pass = pass && cert.pass;
    certs.push_back(pqg::io::to_json(cert));
  }
  json config = base_config("certify", opt);
  config["graph"] = opt.graph;
  config["level"] = opt.level;
  if (l.q) config["q"] = *l.q;
  if (l.seed) config["seed"] = *l.seed;
  emit(opt, pqg::io::report("certify", config, {{"pass", pass}, {"certificates", certs}}));
  return pass ? kPass : kFail;
}

int cmd_spectrum(const Options& opt) {
  const Loaded l = load(opt.graph);
  pqg::SparseGraph target;
  if (opt.which == "g") {
    target = l.g;
  } else if (opt.which == "g1") {
    target = pqg::build_base_graph(load_cover(l)).graph();
  } else if (opt.which == "incidence") {
    target = pqg::build_incidence_graph(pqg::build_quadrangle(require_q(l)));
  } else {
    throw UsageError("--which must be g, g1 or incidence");
  }
  pqg::LanczosOptions lanczos;
  lanczos.k = opt.k;
  lanczos.tol = opt.tol;
  lanczos.seed = opt.seed;
  const auto rep = pqg::spectrum(target, lanczos);
  json config = base_config("spectrum", opt);
  config["graph"] = opt.graph;
  config["which"] = opt.which;
  config["k"] = opt.k;
  config["tol"] = opt.tol;
  if (l.q) config["q"] = *l.q;
  if (l.seed) config["seed"] = *l.seed;
  json result = pqg::io::to_json(rep);
  if (rep.method == pqg::SpectralMethod::dense && rep.eigenvalues.size() > 64) {
    // Keep the report readable: extremes only.
    std::vector<double> top(rep.eigenvalues.begin(), rep.eigenvalues.begin() + 8);
    std::vector<double> bottom(rep.eigenvalues.end() - 8, rep.eigenvalues.end());
    result["eigenvalues"] = {{"largest", top}, {"smallest", bottom}, {"count", rep.eigenvalues.size()}};
  }
  emit(opt, pqg::io::report("spectrum", config, result));
  return kPass;
}

std::vector<pqg::Family> parse_families(const std::string& list) {
  if (list.empty()) return {pqg::kAllFamilies.begin(), pqg::kAllFamilies.end()};
  std::vector<pqg::Family> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(pqg::parse_family(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

int cmd_audit(const Options& opt) {
  const auto families = parse_families(opt.families);
  const Loaded l = load(opt.graph);
  const std::uint32_t q = require_q(l);
  const pqg::BaseGraph base = pqg::build_base_graph(load_cover(l), {.q = q, .kind = pqg::GraphKind::base, .seed = std::nullopt});
  const auto signs = pqg::SignAssignment::derive(base.cover(), *l.seed, opt.threads);
  const auto samples = pqg::sample_families(l.g, base.cover(), signs, opt.samples, opt.seed, families);
  json config = base_config("audit", opt);
  config["graph"] = opt.graph;
  config["q"] = q;
  config["seed"] = *l.seed;
  config["sample_seed"] = opt.seed;
  config["samples"] = opt.samples;
  config["families"] = opt.families.empty() ? "all" : opt.families;
  config["max_c"] = opt.max_c;
  try {
    const auto rep = pqg::audit(base, signs, l.g, samples, q);
    json result = pqg::io::to_json(rep);
    result["threshold"] = opt.max_c;
    result["pass"] = rep.fitted_c <= opt.max_c;
    emit(opt, pqg::io::report("audit", config, result));
    std::cerr << "audited " << rep.records.size() << " subsets, fitted C = " << rep.fitted_c << "\n";
    return rep.fitted_c <= opt.max_c ? kPass : kFail;
  } catch (const pqg::IdentityViolation& e) {
    std::cerr << "identity violation: " << e.what() << "\n";
    return kFail;
  } catch (const pqg::TheoremViolation& e) {
    std::cerr << "theorem violation: " << e.what() << "\n";
    return kFail;
  }
}

int cmd_params(const Options& opt) {
  const auto t = pqg::theory_params(opt.q);
  if (!opt.json_path.empty()) {
    json config = base_config("params", opt);
    config["q"] = opt.q;
    emit(opt, pqg::io::report("params", config, pqg::io::to_json(t)));
    return kPass;
  }
  std::cout << "q = " << t.q << "\n"
            << "n = " << t.n << "\n"
            << "p = " << t.p_g.str() << " (" << t.p_g.value() << ")\n"
            << "p_G1 = " << t.p_g1.str() << "\n"
            << "d_G1 = " << t.d_g1 << "\n"
            << "beta_G1 = " << t.beta_g1 << "\n"
            << "d_incidence = " << t.d_incidence << "\n"
            << "lambda_incidence = " << t.lambda_incidence << "\n"
            << "q ln n = " << t.beta_target_shape << "\n"
            << "union_bound_failure = " << t.union_bound_failure.str() << "\n";
  return kPass;
}

int cmd_export(const Options& opt) {
  if (opt.out.empty()) throw UsageError("--out is required");
  const Loaded l = load(opt.graph);
  if (opt.format == "edgelist") {
    if (opt.which == "g") {
      pqg::io::write_atomic(opt.out, pqg::io::encode_edgelist(l.g));
    } else if (opt.which == "g1") {
      pqg::io::write_atomic(opt.out, pqg::io::encode_edgelist(pqg::build_base_graph(load_cover(l)).graph()));
    } else {
      throw UsageError("--which must be g or g1 for edgelist export");
    }
  } else if (opt.format == "cover") {
    pqg::io::write_cover(opt.out, load_cover(l));
  } else {
    throw UsageError("--format must be edgelist or cover");
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangle-free pseudorandom graphs from the symplectic quadrangle W(q)"};
  app.require_subcommand(1);
  Options opt;

  auto* build = app.add_subcommand("build", "Build G for order q and write caches");
  build->add_option("--q", opt.q, "Field order (prime or 2^k)")->required();
  build->add_option("--seed", opt.seed, "Master seed for the sign assignment");
  build->add_option("--out", opt.out, "Output directory")->required();
  build->add_option("--threads", opt.threads, "Worker threads");

  auto* certify = app.add_subcommand("certify", "Certify triangle-freeness");
  certify->add_option("--graph", opt.graph, "Build directory or .pqg cache")->required();
  certify->add_option("--level", opt.level, "exhaustive, structural or both");
  certify->add_option("--threads", opt.threads, "Worker threads");
  certify->add_option("--json", opt.json_path, "Write the report here instead of stdout");

  auto* spectrum = app.add_subcommand("spectrum", "Adjacency spectrum (dense for n <= 2000, else Lanczos)");
  spectrum->add_option("--graph", opt.graph, "Build directory or .pqg cache")->required();
  spectrum->add_option("--which", opt.which, "g, g1 or incidence");
  spectrum->add_option("--k", opt.k, "Extreme pairs per end (Lanczos)");
  spectrum->add_option("--tol", opt.tol, "Residual tolerance (Lanczos)");
  spectrum->add_option("--seed", opt.seed, "Lanczos start-vector seed");
  spectrum->add_option("--json", opt.json_path, "Write the report here instead of stdout");

  auto* audit = app.add_subcommand("audit", "Sampled jumbledness audit of G");
  audit->add_option("--graph", opt.graph, "Build directory")->required();
  audit->add_option("--samples", opt.samples, "Number of subsets");
  audit->add_option("--families", opt.families,
                    "Comma list of uniform,line,line-union,neighborhood,sign-class,full (default all)");
  audit->add_option("--seed", opt.seed, "Sampling seed");
  audit->add_option("--max-c", opt.max_c, "Fail when the fitted constant exceeds this");
  audit->add_option("--threads", opt.threads, "Worker threads");
  audit->add_option("--json", opt.json_path, "Write the report here instead of stdout");

  auto* params = app.add_subcommand("params", "Print the parameter sheet for order q");
  params->add_option("--q", opt.q, "Field order")->required();
  params->add_option("--json", opt.json_path, "Write a JSON report here");

  auto* exporter = app.add_subcommand("export", "Export a graph or cover");
  exporter->add_option("--graph", opt.graph, "Build directory or .pqg cache")->required();
  exporter->add_option("--format", opt.format, "edgelist or cover");
  exporter->add_option("--which", opt.which, "g or g1 (edgelist)");
  exporter->add_option("--out", opt.out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*build) return cmd_build(opt);
    if (*certify) return cmd_certify(opt);
    if (*spectrum) return cmd_spectrum(opt);
    if (*audit) return cmd_audit(opt);
    if (*params) return cmd_params(opt);
    if (*exporter) return cmd_export(opt);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const pqg::UnsupportedOrder& e) {
    std::cerr << "UnsupportedOrder: " << e.what() << "\n";
    return kUsage;
  } catch (const pqg::CertificateFailure& e) {
    std::cerr << e.what() << "\n";
    return kFail;
  } catch (const pqg::CoverViolation& e) {
    std::cerr << "CoverViolation: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
