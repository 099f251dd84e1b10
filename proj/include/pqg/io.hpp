#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pqg/audit.hpp"
#include "pqg/certificate.hpp"
#include "pqg/certifier.hpp"
#include "pqg/clique_cover.hpp"
#include "pqg/errors.hpp"
#include "pqg/sparse_graph.hpp"
#include "pqg/spectral.hpp"

namespace pqg::io {

using json = nlohmann::json;

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr char kCacheMagic[4] = {'P', 'Q', 'G', '1'};
inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr std::string_view kCoverHeader = "PQCOVER v1";

static_assert(std::endian::native == std::endian::little, "binary cache code assumes a little-endian host");

// Writes through a sibling temporary file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

// ---------------------------------------------------------------------------
// Binary cache: "PQG1", u32 version, u64 n, u64 m, (n+1) x u64 offsets,
// 2m x u32 neighbors, little-endian.

inline std::string encode_cache(const SparseGraph& g) {
  const std::uint64_t n = g.n();
  const std::uint64_t m = g.m();
  std::string bytes;
  bytes.reserve(4 + 4 + 16 + (n + 1) * 8 + 2 * m * 4);
  auto put = [&](const void* p, std::size_t len) { bytes.append(static_cast<const char*>(p), len); };
  put(kCacheMagic, 4);
  put(&kCacheVersion, 4);
  put(&n, 8);
  put(&m, 8);
  put(g.offsets().data(), g.offsets().size() * 8);
  put(g.adjacency().data(), g.adjacency().size() * 4);
  return bytes;
}

inline SparseGraph decode_cache(std::string_view bytes, GraphMetadata meta = {}) {
  constexpr std::size_t kHeader = 4 + 4 + 8 + 8;
  if (bytes.size() < kHeader) throw FormatError("cache truncated");
  if (std::memcmp(bytes.data(), kCacheMagic, 4) != 0) throw FormatError("bad cache magic");
  std::uint32_t version;
  std::uint64_t n, m;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&n, bytes.data() + 8, 8);
  std::memcpy(&m, bytes.data() + 16, 8);
  if (version != kCacheVersion) throw FormatError("unsupported cache version " + std::to_string(version));
  if (n >= (std::uint64_t{1} << 32) || m >= (std::uint64_t{1} << 40)) throw FormatError("cache sizes out of range");
  const std::uint64_t expected = kHeader + (n + 1) * 8 + 2 * m * 4;
  if (bytes.size() != expected) throw FormatError("cache length does not match header");
  std::vector<std::uint64_t> offsets(n + 1);
  std::vector<std::uint32_t> neighbors(2 * m);
  std::memcpy(offsets.data(), bytes.data() + kHeader, offsets.size() * 8);
  std::memcpy(neighbors.data(), bytes.data() + kHeader + offsets.size() * 8, neighbors.size() * 4);
  return SparseGraph::from_csr(std::move(offsets), std::move(neighbors), meta);
}

inline void write_cache(const std::filesystem::path& path, const SparseGraph& g) {
  write_atomic(path, encode_cache(g));
}

inline SparseGraph read_cache(const std::filesystem::path& path, GraphMetadata meta = {}) {
  return decode_cache(read_file(path), meta);
}

// ---------------------------------------------------------------------------
// Edge list: "u v" per line, u < v, lexicographic, LF.

inline std::string encode_edgelist(const SparseGraph& g) {
  std::string out;
  char buf[32];
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    for (std::uint32_t v : g.neighbors(u)) {
      if (v <= u) continue;
      out.append(buf, std::to_chars(buf, buf + sizeof buf, u).ptr);
      out += ' ';
      out.append(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
      out += '\n';
    }
  }
  return out;
}

namespace detail {

inline std::vector<std::uint32_t> parse_ids(std::string_view line, std::size_t line_no) {
  std::vector<std::uint32_t> ids;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    if (*p == ' ') {
      ++p;
      continue;
    }
    std::uint32_t v;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || (next < end && *next != ' ')) {
      throw FormatError("line " + std::to_string(line_no) + ": expected decimal vertex ids");
    }
    ids.push_back(v);
    p = next;
  }
  return ids;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) throw FormatError("missing final newline");
    ++line_no;
    fn(text.substr(0, nl), line_no);
    text.remove_prefix(nl + 1);
  }
}

}  // namespace detail

// `n` of 0 infers the vertex count as one past the largest id.
inline SparseGraph decode_edgelist(std::string_view text, std::uint32_t n = 0) {
  std::vector<Edge> edges;
  std::uint32_t max_id = 0;
  bool any = false;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto ids = detail::parse_ids(line, line_no);
    if (ids.size() != 2) throw FormatError("line " + std::to_string(line_no) + ": expected two ids");
    if (ids[0] >= ids[1]) throw FormatError("line " + std::to_string(line_no) + ": require u < v");
    if (!edges.empty() && Edge{ids[0], ids[1]} <= edges.back()) {
      throw FormatError("line " + std::to_string(line_no) + ": edges not in sorted order");
    }
    edges.emplace_back(ids[0], ids[1]);
    max_id = std::max(max_id, ids[1]);
    any = true;
  });
  const std::uint32_t count = n != 0 ? n : (any ? max_id + 1 : 0);
  return SparseGraph::from_edges(count, edges);
}

// ---------------------------------------------------------------------------
// Cover file: "PQCOVER v1" header, then one clique per line as ascending
// space-separated ids.

inline std::string encode_cover(const CliqueCover& cover) {
  std::string out(kCoverHeader);
  out += '\n';
  char buf[16];
  for (std::uint32_t c = 0; c < cover.size(); ++c) {
    bool first = true;
    for (std::uint32_t v : cover.clique(c)) {
      if (!first) out += ' ';
      first = false;
      auto r = std::to_chars(buf, buf + sizeof buf, v);
      out.append(buf, r.ptr);
    }
    out += '\n';
  }
  return out;
}

// Parses without semantic validation; `n` of 0 infers the vertex count.
inline CliqueCover decode_cover(std::string_view text, std::uint32_t n = 0) {
  const auto nl = text.find('\n');
  if (nl == std::string_view::npos || text.substr(0, nl) != kCoverHeader) {
    throw FormatError("missing cover header \"PQCOVER v1\"");
  }
  std::vector<std::vector<std::uint32_t>> cliques;
  std::uint32_t max_id = 0;
  detail::for_each_line(text.substr(nl + 1), [&](std::string_view line, std::size_t line_no) {
    auto ids = detail::parse_ids(line, line_no + 1);
    if (ids.empty()) throw FormatError("line " + std::to_string(line_no + 1) + ": empty clique");
    for (std::uint32_t v : ids) max_id = std::max(max_id, v);
    cliques.push_back(std::move(ids));
  });
  const std::uint32_t count = n != 0 ? n : (cliques.empty() ? 0 : max_id + 1);
  return CliqueCover::from_cliques(count, cliques);
}

// Reads and validates a user-supplied cover: edge-partition and no triangle of
// cliques. Throws FormatError or CoverViolation.
inline CliqueCover load_clique_cover(const std::filesystem::path& path, std::uint32_t n = 0) {
  CliqueCover cover = decode_cover(read_file(path), n);
  validate_cover(cover);
  return cover;
}

inline void write_cover(const std::filesystem::path& path, const CliqueCover& cover) {
  write_atomic(path, encode_cover(cover));
}

// ---------------------------------------------------------------------------
// JSON reports.

// FNV-1a over the canonical dump of the config object.
inline std::string config_hash(const json& config) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// {"tool", "version", "command", "q", "seed", "config", "config_hash"}; q and
// seed are null when the command does not involve them.
inline json provenance(std::string_view command, const json& config) {
  json p;
  p["tool"] = "pqgraph";
  p["version"] = kToolVersion;
  p["command"] = command;
  p["q"] = config.contains("q") ? config["q"] : json(nullptr);
  p["seed"] = config.contains("seed") ? config["seed"] : json(nullptr);
  p["config"] = config;
  p["config_hash"] = config_hash(config);
  return p;
}

inline json to_json(const Certificate& cert) {
  json j;
  j["kind"] = to_string(cert.kind);
  j["verdict"] = cert.pass ? "pass" : "fail";
  j["violation"] = cert.violation.empty() ? json(nullptr) : json(cert.violation);
  j["witness"] = cert.witness;
  j["stats"] = cert.stats;
  return j;
}

inline json to_json(const SpectralReport& rep) {
  json j;
  j["method"] = to_string(rep.method);
  j["eigenvalues"] = rep.eigenvalues;
  j["residuals"] = rep.residuals;
  j["d"] = rep.d ? json(*rep.d) : json(nullptr);
  j["bipartite"] = rep.bipartite;
  j["lambda"] = rep.lambda;
  j["lambda_upper"] = rep.lambda_upper;
  j["iterations"] = rep.iterations;
  return j;
}

inline json to_json(const TheoryParams& t) {
  json j;
  j["q"] = t.q;
  j["n"] = t.n;
  j["d_incidence"] = t.d_incidence;
  j["lambda_incidence"] = t.lambda_incidence;
  j["d_g1"] = t.d_g1;
  j["p_g1"] = t.p_g1.str();
  j["beta_g1"] = t.beta_g1;
  j["p_g"] = t.p_g.str();
  j["p_g_value"] = t.p_g.value();
  j["beta_target_shape"] = t.beta_target_shape;
  j["union_bound_failure"] = t.union_bound_failure.str();
  return j;
}

inline json to_json(const DiscrepancyReport& rep, bool include_records = true) {
  json j;
  j["q"] = rep.q;
  j["n"] = rep.n;
  j["p"] = rep.p.str();
  j["q_log_n"] = rep.q_log_n;
  j["samples"] = rep.records.size();
  j["sampled_lower_bound_on_beta"] = rep.max_discrepancy;
  j["fitted_c"] = rep.fitted_c;
  j["max_mixing_ratio"] = rep.max_mixing_ratio;
  json fam = json::object();
  for (const auto& [name, s] : rep.families) {
    fam[name] = {{"count", s.count}, {"max_discrepancy", s.max_discrepancy}, {"max_ratio", s.max_ratio}};
  }
  j["families"] = fam;
  j["histogram"] = rep.histogram;
  if (include_records) {
    json recs = json::array();
    for (const auto& r : rep.records) {
      recs.push_back({{"family", to_string(r.family)},
                      {"size", r.size},
                      {"e_g", r.e_g},
                      {"e_g1", r.e_g1},
                      {"q_form", r.q_form},
                      {"expected", r.expected},
                      {"discrepancy", r.discrepancy}});
    }
    j["records"] = recs;
  }
  return j;
}

inline json to_json(const HwTailTable& t) {
  json j;
  j["exhaustive"] = t.exhaustive;
  j["trials"] = t.trials;
  j["t"] = t.t_total;
  j["frobenius_sq"] = t.frobenius_sq;
  j["operator_norm"] = t.operator_norm;
  j["mean"] = t.mean;
  j["variance"] = t.variance;
  j["se_mean"] = t.se_mean;
  j["se_variance"] = t.se_variance;
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back({{"tau", r.tau}, {"exceed", r.exceed}, {"reference", r.reference}});
  j["tail"] = rows;
  return j;
}

// Report envelope: {"provenance": ..., "result": ...}.
inline json report(std::string_view command, const json& config, json result) {
  return json{{"provenance", provenance(command, config)}, {"result", std::move(result)}};
}

// Field-presence check for the documented report envelope.
inline bool valid_report(const json& j) {
  if (!j.is_object() || !j.contains("provenance") || !j.contains("result")) return false;
  const auto& p = j["provenance"];
  for (const char* key : {"tool", "version", "command", "q", "seed", "config", "config_hash"}) {
    if (!p.contains(key)) return false;
  }
  return p["config_hash"].is_string() && p["config_hash"].get<std::string>().size() == 16 &&
         p["config_hash"] == config_hash(p["config"]);
}

}  // namespace pqg::io
