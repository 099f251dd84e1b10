#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

#include "pqg/pqg.hpp"

namespace {

namespace fs = std::filesystem;
using pqg::io::json;

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() /
                   ("pqg_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                    ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

pqg::SparseGraph sample_graph() {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(3));
  return pqg::build_g(cover, pqg::SignAssignment::derive(cover, 5));
}

TEST(Cache, LayoutIsLittleEndianCsr) {
  const std::vector<pqg::Edge> e = {{0, 1}, {1, 2}};
  const auto g = pqg::SparseGraph::from_edges(3, e);
  const std::string bytes = pqg::io::encode_cache(g);
  // magic 4 + version 4 + n 8 + m 8 + offsets 4*8 + neighbors 4*4
  ASSERT_EQ(bytes.size(), 4U + 4 + 8 + 8 + 32 + 16);
  EXPECT_EQ(bytes.substr(0, 4), "PQG1");
  auto u32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
    return v;
  };
  auto u64 = [&](std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
    return v;
  };
  EXPECT_EQ(u32(4), 1U);
  EXPECT_EQ(u64(8), 3U);
  EXPECT_EQ(u64(16), 2U);
  EXPECT_EQ(u64(24), 0U);
  EXPECT_EQ(u64(32), 1U);
  EXPECT_EQ(u64(40), 3U);
  EXPECT_EQ(u64(48), 4U);
  EXPECT_EQ(u32(56), 1U);
  EXPECT_EQ(u32(60), 0U);
  EXPECT_EQ(u32(64), 2U);
  EXPECT_EQ(u32(68), 1U);
}

TEST(Cache, RoundTrip) {
  const auto g = sample_graph();
  const auto dir = temp_dir();
  pqg::io::write_cache(dir / "g.pqg", g);
  const auto back = pqg::io::read_cache(dir / "g.pqg");
  EXPECT_EQ(back, g);
  EXPECT_EQ(pqg::io::encode_cache(back), pqg::io::encode_cache(g));
  fs::remove_all(dir);
}

TEST(Cache, RejectsCorruption) {
  const std::string good = pqg::io::encode_cache(sample_graph());
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(pqg::io::decode_cache(bad_magic), pqg::FormatError);
  std::string bad_version = good;
  bad_version[4] = 2;
  EXPECT_THROW(pqg::io::decode_cache(bad_version), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_cache(good.substr(0, good.size() - 1)), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_cache(good.substr(0, 10)), pqg::FormatError);
  // Rewrite the last neighbor id: breaks symmetry.
  std::string asym = good;
  asym[asym.size() - 4] = static_cast<char>(asym[asym.size() - 4] ^ 1);
  EXPECT_THROW(pqg::io::decode_cache(asym), pqg::Error);
}

TEST(EdgeList, Format) {
  const std::vector<pqg::Edge> e = {{2, 0}, {0, 1}, {1, 3}};
  const auto g = pqg::SparseGraph::from_edges(4, e);
  EXPECT_EQ(pqg::io::encode_edgelist(g), "0 1\n0 2\n1 3\n");
}

TEST(EdgeList, RoundTrip) {
  const auto g = sample_graph();
  const auto text = pqg::io::encode_edgelist(g);
  const auto back = pqg::io::decode_edgelist(text, g.n());
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_EQ(pqg::io::encode_edgelist(back), text);
}

TEST(EdgeList, RejectsMalformedInput) {
  EXPECT_THROW(pqg::io::decode_edgelist("0 1"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_edgelist("1 0\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_edgelist("0 2\n0 1\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_edgelist("0 1\n0 1\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_edgelist("0 x\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_edgelist("0 1 2\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_edgelist("0 1\r\n"), pqg::FormatError);
  EXPECT_EQ(pqg::io::decode_edgelist("").n(), 0U);
}

TEST(Cover, RoundTrip) {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(4));
  const auto text = pqg::io::encode_cover(cover);
  EXPECT_EQ(text.substr(0, 11), "PQCOVER v1\n");
  EXPECT_EQ(pqg::io::decode_cover(text), cover);
  const auto dir = temp_dir();
  pqg::io::write_cover(dir / "cover.txt", cover);
  EXPECT_EQ(pqg::io::load_clique_cover(dir / "cover.txt", cover.n()), cover);
  fs::remove_all(dir);
}

TEST(Cover, RejectsBadFiles) {
  EXPECT_THROW(pqg::io::decode_cover("0 1 2\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_cover("PQCOVER v1\n2 1\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_cover("PQCOVER v1\n\n"), pqg::FormatError);
  EXPECT_THROW(pqg::io::decode_cover("PQCOVER v1\n0 1"), pqg::FormatError);
  const auto dir = temp_dir();
  pqg::io::write_atomic(dir / "bad.txt", "PQCOVER v1\n0 1 2\n1 2 3\n");
  EXPECT_THROW(pqg::io::load_clique_cover(dir / "bad.txt"), pqg::CoverViolation);
  EXPECT_THROW(pqg::io::load_clique_cover(dir / "missing.txt"), pqg::IoError);
  fs::remove_all(dir);
}

TEST(Files, AtomicWriteReplacesContent) {
  const auto dir = temp_dir();
  pqg::io::write_atomic(dir / "f", "one");
  pqg::io::write_atomic(dir / "f", "two");
  EXPECT_EQ(pqg::io::read_file(dir / "f"), "two");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1U);
  EXPECT_THROW(pqg::io::write_atomic(dir / "no" / "such" / "f", "x"), pqg::IoError);
  fs::remove_all(dir);
}

TEST(Report, ConfigHashIsFnv1a) {
  EXPECT_EQ(pqg::io::config_hash(json::object()), "08f44b07b5901a25");
  EXPECT_EQ(pqg::io::config_hash(json{{"q", 8}, {"seed", 1}}), "8ea30be5096a5d80");
}

TEST(Report, EnvelopeSchema) {
  const json config = {{"q", 8}, {"seed", 1}};
  const auto r = pqg::io::report("build", config, json{{"n", 585}});
  EXPECT_TRUE(pqg::io::valid_report(r));
  EXPECT_EQ(r["provenance"]["tool"], "pqgraph");
  EXPECT_EQ(r["provenance"]["command"], "build");
  EXPECT_EQ(r["provenance"]["q"], 8);
  EXPECT_EQ(r["provenance"]["seed"], 1);
  EXPECT_EQ(r["result"]["n"], 585);
  auto tampered = r;
  tampered["provenance"]["config"]["q"] = 16;
  EXPECT_FALSE(pqg::io::valid_report(tampered));
  auto missing = r;
  missing["provenance"].erase("version");
  EXPECT_FALSE(pqg::io::valid_report(missing));
  const auto no_q = pqg::io::report("params", json::object(), json::object());
  EXPECT_TRUE(no_q["provenance"]["q"].is_null());
  EXPECT_TRUE(pqg::io::valid_report(no_q));
}

TEST(Report, SerializesResults) {
  const auto cert = pqg::Certificate::failed(pqg::CertificateKind::triangle_free_exhaustive, "triangle", {0, 1, 2});
  const auto j = pqg::io::to_json(cert);
  EXPECT_EQ(j["verdict"], "fail");
  EXPECT_EQ(j["witness"], json::array({0, 1, 2}));
  EXPECT_EQ(j["kind"], "triangle-free-exhaustive");

  const auto t = pqg::io::to_json(pqg::theory_params(8));
  EXPECT_EQ(t["n"], 585);
  EXPECT_EQ(t["p_g"], "4/65");

  const auto base = pqg::build_g1(pqg::build_quadrangle(2));
  const auto s = pqg::io::to_json(pqg::dense_spectrum(base.graph()));
  EXPECT_EQ(s["method"], "dense");
  EXPECT_EQ(s["eigenvalues"].size(), 15U);
}

}  // namespace
