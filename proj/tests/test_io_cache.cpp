#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diophlab/cache.hpp"
#include "diophlab/io.hpp"

using namespace diophlab;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "diophlab-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(ParseCount, Forms) {
  EXPECT_EQ(io::parse_count("1000000"), 1'000'000U);
  EXPECT_EQ(io::parse_count("1_000_000"), 1'000'000U);
  EXPECT_EQ(io::parse_count("1e6"), 1'000'000U);
  EXPECT_EQ(io::parse_count("1E12"), 1'000'000'000'000U);
  EXPECT_EQ(io::parse_count("2.5e6"), 2'500'000U);
  EXPECT_EQ(io::parse_count("100e-2"), 1U);
  EXPECT_EQ(io::parse_count("0"), 0U);
  EXPECT_EQ(io::parse_count("18446744073709551615"), 18446744073709551615ULL);
}

TEST(ParseCount, Errors) {
  for (const char* bad : {"", "abc", "1.5", "1e-1", "-3", "1e", "1e+", "2.3.4", "18446744073709551616", "1e20", "1e1000"}) {
    EXPECT_THROW(io::parse_count(bad), DomainError) << bad;
  }
}

TEST(ParseCount, Lists) {
  EXPECT_EQ(io::parse_count_list("1e3,10_000,5"), (std::vector<u64>{1000, 10000, 5}));
  EXPECT_THROW(io::parse_count_list("1,,2"), DomainError);
}

TEST(ParsePoly, Examples) {
  EXPECT_EQ(io::parse_poly("1,0,-1"), decompose(1, 0, -1));
  EXPECT_EQ(io::parse_poly(" -1, 0, 1"), decompose(-1, 0, 1));
  EXPECT_THROW(io::parse_poly("1,0,1"), IrreducibleError);
  EXPECT_THROW(io::parse_poly("1,0"), DomainError);
  EXPECT_THROW(io::parse_poly("1,x,0"), DomainError);
  EXPECT_EQ(io::parse_signed("-12"), -12);
  EXPECT_THROW(io::parse_signed("9223372036854775808"), DomainError);
}

TEST(ParseFormat, Values) {
  EXPECT_EQ(io::parse_format("csv"), io::Format::csv);
  EXPECT_EQ(io::parse_format("json"), io::Format::json);
  EXPECT_THROW(io::parse_format("xml"), DomainError);
}

TEST(TableWriter, Csv) {
  std::ostringstream out;
  io::TableWriter w(out, io::Format::csv, io::Json{{"tool", "diophlab"}, {"seed", 3}});
  w.row(io::Json{{"m", 8}, {"rho", 4}, {"note", "x"}});
  w.row(io::Json{{"m", 24}, {"rho", 8}, {"note", nullptr}});
  EXPECT_EQ(out.str(), "# tool=diophlab seed=3\nm,rho,note\n8,4,x\n24,8,\n");
}

TEST(TableWriter, Json) {
  std::ostringstream out;
  io::TableWriter w(out, io::Format::json, io::Json{{"tool", "diophlab"}});
  w.row(io::Json{{"m", 8}, {"rho", 4}});
  EXPECT_EQ(out.str(), "{\"record\":\"header\",\"tool\":\"diophlab\"}\n{\"m\":8,\"rho\":4}\n");
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(cache::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(cache::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cache, MissThenHit) {
  TempDir tmp;
  const cache::Cache c(tmp.path() / "store");
  const io::Json args{{"x", 1000}, {"a_lo", 1}};
  EXPECT_FALSE(c.get("op", args).has_value());
  c.put("op", args, io::Json{{"count", 3}});
  const auto hit = c.get("op", args);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ((*hit)["count"], 3);
  EXPECT_FALSE(c.get("op", io::Json{{"x", 1001}, {"a_lo", 1}}).has_value());
  EXPECT_FALSE(c.get("other", args).has_value());
  // No temporary files left behind.
  for (const auto& e : fs::recursive_directory_iterator(c.dir())) {
    EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
  }
}

TEST(Cache, CorruptEntriesAreMisses) {
  TempDir tmp;
  const cache::Cache c(tmp.path());
  const io::Json args{{"x", 5}};
  const auto path = c.entry_path(cache::Cache::key("op", args));

  c.put("op", args, io::Json{{"count", 1}});
  { std::ofstream(path, std::ios::trunc) << "{not json"; }
  EXPECT_FALSE(c.get("op", args).has_value());

  c.put("op", args, io::Json{{"count", 1}});
  std::string body;
  { std::ifstream in(path); std::getline(in, body); }
  const auto pos = body.find("\"count\":1");
  ASSERT_NE(pos, std::string::npos);
  body.replace(pos, 9, "\"count\":2");
  { std::ofstream(path, std::ios::trunc) << body; }
  EXPECT_FALSE(c.get("op", args).has_value());

  { std::ofstream(path, std::ios::trunc) << ""; }
  EXPECT_FALSE(c.get("op", args).has_value());
}

TEST(Cache, EnvironmentOverride) {
  ::unsetenv("DIOPHLAB_CACHE");
  EXPECT_FALSE(cache::Cache::resolve_dir(std::nullopt).has_value());
  EXPECT_EQ(*cache::Cache::resolve_dir(std::string("/tmp/a")), fs::path("/tmp/a"));
  ::setenv("DIOPHLAB_CACHE", "/tmp/b", 1);
  EXPECT_EQ(*cache::Cache::resolve_dir(std::string("/tmp/a")), fs::path("/tmp/b"));
  EXPECT_EQ(*cache::Cache::resolve_dir(std::nullopt), fs::path("/tmp/b"));
  ::unsetenv("DIOPHLAB_CACHE");
}

TEST(Cache, UnwritableDirectory) {
  EXPECT_THROW(cache::Cache("/proc/diophlab-no-such-dir"), ResourceError);
}
