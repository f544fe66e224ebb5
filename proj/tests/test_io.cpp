#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "rsflat/io.hpp"
#include "rsflat/errors.hpp"

using namespace rsflat;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / (std::string("rsflat_test_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ResultRecord sample_record() {
  ResultRecord r;
  r.quantity = "hp_norm";
  r.parameters = {{"s", 1.0}, {"p", 6.0}, {"scale", 4096.0}};
  r.values = {{"value", 0.001953125}, {"n_max", 256}};
  r.certification = {{"certified", true}, {"sup_tail", 0.00390625}};
  r.timestamp = "2000-01-01T00:00:00Z";
  return r;
}

}  // namespace

TEST_CASE("record round-trips losslessly") {
  const ResultRecord r = sample_record();
  CHECK(parse_record(emit_record(r)) == r);

  // byte stability: emit(parse(emit(r))) == emit(r)
  const std::string once = emit_record(r);
  CHECK(emit_record(parse_record(once)) == once);
}

TEST_CASE("-inf sentinel serializes as a string") {
  ResultRecord r = sample_record();
  r.values["d_values"] = {1.0, -std::numeric_limits<double>::infinity(), 0.4};
  const std::string text = emit_record(r);
  CHECK(text.find("\"-inf\"") != std::string::npos);
  const ResultRecord back = parse_record(text);
  CHECK(back.values["d_values"][1].get<double>() ==
        -std::numeric_limits<double>::infinity());
  CHECK(back == r);

  ResultRecord nan_rec = sample_record();
  nan_rec.values["bad"] = std::nan("");
  CHECK_THROWS_AS(emit_record(nan_rec), io_error);
}

TEST_CASE("csv emitter") {
  const fs::path dir = temp_dir("csv");
  const fs::path path = dir / "curve.csv";
  write_csv(path, {"scale", "value"}, {{1.0, 2.0}, {0.5, 3.25}});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "scale,value");
  std::getline(in, line);
  CHECK(line == "1,2");

  CHECK_THROWS_AS(write_csv(dir / "bad.csv", {"a"}, {{std::nan("")}}), io_error);
  CHECK_THROWS_AS(
      write_csv(dir / "bad2.csv", {"a"}, {{std::numeric_limits<double>::infinity()}}),
      io_error);
  CHECK_THROWS_AS(write_csv(dir / "nodir" / "x.csv", {"a"}, {{1.0}}), io_error);
  fs::remove_all(dir);
}

TEST_CASE("cache put/get") {
  const fs::path dir = temp_dir("cache");
  const ResultCache cache(dir);
  const ResultRecord r = sample_record();

  const std::string key =
      ResultCache::canonical_key("hp_norm", 1.0, 6.0, 4096.0, 4.0, "exact", 1);
  CHECK_FALSE(cache.cache_get(key).has_value());
  cache.cache_put(key, r);
  const auto back = cache.cache_get(key);
  REQUIRE(back.has_value());
  CHECK(*back == r);

  // changing A changes the key
  const std::string key2 =
      ResultCache::canonical_key("hp_norm", 1.0, 6.0, 4096.0, 8.0, "exact", 1);
  CHECK(key != key2);
  CHECK_FALSE(cache.cache_get(key2).has_value());
  fs::remove_all(dir);
}

TEST_CASE("corrupt cache entries read as misses") {
  const fs::path dir = temp_dir("cache_corrupt");
  const ResultCache cache(dir);
  const std::string key =
      ResultCache::canonical_key("sf_root", 1.0, 2.0, 0.25, 4.0, "exact", 1);
  cache.cache_put(key, sample_record());

  // clobber the entry
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ofstream out(e.path());
    out << "{ not json";
  }
  CHECK_FALSE(cache.cache_get(key).has_value());
  fs::remove_all(dir);
}

TEST_CASE("concurrent writers leave exactly one valid entry") {
  const fs::path dir = temp_dir("cache_race");
  const ResultCache cache(dir);
  const std::string key =
      ResultCache::canonical_key("flatness_hp", 1.0, 4.0, 1024.0, 3.0, "exact", 1);
  std::vector<std::thread> writers;
  for (int t = 0; t < 8; ++t)
    writers.emplace_back([&, t] {
      ResultRecord r = sample_record();
      r.values["writer"] = t;
      for (int i = 0; i < 25; ++i) cache.cache_put(key, r);
    });
  for (auto& th : writers) th.join();

  int files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++files;
    CHECK(e.path().extension() == ".json");  // no stray temp files
  }
  CHECK(files == 1);
  CHECK(cache.cache_get(key).has_value());
  fs::remove_all(dir);
}

TEST_CASE("cache from environment configuration") {
  if (std::getenv(cache_dir_env_var) == nullptr)
    CHECK_FALSE(ResultCache::configure("").has_value());
  const fs::path dir = temp_dir("cache_env");
  const auto cache = ResultCache::configure(dir.string());
  REQUIRE(cache.has_value());
  CHECK(cache->dir() == dir);
  fs::remove_all(dir);
}
