#include "rsflat/io.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

#include "rsflat/errors.hpp"

namespace rsflat {

namespace fs = std::filesystem;

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

// Replace non-finite leaves by sentinel strings so the document stays valid
// JSON; NaN is a bug upstream and is rejected.
ordered_json encode_nonfinite(const ordered_json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isnan(v)) throw io_error("record contains NaN");
    if (std::isinf(v)) return ordered_json(v > 0 ? "inf" : "-inf");
    return j;
  }
  if (j.is_object()) {
    ordered_json out = ordered_json::object();
    for (const auto& [k, v] : j.items()) out[k] = encode_nonfinite(v);
    return out;
  }
  if (j.is_array()) {
    ordered_json out = ordered_json::array();
    for (const auto& v : j) out.push_back(encode_nonfinite(v));
    return out;
  }
  return j;
}

ordered_json decode_nonfinite(const ordered_json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "-inf") return ordered_json(-std::numeric_limits<double>::infinity());
    if (s == "inf") return ordered_json(std::numeric_limits<double>::infinity());
    return j;
  }
  if (j.is_object()) {
    ordered_json out = ordered_json::object();
    for (const auto& [k, v] : j.items()) out[k] = decode_nonfinite(v);
    return out;
  }
  if (j.is_array()) {
    ordered_json out = ordered_json::array();
    for (const auto& v : j) out.push_back(decode_nonfinite(v));
    return out;
  }
  return j;
}

}  // namespace

ordered_json record_to_json(const ResultRecord& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["quantity"] = r.quantity;
  j["parameters"] = encode_nonfinite(r.parameters);
  j["values"] = encode_nonfinite(r.values);
  j["certification"] = encode_nonfinite(r.certification);
  j["timestamp"] = r.timestamp;
  return j;
}

ResultRecord record_from_json(const ordered_json& j) {
  ResultRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  r.quantity = j.at("quantity").get<std::string>();
  r.parameters = decode_nonfinite(j.at("parameters"));
  r.values = decode_nonfinite(j.at("values"));
  r.certification = decode_nonfinite(j.at("certification"));
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

std::string emit_record(const ResultRecord& r) { return record_to_json(r).dump(); }

ResultRecord parse_record(const std::string& text) {
  return record_from_json(ordered_json::parse(text));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw io_error("csv row width mismatch in " + path.string());
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!std::isfinite(row[i]))
        throw io_error("non-finite value refused in CSV " + path.string());
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << "\n";
  }
  if (!out) throw io_error("write failed: " + path.string());
}

// ---- cache ----

std::optional<ResultCache> ResultCache::configure(const std::string& dir) {
  if (!dir.empty()) return ResultCache(fs::path(dir));
  if (const char* env = std::getenv(cache_dir_env_var); env != nullptr && *env != '\0')
    return ResultCache(fs::path(env));
  return std::nullopt;
}

ResultCache::ResultCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw io_error("cannot create cache dir " + dir_.string() + ": " + ec.message());
}

std::string ResultCache::canonical_key(const std::string& quantity, double s, double p,
                                       double scale, double a_param,
                                       const std::string& grid_policy,
                                       int schema_version) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s|s=%.17g|p=%.17g|scale=%.17g|A=%.17g|grid=%s|v=%d",
                quantity.c_str(), s, p, scale, a_param, grid_policy.c_str(),
                schema_version);
  return buf;
}

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

fs::path ResultCache::entry_path(const std::string& key) const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(key)));
  return dir_ / (std::string(buf) + ".json");
}

std::optional<ResultRecord> ResultCache::cache_get(const std::string& key) const {
  const fs::path path = entry_path(key);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    ordered_json j = ordered_json::parse(in);
    if (j.at("key").get<std::string>() != key) return std::nullopt;  // hash collision
    return record_from_json(j.at("record"));
  } catch (const std::exception& e) {
    std::cerr << "rsflat: corrupt cache entry " << path << " treated as miss ("
              << e.what() << ")\n";
    return std::nullopt;
  }
}

void ResultCache::cache_put(const std::string& key, const ResultRecord& record) const {
  const fs::path path = entry_path(key);
  static std::atomic<unsigned> counter{0};
  char suffix[64];
  std::snprintf(suffix, sizeof suffix, ".tmp.%ld.%u", static_cast<long>(::getpid()),
                counter.fetch_add(1));
  const fs::path tmp = path.string() + suffix;

  ordered_json j;
  j["key"] = key;
  j["record"] = record_to_json(record);
  {
    std::ofstream out(tmp);
    if (!out) throw io_error("cannot open cache temp file " + tmp.string());
    out << j.dump();
    if (!out) throw io_error("cache write failed: " + tmp.string());
  }
  // Atomic publish: concurrent writers of the same key race benignly, the
  // last rename wins and the file is always a complete document.
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw io_error("cache rename failed: " + ec.message());
  }
}

}  // namespace rsflat
