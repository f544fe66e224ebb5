#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsflat/fitting.hpp"

namespace rsflat {

using ordered_json = nlohmann::ordered_json;

// One persisted computation result.  Round-trips losslessly through the JSON
// emitter; the -inf spectrum sentinel is serialized as the string "-inf"
// (JSON has no infinities).
struct ResultRecord {
  int schema_version = 1;
  std::string quantity;
  ordered_json parameters;     // flat object of numeric/string parameters
  ordered_json values;         // payload (arrays or object)
  ordered_json certification;  // quadrature flags, tail bounds
  std::string timestamp;       // ISO-8601 UTC; excluded from cache keys

  bool operator==(const ResultRecord&) const = default;
};

std::string iso8601_utc_now();

// Emission encodes non-finite numbers ("-inf"/"inf"/exception on NaN);
// parsing restores them.
ordered_json record_to_json(const ResultRecord& r);
ResultRecord record_from_json(const ordered_json& j);

std::string emit_record(const ResultRecord& r);      // single JSON object, one line
ResultRecord parse_record(const std::string& text);  // inverse

// CSV: header mandatory, '.' decimal, finite numbers only (io_error otherwise).
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);  // %.12g, locale-independent

// ---- Result cache ----
//
// Keys are derived from a canonical serialization of
// (quantity, s, p, scale, a_param, grid policy, schema_version); entries are
// written atomically (temp file + rename), and corrupt entries read as misses.
class ResultCache {
public:
  // Uses `dir` if nonempty, else the RSFLAT_CACHE_DIR environment variable.
  // Returns nullopt when neither is configured.
  static std::optional<ResultCache> configure(const std::string& dir);

  explicit ResultCache(std::filesystem::path dir);

  static std::string canonical_key(const std::string& quantity, double s, double p,
                                   double scale, double a_param,
                                   const std::string& grid_policy, int schema_version);

  std::optional<ResultRecord> cache_get(const std::string& key) const;
  void cache_put(const std::string& key, const ResultRecord& record) const;

  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path entry_path(const std::string& key) const;
  std::filesystem::path dir_;
};

// Environment variable consulted when no --cache-dir flag is given.
inline constexpr const char* cache_dir_env_var = "RSFLAT_CACHE_DIR";

}  // namespace rsflat
