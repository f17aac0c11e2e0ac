#ifndef FORGELIGHT_JSONIO_HPP
#define FORGELIGHT_JSONIO_HPP

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <vector>

#include "forgelight/common.hpp"

namespace forgelight {

using Json = nlohmann::json;

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

// Strict schema helpers. Unknown keys are errors: silent typos are the
// top reproducibility hazard, so every object must declare its full key
// set. `where` is the dotted path used in error messages.

void require_keys_subset(const Json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed);

const Json& require_key(const Json& obj, const std::string& where,
                        const std::string& key);

double require_number(const Json& obj, const std::string& where, const std::string& key);
double number_or(const Json& obj, const std::string& key, double fallback);
int require_int(const Json& obj, const std::string& where, const std::string& key);
int int_or(const Json& obj, const std::string& key, int fallback);
std::string require_string(const Json& obj, const std::string& where, const std::string& key);
std::string string_or(const Json& obj, const std::string& key, const std::string& fallback);
bool bool_or(const Json& obj, const std::string& key, bool fallback);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// CSV with a header row; all values written with max precision so reruns
// are byte-identical.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_full(double v);

// Model blobs: a JSON header followed by raw little-endian doubles.
// Layout: magic "FLBIN1\n", u64 header byte count, header bytes, payload.
void write_blob_file(const std::string& path, const Json& header,
                     const std::vector<double>& payload);
void read_blob_file(const std::string& path, Json& header, std::vector<double>& payload);

}  // namespace forgelight

#endif
