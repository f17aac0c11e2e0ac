#include "forgelight/jsonio.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace forgelight {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("JSON parse failure in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

void require_keys_subset(const Json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) {
      if (it.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

const Json& require_key(const Json& obj, const std::string& where, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key))
    throw ConfigError(where + ": missing key \"" + key + "\"");
  return obj.at(key);
}

double require_number(const Json& obj, const std::string& where, const std::string& key) {
  const Json& v = require_key(obj, where, key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const Json& obj, const std::string& key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return obj.at(key).get<double>();
}

int require_int(const Json& obj, const std::string& where, const std::string& key) {
  const Json& v = require_key(obj, where, key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

int int_or(const Json& obj, const std::string& key, int fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return obj.at(key).get<int>();
}

std::string require_string(const Json& obj, const std::string& where, const std::string& key) {
  const Json& v = require_key(obj, where, key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::string string_or(const Json& obj, const std::string& key, const std::string& fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return obj.at(key).get<std::string>();
}

bool bool_or(const Json& obj, const std::string& key, bool fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return obj.at(key).get<bool>();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ",";
    out << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_full(row[i]);
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_blob_file(const std::string& path, const Json& header,
                     const std::vector<double>& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  const char magic[8] = {'F', 'L', 'B', 'I', 'N', '1', '\n', '\0'};
  out.write(magic, 8);
  std::string h = header.dump();
  std::uint64_t len = h.size();
  out.write(reinterpret_cast<const char*>(&len), 8);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
}

void read_blob_file(const std::string& path, Json& header, std::vector<double>& payload) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "FLBIN1\n", 7) != 0)
    throw ConfigError("bad model file magic: " + path);
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 8);
  std::string h(len, '\0');
  in.read(h.data(), static_cast<std::streamsize>(len));
  if (!in) throw ConfigError("truncated model file: " + path);
  header = Json::parse(h);
  payload.clear();
  double v;
  while (in.read(reinterpret_cast<char*>(&v), sizeof(double))) payload.push_back(v);
}

}  // namespace forgelight
