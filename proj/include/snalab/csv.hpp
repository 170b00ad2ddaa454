#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snalab {

inline constexpr std::string_view kSchemaLine = "# snalab-schema v1";

// CSV file with the schema line, optional `# key=value` comments and one flush per row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
            const std::vector<std::pair<std::string, std::string>>& comments = {});

  void row(const std::vector<std::string>& cells);
  template <class... T>
  void values(const T&... v) {
    row({cell(v)...});
  }

  static std::string cell(double v);
  static std::string cell(long double v) { return cell(static_cast<double>(v)); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(unsigned long v) { return std::to_string(v); }
  static std::string cell(unsigned long long v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

// Ordered `key=value` text, written when the object is saved.
class KeyValueFile {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, std::int64_t value);
  void set(std::string key, int value) { set(std::move(key), static_cast<std::int64_t>(value)); }
  void set(std::string key, bool value) { set(std::move(key), std::string(value ? "pass" : "fail")); }
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace snalab
