#include "snalab/csv.hpp"

#include <stdexcept>

#include "snalab/config.hpp"

namespace snalab {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     const std::vector<std::pair<std::string, std::string>>& comments)
    : out_(path, std::ios::binary | std::ios::trunc), ncols_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << kSchemaLine << '\n';
  for (const auto& [k, v] : comments) out_ << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  out_.flush();
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  out_.flush();
}

std::string CsvWriter::cell(double v) { return format_number(v); }

void KeyValueFile::set(std::string key, std::string value) {
  for (auto& e : entries_) {
    if (e.first == key) {
      e.second = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueFile::set(std::string key, double value) { set(std::move(key), format_number(value)); }
void KeyValueFile::set(std::string key, std::int64_t value) { set(std::move(key), std::to_string(value)); }

std::string KeyValueFile::str() const {
  std::string s;
  for (const auto& [k, v] : entries_) s += k + "=" + v + "\n";
  return s;
}

void KeyValueFile::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
}

}  // namespace snalab
