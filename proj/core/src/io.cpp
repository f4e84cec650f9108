#include "ipmix/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "ipmix/types.hpp"

namespace ipmix {

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

void CsvTable::add_row(std::vector<double> row) {
  if (!header.empty() && row.size() != header.size()) throw ShapeError("csv row width does not match header");
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { atomic_write(path, str()); }

std::string pgm_bytes(const std::vector<double>& values, int width, int height, const PgmMapping& map) {
  if (width <= 0 || height <= 0 || values.size() != std::size_t(width) * height)
    throw ShapeError("pgm dimensions do not match the data");
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  const double span = map.hi - map.lo;
  out.reserve(out.size() + values.size());
  for (double v : values) {
    double s = span > 0.0 ? (v - map.lo) / span : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    out += char(static_cast<unsigned char>(std::lround(255.0 * s)));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const std::vector<double>& values, int width, int height,
               const PgmMapping& map) {
  atomic_write(path, pgm_bytes(values, width, height, map));
  KeyValueText meta;
  meta.set("image", path.filename().string());
  meta.set("width", std::to_string(width));
  meta.set("height", std::to_string(height));
  meta.set("value_at_0", map.lo);
  meta.set("value_at_255", map.hi);
  atomic_write(path.string() + ".meta", meta.str());
}

PgmMapping range_of(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

void KeyValueText::set(const std::string& key, const std::string& value) {
  for (auto& kv : items_)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  items_.emplace_back(key, value);
}

std::string KeyValueText::str() const {
  std::string out;
  for (const auto& [k, v] : items_) out += k + ": " + v + "\n";
  return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string());
    os.write(content.data(), std::streamsize(content.size()));
    if (!os) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace ipmix
