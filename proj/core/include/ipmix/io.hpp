#ifndef IPMIX_IO_HPP
#define IPMIX_IO_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ipmix {

// 17 significant digits, the C locale decimal point; -0 prints as 0.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
};

// Values mapped affinely from [lo, hi] onto 0..255; lo == hi writes zeros.
struct PgmMapping {
  double lo = 0.0;
  double hi = 1.0;
};
// values are row-major with row 0 at the top of the image.
std::string pgm_bytes(const std::vector<double>& values, int width, int height, const PgmMapping& map);
// Writes path and path + ".meta" holding the mapping.
void write_pgm(const std::filesystem::path& path, const std::vector<double>& values, int width, int height,
               const PgmMapping& map);
PgmMapping range_of(const std::vector<double>& values);

// key: value lines in insertion order.
class KeyValueText {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  std::string str() const;
  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

// Writes to a temporary sibling and renames over the target.
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace ipmix

#endif
