#pragma once
// CSV emission with self-describing comment headers.  Numbers use '.' as the
// decimal separator and 17 significant digits so re-runs diff byte-wise.

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shmod/util.hpp"
#include "shmod/version.hpp"

namespace shmod::io {

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
  }

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  // standard provenance block carried by every output file
  void provenance(const std::string& experiment, std::uint64_t config_hash,
                  std::uint64_t seed) {
    comment("artifact: shmod " + std::string(version));
    comment("experiment: " + experiment);
    comment("config-hash: " + util::hex16(config_hash));
    comment("seed: " + std::to_string(seed));
  }

  void columns(const std::vector<std::string>& names) { line(names); }
  void row(const std::vector<std::string>& cells) { line(cells); }

  static std::string num(double v) { return util::fmt17(v); }
  static std::string num(int v) { return std::to_string(v); }
  static std::string num(std::uint64_t v) { return std::to_string(v); }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  std::ofstream out_;
};

}  // namespace shmod::io
