#pragma once

#include <filesystem>
#include <string>

#include "lanecurate/coreset.hpp"

namespace lanecurate {

// LSIM: "LSIM", version byte 1, u32 LE vertex count, condensed weights as
// f64 LE, then each label as u32 LE byte length followed by UTF-8 bytes.
//
// The stored values are not range-checked on read beyond finiteness, so a
// file may hold raw dissimilarities as well as graph weights.

struct LsimMatrix {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<std::string> labels;
  friend bool operator==(const LsimMatrix&, const LsimMatrix&) = default;
};

std::string encode_lsim(const LsimMatrix& m);
LsimMatrix decode_lsim(const std::string& bytes, const std::string& name = "<memory>");
void write_lsim(const std::filesystem::path& path, const LsimMatrix& m);
LsimMatrix read_lsim(const std::filesystem::path& path);

}  // namespace lanecurate
