#include "lanecurate/similarity_file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "file_util.hpp"
#include "lanecurate/error.hpp"

namespace lanecurate {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_f64(std::string& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& name) : bytes_(bytes), name_(name) {}

  const unsigned char* take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw ParseError(name_ + ": truncated LSIM file");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += n;
    return p;
  }
  std::uint32_t u32() {
    const auto* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  double f64() {
    const auto* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(v);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  const std::string& name_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_lsim(const LsimMatrix& m) {
  if (m.values.size() != SimilarityGraph::condensed_size(m.n) || m.labels.size() != m.n) {
    throw ParameterError("LSIM matrix shape is inconsistent");
  }
  std::string out = "LSIM";
  out.push_back(1);
  put_u32(out, static_cast<std::uint32_t>(m.n));
  for (double v : m.values) put_f64(out, v);
  for (const auto& label : m.labels) {
    put_u32(out, static_cast<std::uint32_t>(label.size()));
    out += label;
  }
  return out;
}

LsimMatrix decode_lsim(const std::string& bytes, const std::string& name) {
  Reader r(bytes, name);
  const auto* magic = r.take(4);
  if (std::memcmp(magic, "LSIM", 4) != 0) throw ParseError(name + ": not an LSIM file");
  const auto version = *r.take(1);
  if (version != 1) throw ParseError(name + ": unsupported LSIM version " + std::to_string(version));
  LsimMatrix m;
  m.n = r.u32();
  const std::size_t count = SimilarityGraph::condensed_size(m.n);
  if (count > bytes.size() / 8) throw ParseError(name + ": truncated LSIM file");
  m.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = r.f64();
    if (!std::isfinite(v)) throw ParseError(name + ": non-finite value at index " + std::to_string(i));
    m.values.push_back(v);
  }
  m.labels.reserve(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    const std::uint32_t len = r.u32();
    const auto* p = r.take(len);
    m.labels.emplace_back(reinterpret_cast<const char*>(p), len);
  }
  if (!r.done()) throw ParseError(name + ": trailing bytes after LSIM labels");
  return m;
}

void write_lsim(const std::filesystem::path& path, const LsimMatrix& m) {
  detail::write_file(path, encode_lsim(m));
}

LsimMatrix read_lsim(const std::filesystem::path& path) {
  return decode_lsim(detail::read_file(path), path.string());
}

}  // namespace lanecurate
