#include "coda/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace coda::nn {

namespace {

template <typename U>
void write_le(std::ostream& out, U v) {
  std::array<char, sizeof(U)> buf;
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
  if (!out) throw CheckpointError("write failed");
}

template <typename U>
U read_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> buf;
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) throw CheckpointError("unexpected end of stream");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

std::vector<int> shape_of(const nlohmann::json& j) {
  std::vector<int> s;
  for (const auto& d : j) s.push_back(d.get<int>());
  return s;
}

struct RawHeader {
  CheckpointHeader header;
  nlohmann::json params;
};

RawHeader read_raw_header(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SNDY", 4) != 0) throw CheckpointError("not a checkpoint (bad magic)");
  const auto version = read_u16(in);
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto len = read_u32(in);
  std::string text(len, '\0');
  in.read(text.data(), len);
  if (!in) throw CheckpointError("truncated checkpoint header");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint header: ") + e.what());
  }
  RawHeader raw;
  raw.header.kind = j.value("kind", "");
  raw.header.config = j.value("config", nlohmann::json::object());
  raw.params = j.value("params", nlohmann::json::array());
  return raw;
}

}  // namespace

void write_u16(std::ostream& out, std::uint16_t v) { write_le(out, v); }
void write_u32(std::ostream& out, std::uint32_t v) { write_le(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { write_le(out, v); }
void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }
std::uint16_t read_u16(std::istream& in) { return read_le<std::uint16_t>(in); }
std::uint32_t read_u32(std::istream& in) { return read_le<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return read_le<std::uint64_t>(in); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_le<std::uint64_t>(in)); }

void write_checkpoint(std::ostream& out, const CheckpointHeader& header, const std::vector<Parameter*>& params) {
  nlohmann::json j;
  j["kind"] = header.kind;
  j["config"] = header.config.is_null() ? nlohmann::json::object() : header.config;
  j["params"] = nlohmann::json::array();
  for (const Parameter* p : params) j["params"].push_back({{"name", p->name}, {"shape", p->value.shape()}});
  const std::string text = j.dump();
  out.write("SNDY", 4);
  write_u16(out, kCheckpointVersion);
  write_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Parameter* p : params) {
    for (double v : p->value.data()) write_f64(out, v);
  }
  if (!out) throw CheckpointError("write failed");
}

void save_checkpoint(const std::string& path, const CheckpointHeader& header, const std::vector<Parameter*>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
  write_checkpoint(out, header, params);
}

CheckpointHeader read_checkpoint_header(std::istream& in) { return read_raw_header(in).header; }

CheckpointHeader peek_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open '" + path + "'");
  return read_checkpoint_header(in);
}

CheckpointHeader read_checkpoint(std::istream& in, const std::vector<Parameter*>& params) {
  RawHeader raw = read_raw_header(in);
  if (raw.params.size() != params.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(raw.params.size()) + " tensors, model expects " +
                          std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& entry = raw.params[k];
    Parameter& p = *params[k];
    if (entry.value("name", "") != p.name || shape_of(entry.at("shape")) != p.value.shape()) {
      throw CheckpointError("checkpoint tensor " + std::to_string(k) + " does not match parameter '" + p.name + "'");
    }
  }
  for (Parameter* p : params) {
    for (double& v : p->value.data()) v = read_f64(in);
  }
  return raw.header;
}

CheckpointHeader load_checkpoint(const std::string& path, const std::vector<Parameter*>& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open '" + path + "'");
  return read_checkpoint(in, params);
}

}  // namespace coda::nn
