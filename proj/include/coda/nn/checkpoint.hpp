#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "coda/nn/tape.hpp"

namespace coda::nn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Layout:
//   "SNDY"  u16 version  u32 header_len  header (UTF-8 JSON)  f64 LE blobs
// The header is {"kind": str, "config": obj, "params": [{"name", "shape"}...]}
// and the blobs follow in the listed order.
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct CheckpointHeader {
  std::string kind;
  nlohmann::json config;
};

void write_checkpoint(std::ostream& out, const CheckpointHeader& header, const std::vector<Parameter*>& params);
void save_checkpoint(const std::string& path, const CheckpointHeader& header, const std::vector<Parameter*>& params);

/// Reads only the header, so callers can construct the right model first.
CheckpointHeader read_checkpoint_header(std::istream& in);
CheckpointHeader peek_checkpoint(const std::string& path);

/// Fills `params` in order. Names and shapes must match the stored ones.
CheckpointHeader read_checkpoint(std::istream& in, const std::vector<Parameter*>& params);
CheckpointHeader load_checkpoint(const std::string& path, const std::vector<Parameter*>& params);

// Little-endian primitives, shared with the dataset format.
void write_u16(std::ostream& out, std::uint16_t v);
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint16_t read_u16(std::istream& in);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);

}  // namespace coda::nn
