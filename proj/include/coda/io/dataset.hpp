#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "coda/core/space.hpp"

namespace coda::io {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Layout (little-endian):
//   "CODA"  u16 version  u32 header_len  header JSON  u64 count  records
// header = {"space": {...}, "meta": {...}}; each record is s, a, s' as f64,
// reward f64, terminal u8, provenance u8.
inline constexpr std::uint16_t kDatasetVersion = 1;

struct DatasetFile {
  SpacePtr space;
  nlohmann::json meta = nlohmann::json::object();  // e.g. the generating environment
  std::vector<Transition> transitions;
};

void write_dataset(std::ostream& out, const DatasetFile& data);
void save_dataset(const std::string& path, const DatasetFile& data);
DatasetFile read_dataset(std::istream& in);
DatasetFile load_dataset(const std::string& path);

}  // namespace coda::io
