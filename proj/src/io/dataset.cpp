#include "coda/io/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "coda/core/space_json.hpp"
#include "coda/nn/checkpoint.hpp"

namespace coda::io {

using nn::read_f64;
using nn::read_u16;
using nn::read_u32;
using nn::read_u64;
using nn::write_f64;
using nn::write_u16;
using nn::write_u32;
using nn::write_u64;

void write_dataset(std::ostream& out, const DatasetFile& data) {
  if (!data.space) throw DatasetError("write_dataset: missing space");
  const FactoredSpace& space = *data.space;
  const std::string header = nlohmann::json{{"space", space_to_json(space)}, {"meta", data.meta}}.dump();
  out.write("CODA", 4);
  write_u16(out, kDatasetVersion);
  write_u32(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  write_u64(out, data.transitions.size());
  for (const auto& t : data.transitions) {
    if (!(t.space() == space)) throw DatasetError("write_dataset: transition does not match the space");
    for (double v : t.s.values()) write_f64(out, v);
    for (double v : t.a.values()) write_f64(out, v);
    for (double v : t.s_next.values()) write_f64(out, v);
    write_f64(out, t.reward);
    out.put(static_cast<char>(t.terminal ? 1 : 0));
    out.put(static_cast<char>(t.provenance));
  }
  if (!out) throw DatasetError("write_dataset: write failed");
}

void save_dataset(const std::string& path, const DatasetFile& data) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot open '" + path + "' for writing");
  write_dataset(out, data);
}

DatasetFile read_dataset(std::istream& in) {
  try {
    char magic[4];
    if (!in.read(magic, 4) || std::string(magic, 4) != "CODA") throw DatasetError("not a dataset file (bad magic)");
    const std::uint16_t version = read_u16(in);
    if (version != kDatasetVersion) throw DatasetError("unsupported dataset version " + std::to_string(version));
    const std::uint32_t len = read_u32(in);
    std::string header(len, '\0');
    if (!in.read(header.data(), len)) throw DatasetError("truncated dataset header");
    DatasetFile d;
    const auto j = nlohmann::json::parse(header);
    d.space = space_from_json(j.at("space"));
    d.meta = j.value("meta", nlohmann::json::object());
    const std::uint64_t count = read_u64(in);
    const int ds = d.space->state_dim();
    const int da = d.space->action_dim();
    d.transitions.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
    for (std::uint64_t k = 0; k < count; ++k) {
      auto read_vec = [&](int n) {
        std::vector<double> v(n);
        for (auto& x : v) x = read_f64(in);
        return v;
      };
      FactoredVector s(d.space, VectorKind::State, read_vec(ds));
      FactoredVector a(d.space, VectorKind::Action, read_vec(da));
      FactoredVector sn(d.space, VectorKind::State, read_vec(ds));
      const double reward = read_f64(in);
      const int terminal = in.get();
      const int prov = in.get();
      if (!in) throw DatasetError("truncated record " + std::to_string(k) + " of " + std::to_string(count));
      if (terminal > 1 || prov > static_cast<int>(Provenance::IdentityCoda)) {
        throw DatasetError("corrupt flags in record " + std::to_string(k));
      }
      d.transitions.emplace_back(std::move(s), std::move(a), std::move(sn), reward, terminal == 1,
                                 static_cast<Provenance>(prov));
    }
    if (in.peek() != std::char_traits<char>::eof()) throw DatasetError("trailing bytes after the last record");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("malformed dataset header: ") + e.what());
  } catch (const nn::CheckpointError& e) {
    throw DatasetError(std::string("truncated dataset: ") + e.what());
  }
}

DatasetFile load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open '" + path + "'");
  return read_dataset(in);
}

}  // namespace coda::io
