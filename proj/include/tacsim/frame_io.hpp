#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tacsim/sensor_model.hpp"

namespace tacsim {

using Json = nlohmann::ordered_json;

// One line of a frame stream. `episode`, `step` and `stage` are optional
// routing fields; readers ignore keys they do not know.
struct FrameRecord {
  std::string pad_id = "left";
  Resolution resolution = Resolution::kPooled;
  TaxelFrame frame;
  std::optional<std::int64_t> episode;
  std::optional<std::int64_t> step;
  std::optional<std::string> stage;
};

// Forces are written as a row-major list of [fx, fy, fz] triples. Numbers use
// the shortest decimal form that parses back to the identical double.
Json frame_to_json(const FrameRecord& rec);
FrameRecord frame_from_json(const Json& j);

void write_frame_record(std::ostream& os, const FrameRecord& rec);

// Reads one record per non-empty line. Errors carry the 0-based record index.
std::vector<FrameRecord> read_frame_records(std::istream& is);
std::vector<FrameRecord> read_frame_file(const std::string& path);
void write_frame_file(const std::string& path,
                      const std::vector<FrameRecord>& records);

Json forces_to_json(const TaxelFrame& f);
TaxelFrame forces_from_json(const Json& j, int rows, int cols);

}  // namespace tacsim
