#include "tacsim/frame_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "tacsim/errors.hpp"

namespace tacsim {

Json forces_to_json(const TaxelFrame& f) {
  Json forces = Json::array();
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j)
      forces.push_back({f(i, j, 0), f(i, j, 1), f(i, j, 2)});
  return forces;
}

TaxelFrame forces_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows * cols))
    throw DataError("forces list does not match rows x cols");
  TaxelFrame f(rows, cols);
  std::size_t k = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++k) {
      const Json& t = j[k];
      if (!t.is_array() || t.size() != 3)
        throw DataError("force entry is not a 3-tuple");
      for (int a = 0; a < 3; ++a) {
        if (!t[a].is_number()) throw DataError("force component not numeric");
        const double v = t[a].get<double>();
        if (!std::isfinite(v)) throw DataError("non-finite force component");
        f(r, c, a) = v;
      }
    }
  return f;
}

Json frame_to_json(const FrameRecord& rec) {
  Json j;
  j["pad_id"] = rec.pad_id;
  j["resolution"] = to_string(rec.resolution);
  j["rows"] = rec.frame.rows();
  j["cols"] = rec.frame.cols();
  if (rec.episode) j["episode"] = *rec.episode;
  if (rec.step) j["step"] = *rec.step;
  if (rec.stage) j["stage"] = *rec.stage;
  j["forces"] = forces_to_json(rec.frame);
  return j;
}

FrameRecord frame_from_json(const Json& j) {
  try {
    FrameRecord rec;
    rec.pad_id = j.at("pad_id").get<std::string>();
    rec.resolution = resolution_from_string(j.at("resolution").get<std::string>());
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    if (rows <= 0 || cols <= 0) throw DataError("non-positive frame shape");
    rec.frame = forces_from_json(j.at("forces"), rows, cols);
    if (j.contains("episode")) rec.episode = j["episode"].get<std::int64_t>();
    if (j.contains("step")) rec.step = j["step"].get<std::int64_t>();
    if (j.contains("stage")) rec.stage = j["stage"].get<std::string>();
    return rec;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed frame record: ") + e.what());
  }
}

void write_frame_record(std::ostream& os, const FrameRecord& rec) {
  os << frame_to_json(rec).dump() << '\n';
}

std::vector<FrameRecord> read_frame_records(std::istream& is) {
  std::vector<FrameRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(frame_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw DataError("record " + std::to_string(out.size()) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("record " + std::to_string(out.size()) + ": " + e.what());
    }
  }
  return out;
}

std::vector<FrameRecord> read_frame_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open frame file " + path);
  return read_frame_records(in);
}

void write_frame_file(const std::string& path,
                      const std::vector<FrameRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write frame file " + path);
  for (const auto& r : records) write_frame_record(out, r);
}

}  // namespace tacsim
