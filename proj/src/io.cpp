#include "starcert/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "starcert/error.hpp"

namespace starcert {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

template <typename T>
T byteswap(T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  std::memcpy(&v, b, sizeof(T));
  return v;
}

template <typename T>
std::vector<T> read_raw(const fs::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::MissingFile, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != count * sizeof(T)) {
    std::ostringstream os;
    os << "size mismatch: " << path.string() << " has " << bytes << " bytes, expected "
       << count * sizeof(T);
    fail(ErrorCode::SizeMismatch, os.str());
  }
  in.seekg(0);
  std::vector<T> out(count);
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(bytes));
  if (!in) fail(ErrorCode::Io, "failed reading " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (T& v : out) v = byteswap(v);
  }
  return out;
}

template <typename T>
void write_raw(const fs::path& path, const std::vector<T>& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    std::vector<T> swapped(values);
    for (T& v : swapped) v = byteswap(v);
    out.write(reinterpret_cast<const char*>(swapped.data()),
              static_cast<std::streamsize>(swapped.size() * sizeof(T)));
  } else {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(T)));
  }
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

void expect_size(const fs::path& path, std::size_t expected) {
  if (!fs::exists(path)) fail(ErrorCode::MissingFile, "missing file " + path.string());
  const auto actual = fs::file_size(path);
  if (actual != expected) {
    std::ostringstream os;
    os << "size mismatch: " << path.string() << " has " << actual << " bytes, expected "
       << expected;
    fail(ErrorCode::SizeMismatch, os.str());
  }
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::InvalidManifest, std::string("manifest lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::InvalidManifest, std::string("manifest field '") + key + "' has the wrong type");
  }
}

std::string file_ref(const json& entry, const char* key) {
  if (!entry.contains(key)) return {};
  if (!entry[key].is_string()) {
    fail(ErrorCode::InvalidManifest, std::string("file entry '") + key + "' must be a string");
  }
  return entry[key].get<std::string>();
}

double parse_double(const std::string& text, const fs::path& path, int line) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": cannot parse number '" << text << "'";
    fail(ErrorCode::InvalidSample, os.str());
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string csv_header(int n_rays) {
  std::string h = "pass,cx,cy";
  for (int i = 0; i < n_rays; ++i) h += ",r" + std::to_string(i);
  return h;
}

// -- report encoding -------------------------------------------------------

json polygon_json(const RadialPolygon& p) {
  return {{"cx", p.cx}, {"cy", p.cy}, {"radii", p.radii}};
}

RadialPolygon polygon_from(const json& j) {
  return RadialPolygon(j.at("cx").get<double>(), j.at("cy").get<double>(),
                       j.at("radii").get<std::vector<double>>());
}

// Row-major runs inside the box, alternating unset/set, starting with unset.
json mask_json(const BitMask& m) {
  const Box b = m.bounds();
  std::vector<std::size_t> runs;
  bool state = false;
  std::size_t run = 0;
  for (int y = b.y0; y < b.y1; ++y) {
    for (int x = b.x0; x < b.x1; ++x) {
      if (m.test(x, y) != state) {
        runs.push_back(run);
        run = 0;
        state = !state;
      }
      ++run;
    }
  }
  runs.push_back(run);
  return {{"box", {b.x0, b.y0, b.x1, b.y1}}, {"runs", runs}};
}

BitMask mask_from(const json& j, int width, int height) {
  const auto box = j.at("box").get<std::vector<int>>();
  if (box.size() != 4) fail(ErrorCode::MalformedJson, "mask box needs four values");
  const Box b{box[0], box[1], box[2], box[3]};
  BitMask m(width, height, b);
  std::size_t pos = 0;
  bool state = false;
  const std::size_t w = static_cast<std::size_t>(b.width());
  for (std::size_t run : j.at("runs").get<std::vector<std::size_t>>()) {
    for (std::size_t k = 0; k < run; ++k, ++pos) {
      if (state) m.set(b.x0 + static_cast<int>(pos % w), b.y0 + static_cast<int>(pos / w));
    }
    state = !state;
  }
  return m;
}

json contours_json(const std::vector<Contour>& cs) {
  json out = json::array();
  for (const Contour& c : cs) {
    json pts = json::array();
    for (const Point& p : c) pts.push_back({p.x, p.y});
    out.push_back(std::move(pts));
  }
  return out;
}

std::vector<Contour> contours_from(const json& j) {
  std::vector<Contour> out;
  for (const json& c : j) {
    Contour pts;
    for (const json& p : c) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    out.push_back(std::move(pts));
  }
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json calibration_json(const CalibrationReport& r) {
  json bins = json::array();
  for (const auto& b : r.bins) {
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"count", b.count},
                    {"mean_confidence", b.mean_confidence},
                    {"accuracy", b.accuracy}});
  }
  return {{"pearson_r", optional_json(r.pearson_r)},
          {"ece", r.ece},
          {"mce", r.mce},
          {"matched", r.matched},
          {"unmatched", r.unmatched},
          {"false_negatives", r.false_negatives},
          {"bins", bins}};
}

CalibrationReport calibration_from(const json& j) {
  CalibrationReport r;
  if (!j.at("pearson_r").is_null()) r.pearson_r = j.at("pearson_r").get<double>();
  r.ece = j.at("ece").get<double>();
  r.mce = j.at("mce").get<double>();
  r.matched = j.at("matched").get<std::size_t>();
  r.unmatched = j.at("unmatched").get<std::size_t>();
  r.false_negatives = j.at("false_negatives").get<std::size_t>();
  for (const json& b : j.at("bins")) {
    r.bins.push_back({b.at("lo").get<double>(), b.at("hi").get<double>(),
                      b.at("count").get<std::size_t>(), b.at("mean_confidence").get<double>(),
                      b.at("accuracy").get<double>()});
  }
  return r;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(ErrorCode::Io, "cannot format number");
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Manifest

Manifest read_manifest(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCode::MissingFile, "missing manifest " + path.string());
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedJson, "malformed manifest " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::MalformedJson, "manifest must be a JSON object");

  Manifest m;
  m.base_dir = path.parent_path();
  m.version = required<int>(j, "version");
  if (m.version != kManifestVersion) {
    fail(ErrorCode::UnsupportedVersion,
         "unsupported manifest version " + std::to_string(m.version));
  }
  const auto mode = required<std::string>(j, "mode");
  if (mode == "dense") {
    m.mode = SampleMode::Dense;
  } else if (mode == "instances") {
    m.mode = SampleMode::Instances;
  } else {
    fail(ErrorCode::InvalidManifest, "unknown mode '" + mode + "'");
  }
  m.width = required<int>(j, "width");
  m.height = required<int>(j, "height");
  m.n_rays = required<int>(j, "n_rays");
  m.passes = required<int>(j, "passes");
  if (m.width <= 0 || m.height <= 0) fail(ErrorCode::InvalidManifest, "width and height must be > 0");
  if (m.n_rays < 3) fail(ErrorCode::InvalidManifest, "n_rays must be >= 3");
  if (m.passes < 1) fail(ErrorCode::InvalidManifest, "passes must be >= 1");
  const json files = required<json>(j, "files");
  if (!files.is_array() || files.size() != static_cast<std::size_t>(m.passes)) {
    fail(ErrorCode::InvalidManifest, "files must list exactly one entry per pass");
  }
  const std::size_t pixels = std::size_t(m.width) * m.height;
  for (const json& entry : files) {
    if (!entry.is_object()) fail(ErrorCode::InvalidManifest, "file entries must be objects");
    PassFiles pf{file_ref(entry, "probs"), file_ref(entry, "radial"), file_ref(entry, "polygons"),
                 file_ref(entry, "labels")};
    if (m.mode == SampleMode::Dense) {
      if (pf.probs.empty() || pf.radial.empty()) {
        fail(ErrorCode::InvalidManifest, "dense entries need 'probs' and 'radial'");
      }
      expect_size(m.resolve(pf.probs), pixels * sizeof(float));
      expect_size(m.resolve(pf.radial), pixels * m.n_rays * sizeof(float));
    } else {
      if (pf.polygons.empty() == pf.labels.empty()) {
        fail(ErrorCode::InvalidManifest, "instance entries need exactly one of 'polygons' or 'labels'");
      }
      if (!pf.polygons.empty() && !fs::exists(m.resolve(pf.polygons))) {
        fail(ErrorCode::MissingFile, "missing file " + m.resolve(pf.polygons).string());
      }
      if (!pf.labels.empty()) expect_size(m.resolve(pf.labels), pixels * sizeof(std::uint16_t));
    }
    m.files.push_back(std::move(pf));
  }
  if (j.contains("ground_truth") && !j["ground_truth"].is_null()) {
    if (!j["ground_truth"].is_string()) {
      fail(ErrorCode::InvalidManifest, "ground_truth must be a string");
    }
    m.ground_truth = j["ground_truth"].get<std::string>();
    expect_size(m.resolve(*m.ground_truth), pixels * sizeof(std::uint16_t));
  }
  return m;
}

void write_manifest(const fs::path& path, const Manifest& m) {
  json files = json::array();
  for (const PassFiles& pf : m.files) {
    json e = json::object();
    if (!pf.probs.empty()) e["probs"] = pf.probs;
    if (!pf.radial.empty()) e["radial"] = pf.radial;
    if (!pf.polygons.empty()) e["polygons"] = pf.polygons;
    if (!pf.labels.empty()) e["labels"] = pf.labels;
    files.push_back(std::move(e));
  }
  json j = {{"version", m.version},
            {"mode", m.mode == SampleMode::Dense ? "dense" : "instances"},
            {"width", m.width},
            {"height", m.height},
            {"n_rays", m.n_rays},
            {"passes", m.passes},
            {"files", files}};
  if (m.ground_truth) j["ground_truth"] = *m.ground_truth;
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Samples

std::vector<float> read_floats(const fs::path& path, std::size_t count) {
  return read_raw<float>(path, count);
}

void write_floats(const fs::path& path, const std::vector<float>& values) {
  write_raw(path, values);
}

LabelMask read_labels(const fs::path& path, int width, int height) {
  LabelMask m;
  m.width = width;
  m.height = height;
  m.labels = read_raw<std::uint16_t>(path, std::size_t(width) * height);
  return m;
}

void write_labels(const fs::path& path, const LabelMask& labels) { write_raw(path, labels.labels); }

void write_dense(const fs::path& probs, const fs::path& radial, const DenseOutput& g) {
  write_raw(probs, g.prob);
  write_raw(radial, g.radial);
}

std::vector<DenseOutput> load_dense(const Manifest& m) {
  if (m.mode != SampleMode::Dense) fail(ErrorCode::InvalidArgument, "manifest is not in dense mode");
  std::vector<DenseOutput> out;
  const std::size_t pixels = std::size_t(m.width) * m.height;
  for (const PassFiles& pf : m.files) {
    DenseOutput g;
    g.width = m.width;
    g.height = m.height;
    g.n_rays = m.n_rays;
    g.prob = read_raw<float>(m.resolve(pf.probs), pixels);
    g.radial = read_raw<float>(m.resolve(pf.radial), pixels * m.n_rays);
    try {
      validate(g);
    } catch (const Error& e) {
      fail(e.code(), m.resolve(pf.probs).filename().string() + ": " + e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<PredictionSet> load_instances(const Manifest& m) {
  if (m.mode != SampleMode::Instances) {
    fail(ErrorCode::InvalidArgument, "manifest is not in instance mode");
  }
  std::vector<PredictionSet> out;
  for (std::size_t f = 0; f < m.files.size(); ++f) {
    const PassFiles& pf = m.files[f];
    PredictionSet set{static_cast<int>(f) + 1, {}};
    if (!pf.polygons.empty()) {
      for (auto& p : read_polygons_csv(m.resolve(pf.polygons), set.pass_id, m.n_rays)) {
        set.predictions.emplace_back(std::move(p));
      }
    } else {
      const LabelMask labels = read_labels(m.resolve(pf.labels), m.width, m.height);
      for (auto& lm : split_labels(labels)) set.predictions.emplace_back(std::move(lm.mask));
    }
    out.push_back(std::move(set));
  }
  return out;
}

std::vector<RadialPolygon> read_polygons_csv(const fs::path& path, int pass_id, int n_rays) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::InvalidSample, path.string() + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header(n_rays)) {
    fail(ErrorCode::InvalidSample,
         path.string() + ": header must be '" + csv_header(n_rays) + "'");
  }
  std::vector<RadialPolygon> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != static_cast<std::size_t>(3 + n_rays)) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": expected " << 3 + n_rays << " columns, got "
         << cells.size();
      fail(ErrorCode::InvalidSample, os.str());
    }
    const double pass = parse_double(cells[0], path, lineno);
    if (pass != pass_id) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": row belongs to pass " << cells[0]
         << " but the file is pass " << pass_id;
      fail(ErrorCode::InvalidSample, os.str());
    }
    RadialPolygon p(parse_double(cells[1], path, lineno), parse_double(cells[2], path, lineno),
                    std::vector<double>(n_rays));
    for (int i = 0; i < n_rays; ++i) p.radii[i] = parse_double(cells[3 + i], path, lineno);
    try {
      validate(p);
    } catch (const Error& e) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": " << e.what();
      fail(ErrorCode::InvalidSample, os.str());
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_polygons_csv(const fs::path& path, int pass_id, const std::vector<RadialPolygon>& polys,
                        int n_rays) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << csv_header(n_rays) << '\n';
  for (const RadialPolygon& p : polys) {
    if (p.n_rays() != n_rays) fail(ErrorCode::InvalidArgument, "polygon ray count mismatch");
    out << pass_id << ',' << format_double(p.cx) << ',' << format_double(p.cy);
    for (double r : p.radii) out << ',' << format_double(r);
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Report

void write_report(const fs::path& path, const ClusterReport& r) {
  json clusters = json::array();
  for (const ClusterSummary& c : r.clusters) {
    json e = {{"id", c.id},
              {"members", c.members()},
              {"passes", c.passes},
              {"center", c.center ? json{c.center->x, c.center->y} : json(nullptr)},
              {"c_spl", c.scores.spatial},
              {"c_frac", c.scores.fractional},
              {"c_hyb", c.scores.hybrid}};
    if (c.median_polygon) {
      e["median"] = polygon_json(*c.median_polygon);
      e["median"]["type"] = "polygon";
    } else if (c.median_mask) {
      e["median"] = mask_json(*c.median_mask);
      e["median"]["type"] = "mask";
    }
    if (c.band) {
      e["band"] = {{"type", "polygon"},
                   {"inner", polygon_json(c.band->inner)},
                   {"outer", polygon_json(c.band->outer)}};
    } else {
      e["band"] = {{"type", "contours"},
                   {"inner", contours_json(c.inner_contours)},
                   {"outer", contours_json(c.outer_contours)}};
    }
    clusters.push_back(std::move(e));
  }
  const RunConfig& k = r.config;
  json j = {{"version", 1},
            {"method", to_string(r.method)},
            {"width", r.width},
            {"height", r.height},
            {"passes", r.passes},
            {"n_rays", r.n_rays},
            {"config",
             {{"iou_threshold", k.iou_threshold},
              {"cluster_prob_threshold", k.cluster_prob_threshold},
              {"prob_threshold", k.prob_threshold},
              {"nms_threshold", k.nms_threshold},
              {"match_threshold", k.match_threshold},
              {"bins", k.bins},
              {"exact_iou", k.exact_iou}}},
            {"ground_truth", r.ground_truth ? json(*r.ground_truth) : json(nullptr)},
            {"empty_cluster_ids", r.empty_cluster_ids},
            {"clusters", clusters}};
  if (!r.calibration.empty()) {
    json cal = json::object();
    for (const auto& [name, rep] : r.calibration) cal[name] = calibration_json(rep);
    j["calibration"] = std::move(cal);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

ClusterReport read_report(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open report " + path.string());
  try {
    const json j = json::parse(in);
    ClusterReport r;
    r.method = parse_method(j.at("method").get<std::string>());
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    r.passes = j.at("passes").get<int>();
    r.n_rays = j.at("n_rays").get<int>();
    const json& k = j.at("config");
    r.config.method = r.method;
    r.config.iou_threshold = k.at("iou_threshold").get<double>();
    r.config.cluster_prob_threshold = k.at("cluster_prob_threshold").get<double>();
    r.config.prob_threshold = k.at("prob_threshold").get<double>();
    r.config.nms_threshold = k.at("nms_threshold").get<double>();
    r.config.match_threshold = k.at("match_threshold").get<double>();
    r.config.bins = k.at("bins").get<int>();
    r.config.exact_iou = k.at("exact_iou").get<bool>();
    if (!j.at("ground_truth").is_null()) r.ground_truth = j.at("ground_truth").get<std::string>();
    r.empty_cluster_ids = j.at("empty_cluster_ids").get<std::vector<int>>();
    for (const json& e : j.at("clusters")) {
      ClusterSummary c;
      c.id = e.at("id").get<int>();
      c.passes = e.at("passes").get<std::vector<int>>();
      if (!e.at("center").is_null()) c.center = Pixel{e["center"][0].get<int>(), e["center"][1].get<int>()};
      c.scores = {e.at("c_spl").get<double>(), e.at("c_frac").get<double>(),
                  e.at("c_hyb").get<double>()};
      if (e.contains("median")) {
        const json& med = e["median"];
        if (med.at("type") == "polygon") {
          c.median_polygon = polygon_from(med);
        } else {
          c.median_mask = mask_from(med, r.width, r.height);
        }
      }
      const json& band = e.at("band");
      if (band.at("type") == "polygon") {
        c.band = RadialBand{polygon_from(band.at("inner")), polygon_from(band.at("outer"))};
      } else {
        c.inner_contours = contours_from(band.at("inner"));
        c.outer_contours = contours_from(band.at("outer"));
      }
      r.clusters.push_back(std::move(c));
    }
    if (j.contains("calibration")) {
      for (const auto& [name, rep] : j["calibration"].items()) {
        r.calibration[name] = calibration_from(rep);
      }
    }
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedJson, "malformed report " + path.string() + ": " + e.what());
  }
}

void write_calibration_json(const fs::path& path,
                            const std::map<std::string, CalibrationReport>& calibration, int bins,
                            double match_threshold) {
  json scores = json::object();
  for (const auto& [name, rep] : calibration) scores[name] = calibration_json(rep);
  const json j = {{"bins", bins}, {"match_threshold", match_threshold}, {"scores", scores}};
  write_text(path, j.dump(1) + "\n");
}

void write_calibration_summary_csv(const fs::path& path,
                                   const std::map<std::string, CalibrationReport>& calibration) {
  std::ostringstream os;
  os << "score,pearson_r,ece,mce,matched,unmatched,false_negatives\n";
  for (const auto& [name, r] : calibration) {
    os << name << ',' << (r.pearson_r ? format_double(*r.pearson_r) : std::string()) << ','
       << format_double(r.ece) << ',' << format_double(r.mce) << ',' << r.matched << ','
       << r.unmatched << ',' << r.false_negatives << '\n';
  }
  write_text(path, os.str());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

void write_reliability_csv(const fs::path& path, const std::vector<ReliabilityBin>& bins) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << "bin_lo,bin_hi,count,mean_confidence,accuracy\n";
  for (const auto& b : bins) {
    out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << ','
        << format_double(b.mean_confidence) << ',' << format_double(b.accuracy) << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

std::vector<ReliabilityBin> read_reliability_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "bin_lo,bin_hi,count,mean_confidence,accuracy") {
    fail(ErrorCode::InvalidSample, path.string() + ": unexpected reliability header");
  }
  std::vector<ReliabilityBin> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 5) fail(ErrorCode::InvalidSample, path.string() + ": expected 5 columns");
    out.push_back({parse_double(c[0], path, lineno), parse_double(c[1], path, lineno),
                   static_cast<std::size_t>(parse_double(c[2], path, lineno)),
                   parse_double(c[3], path, lineno), parse_double(c[4], path, lineno)});
  }
  return out;
}

}  // namespace starcert
