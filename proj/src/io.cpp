#include "handsem/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "handsem/error.hpp"

namespace handsem {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kSkeletonFormat = "handsem.skeleton";
constexpr std::string_view kMotionFormat = "handsem.motion";
constexpr std::string_view kAsmFormat = "handsem.asm";

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] " prefix.
    if (const auto p = msg.find("] "); p != std::string::npos) msg = msg.substr(p + 2);
    throw ParseError(std::string(source), line_of(text, e.byte == 0 ? 0 : e.byte - 1), msg);
  }
}

// Type errors and missing keys surface as InputError naming the file.
template <class F>
auto with_context(std::string_view source, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    std::string msg = e.what();
    if (const auto p = msg.find("] "); p != std::string::npos) msg = msg.substr(p + 2);
    throw InputError(std::string(source) + ": " + msg);
  }
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view source,
                std::string_view where) {
  if (!obj.is_object()) throw InputError(std::string(source) + ": " + std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InputError(std::string(source) + ": unknown key '" + key + "' in " + std::string(where));
  }
}

const json& require(const json& obj, const char* key, std::string_view source) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string(source) + ": missing key '" + key + "'");
  return *it;
}

void check_header(const json& doc, std::string_view format, std::string_view source) {
  if (!doc.is_object()) throw InputError(std::string(source) + ": top level must be an object");
  const std::string got = require(doc, "format", source).get<std::string>();
  if (got != format)
    throw InputError(std::string(source) + ": expected format '" + std::string(format) + "', got '" + got + "'");
  const int version = require(doc, "version", source).get<int>();
  if (version != kFormatVersion)
    throw InputError(std::string(source) + ": unsupported version " + std::to_string(version));
}

double finite_number(const json& v, std::string_view source, std::string_view what) {
  if (!v.is_number()) throw InputError(std::string(source) + ": " + std::string(what) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(std::string(source) + ": " + std::string(what) + " must be finite");
  return d;
}

Vec3d vec3(const json& v, std::string_view source, std::string_view what) {
  if (!v.is_array() || v.size() != 3)
    throw InputError(std::string(source) + ": " + std::string(what) + " must be an array of 3 numbers");
  return {finite_number(v[0], source, what), finite_number(v[1], source, what), finite_number(v[2], source, what)};
}

ordered_json vec3_json(const Vec3d& v) { return ordered_json::array({v.x, v.y, v.z}); }

Quatd canonical_for_write(const Quatd& q) {
  // Normalize -0.0 so files do not depend on the sign of zero.
  Quatd c = quat::canonical(q);
  for (double* p : {&c.w, &c.x, &c.y, &c.z})
    if (*p == 0.0) *p = 0.0;
  return c;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError("failed reading '" + path.string() + "'");
  return ss.str();
}

// ---------------------------------------------------------------- skeleton

std::string skeleton_to_json(const HandSkeleton& skeleton) {
  ordered_json doc;
  doc["format"] = kSkeletonFormat;
  doc["version"] = kFormatVersion;
  ordered_json joints = ordered_json::array();
  for (const Joint& j : skeleton.joints()) {
    ordered_json o;
    o["name"] = j.name;
    o["parent"] = j.parent;
    o["offset"] = vec3_json(j.offset);
    o["finger"] = finger_name(j.finger);
    o["actuated"] = j.actuated;
    joints.push_back(std::move(o));
  }
  doc["joints"] = std::move(joints);
  ordered_json frames = ordered_json::array();
  for (const Mat3d& m : skeleton.rest_tbs()) {
    ordered_json row = ordered_json::array();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) row.push_back(m(r, c));
    frames.push_back(std::move(row));
  }
  doc["rest_tbs"] = std::move(frames);
  doc["shape"] = {{"kind", shape_kind_name(skeleton.shape().kind)}, {"values", skeleton.shape().values}};
  doc["palm_back"] = vec3_json(skeleton.palm_back());
  return dump(doc);
}

HandSkeleton skeleton_from_json(std::string_view text, std::string_view source, const SkeletonParseOptions& options) {
  const json doc = parse_json(text, source);
  return with_context(source, [&] {
    check_header(doc, kSkeletonFormat, source);
    if (options.strict)
      check_keys(doc, {"format", "version", "joints", "rest_tbs", "shape", "palm_back"}, source, "skeleton");

    const json& jl = require(doc, "joints", source);
    if (!jl.is_array()) throw InputError(std::string(source) + ": joints must be an array");
    std::vector<Joint> joints;
    for (const json& jj : jl) {
      if (options.strict) check_keys(jj, {"name", "parent", "offset", "finger", "actuated"}, source, "joint");
      Joint j;
      j.name = require(jj, "name", source).get<std::string>();
      j.parent = require(jj, "parent", source).get<int>();
      j.offset = vec3(require(jj, "offset", source), source, "joint offset");
      j.finger = finger_from_name(require(jj, "finger", source).get<std::string>());
      j.actuated = require(jj, "actuated", source).get<bool>();
      joints.push_back(std::move(j));
    }

    std::array<Mat3d, kActuated> rest;
    rest.fill(Mat3d::identity());
    const auto it = doc.find("rest_tbs");
    if (it == doc.end() || it->is_null()) {
      if (options.require_rest_tbs) throw InputError(std::string(source) + ": missing key 'rest_tbs'");
    } else {
      if (!it->is_array() || it->size() != kActuated)
        throw InputError(std::string(source) + ": rest_tbs must hold 15 matrices");
      for (int a = 0; a < kActuated; ++a) {
        const json& m = (*it)[a];
        if (!m.is_array() || m.size() != 9)
          throw InputError(std::string(source) + ": rest_tbs[" + std::to_string(a) + "] must hold 9 numbers");
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) rest[a](r, c) = finite_number(m[3 * r + c], source, "rest_tbs entry");
      }
    }

    const json& sj = require(doc, "shape", source);
    if (options.strict) check_keys(sj, {"kind", "values"}, source, "shape");
    ShapeParams shape;
    shape.kind = shape_kind_from_name(require(sj, "kind", source).get<std::string>());
    for (const json& v : require(sj, "values", source)) shape.values.push_back(finite_number(v, source, "shape value"));

    Vec3d palm_back{0.0, 0.0, 1.0};
    if (const auto pb = doc.find("palm_back"); pb != doc.end()) palm_back = vec3(*pb, source, "palm_back");
    return HandSkeleton(std::move(joints), rest, std::move(shape), palm_back);
  });
}

// ---------------------------------------------------------------- motion

std::string motion_to_json(const MotionSequence& motion) {
  ordered_json doc;
  doc["format"] = kMotionFormat;
  doc["version"] = kFormatVersion;
  doc["fps"] = motion.fps();
  doc["convention"] = convention_name(motion.convention());
  doc["frames"] = motion.frames();
  ordered_json frames = ordered_json::array();
  for (int t = 0; t < motion.frames(); ++t) {
    ordered_json f = ordered_json::array();
    for (const Quatd& q : motion.frame(t)) {
      const Quatd c = canonical_for_write(q);
      f.push_back(ordered_json::array({c.w, c.x, c.y, c.z}));
    }
    frames.push_back(std::move(f));
  }
  doc["rotations"] = std::move(frames);
  return dump(doc);
}

MotionSequence motion_from_json(std::string_view text, std::string_view source, bool strict) {
  const json doc = parse_json(text, source);
  return with_context(source, [&] {
    check_header(doc, kMotionFormat, source);
    if (strict) check_keys(doc, {"format", "version", "fps", "convention", "frames", "rotations"}, source, "motion");
    const double fps = finite_number(require(doc, "fps", source), source, "fps");
    const Convention conv = convention_from_name(require(doc, "convention", source).get<std::string>());
    const json& rot = require(doc, "rotations", source);
    if (!rot.is_array()) throw InputError(std::string(source) + ": rotations must be an array");
    const int frames = static_cast<int>(rot.size());
    if (const auto f = doc.find("frames"); f != doc.end() && f->get<int>() != frames)
      throw InputError(std::string(source) + ": frames says " + std::to_string(f->get<int>()) + " but " +
                       std::to_string(frames) + " frames are stored");
    std::vector<Quatd> q;
    q.reserve(static_cast<std::size_t>(frames) * kActuated);
    for (int t = 0; t < frames; ++t) {
      const json& fr = rot[t];
      if (!fr.is_array() || fr.size() != kActuated)
        throw InputError(std::string(source) + ": frame " + std::to_string(t) + " must hold 15 quaternions");
      for (const json& qj : fr) {
        if (!qj.is_array() || qj.size() != 4)
          throw InputError(std::string(source) + ": quaternions are [w, x, y, z] arrays");
        q.push_back({finite_number(qj[0], source, "quaternion"), finite_number(qj[1], source, "quaternion"),
                     finite_number(qj[2], source, "quaternion"), finite_number(qj[3], source, "quaternion")});
      }
    }
    return MotionSequence(frames, std::move(q), conv, fps);
  });
}

// ---------------------------------------------------------------- ASM

std::string asm_to_json(const SemanticMatrix& d) {
  ordered_json doc;
  doc["format"] = kAsmFormat;
  doc["version"] = kFormatVersion;
  doc["layout"] = {"joint", "frame", "row", "xyz"};
  doc["shape"] = {kJoints, d.frames(), kAsmRows, 3};
  ordered_json data = ordered_json::array();
  for (double v : d.data()) data.push_back(v == 0.0 ? 0.0 : v);
  doc["data"] = std::move(data);
  return doc.dump(-1) + "\n";
}

SemanticMatrix asm_from_json(std::string_view text, std::string_view source, bool strict) {
  const json doc = parse_json(text, source);
  return with_context(source, [&] {
    check_header(doc, kAsmFormat, source);
    if (strict) check_keys(doc, {"format", "version", "layout", "shape", "data"}, source, "asm");
    const auto layout = require(doc, "layout", source).get<std::vector<std::string>>();
    if (layout != std::vector<std::string>{"joint", "frame", "row", "xyz"})
      throw InputError(std::string(source) + ": unsupported layout");
    const auto shape = require(doc, "shape", source).get<std::vector<int>>();
    if (shape.size() != 4 || shape[0] != kJoints || shape[2] != kAsmRows || shape[3] != 3 || shape[1] < 1)
      throw InputError(std::string(source) + ": shape must be [20, T, 29, 3] with T >= 1");
    const json& data = require(doc, "data", source);
    std::vector<double> values;
    values.reserve(data.size());
    for (const json& v : data) values.push_back(finite_number(v, source, "asm entry"));
    if (values.size() != static_cast<std::size_t>(kJoints) * shape[1] * kAsmRows * 3)
      throw InputError(std::string(source) + ": data length does not match shape");
    return SemanticMatrix(shape[1], std::move(values));
  });
}

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
  optimizer.validate();
  if (windows.window < 1) throw InputError("window must be at least 1 frame");
  if (windows.overlap < 0 || windows.overlap >= windows.window) throw InputError("overlap must lie in [0, window)");
  if (!(annotation_resolution > 0.0 && annotation_resolution <= kPi / 18.0 + 1e-15))
    throw InputError("annotation resolution must lie in (0, 10] degrees");
}

RunConfig run_config_from_json(std::string_view text, std::string_view source) {
  const json doc = parse_json(text, source);
  RunConfig cfg = with_context(source, [&] {
    RunConfig c;
    check_keys(doc, {"lambda_sem", "lambda_ana", "optimizer", "window", "overlap", "annotation"}, source, "config");
    if (const auto v = doc.find("lambda_sem"); v != doc.end())
      c.optimizer.weights.sem = finite_number(*v, source, "lambda_sem");
    if (const auto v = doc.find("lambda_ana"); v != doc.end())
      c.optimizer.weights.ana = finite_number(*v, source, "lambda_ana");
    if (const auto v = doc.find("window"); v != doc.end()) c.windows.window = v->get<int>();
    if (const auto v = doc.find("overlap"); v != doc.end()) c.windows.overlap = v->get<int>();
    if (const auto o = doc.find("optimizer"); o != doc.end()) {
      check_keys(*o,
                 {"max_iters", "step_size", "tol", "init", "seed", "init_jitter", "armijo_c", "shrink", "grow",
                  "max_backtracks"},
                 source, "optimizer");
      RetargetConfig& r = c.optimizer;
      if (const auto v = o->find("max_iters"); v != o->end()) r.max_iters = v->get<int>();
      if (const auto v = o->find("step_size"); v != o->end()) r.step_size = finite_number(*v, source, "step_size");
      if (const auto v = o->find("tol"); v != o->end()) r.tol = finite_number(*v, source, "tol");
      if (const auto v = o->find("init"); v != o->end()) {
        r.init = init_kind_from_name(v->get<std::string>());
        if (r.init == InitKind::given)
          throw InputError(std::string(source) + ": init 'given' is only available through the library");
      }
      if (const auto v = o->find("seed"); v != o->end()) r.seed = v->get<std::uint64_t>();
      if (const auto v = o->find("init_jitter"); v != o->end())
        r.init_jitter = finite_number(*v, source, "init_jitter");
      if (const auto v = o->find("armijo_c"); v != o->end()) r.armijo_c = finite_number(*v, source, "armijo_c");
      if (const auto v = o->find("shrink"); v != o->end()) r.shrink = finite_number(*v, source, "shrink");
      if (const auto v = o->find("grow"); v != o->end()) r.grow = finite_number(*v, source, "grow");
      if (const auto v = o->find("max_backtracks"); v != o->end()) r.max_backtracks = v->get<int>();
    }
    if (const auto a = doc.find("annotation"); a != doc.end()) {
      check_keys(*a, {"resolution_deg", "overrides"}, source, "annotation");
      if (const auto v = a->find("resolution_deg"); v != a->end())
        c.annotation_resolution = finite_number(*v, source, "resolution_deg") * kPi / 180.0;
      if (const auto ov = a->find("overrides"); ov != a->end()) {
        for (const json& o : *ov) {
          check_keys(o, {"joint", "roll_deg", "bend_axis"}, source, "override");
          FrameOverride fo;
          fo.joint = require(o, "joint", source).get<std::string>();
          const bool has_roll = o.contains("roll_deg");
          const bool has_axis = o.contains("bend_axis");
          if (has_roll == has_axis)
            throw InputError(std::string(source) + ": override for '" + fo.joint +
                             "' needs exactly one of roll_deg or bend_axis");
          if (has_roll)
            fo.adjustment = finite_number(o["roll_deg"], source, "roll_deg") * kPi / 180.0;
          else
            fo.adjustment = vec3(o["bend_axis"], source, "bend_axis");
          c.overrides.push_back(std::move(fo));
        }
      }
    }
    return c;
  });
  cfg.validate();
  return cfg;
}

std::string run_config_to_json(const RunConfig& config) {
  const RetargetConfig& r = config.optimizer;
  ordered_json doc;
  doc["lambda_sem"] = r.weights.sem;
  doc["lambda_ana"] = r.weights.ana;
  doc["optimizer"] = {{"max_iters", r.max_iters},     {"step_size", r.step_size},
                      {"tol", r.tol},                 {"init", init_kind_name(r.init)},
                      {"seed", r.seed},               {"init_jitter", r.init_jitter},
                      {"armijo_c", r.armijo_c},       {"shrink", r.shrink},
                      {"grow", r.grow},               {"max_backtracks", r.max_backtracks}};
  doc["window"] = config.windows.window;
  doc["overlap"] = config.windows.overlap;
  ordered_json overrides = ordered_json::array();
  for (const FrameOverride& o : config.overrides) {
    ordered_json j;
    j["joint"] = o.joint;
    if (const double* roll = std::get_if<double>(&o.adjustment))
      j["roll_deg"] = *roll * 180.0 / kPi;
    else
      j["bend_axis"] = vec3_json(std::get<Vec3d>(o.adjustment));
    overrides.push_back(std::move(j));
  }
  doc["annotation"] = {{"resolution_deg", config.annotation_resolution * 180.0 / kPi}, {"overrides", overrides}};
  return dump(doc);
}

// ---------------------------------------------------------------- OBJ

namespace {

double parse_double(std::string_view tok, std::string_view source, int line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError(std::string(source), line, "bad number '" + std::string(tok) + "'");
  return v;
}

int parse_index(std::string_view tok, int count, std::string_view source, int line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v == 0)
    throw ParseError(std::string(source), line, "bad index '" + std::string(tok) + "'");
  const int idx = v > 0 ? v - 1 : count + v;
  if (idx < 0 || idx >= count)
    throw ParseError(std::string(source), line, "index " + std::string(tok) + " out of range");
  return idx;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

}  // namespace

TriMesh mesh_from_obj(std::string_view text, std::string_view source) {
  std::vector<Vec3d> positions, file_normals;
  // Each face corner: position index and normal index (-1 when absent).
  std::vector<std::array<std::pair<int, int>, 3>> faces;
  std::vector<int> face_lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::string_view kw = tok[0];
    if (kw == "v") {
      if (tok.size() < 4 || tok.size() > 5) throw ParseError(std::string(source), line_no, "v needs 3 coordinates");
      positions.push_back({parse_double(tok[1], source, line_no), parse_double(tok[2], source, line_no),
                           parse_double(tok[3], source, line_no)});
    } else if (kw == "vn") {
      if (tok.size() != 4) throw ParseError(std::string(source), line_no, "vn needs 3 components");
      const Vec3d n{parse_double(tok[1], source, line_no), parse_double(tok[2], source, line_no),
                    parse_double(tok[3], source, line_no)};
      if (!(norm(n) > 0.0)) throw ParseError(std::string(source), line_no, "zero-length normal");
      file_normals.push_back(normalized(n));
    } else if (kw == "f") {
      if (tok.size() != 4)
        throw ParseError(std::string(source), line_no,
                         "only triangular faces are supported (face has " + std::to_string(tok.size() - 1) +
                             " vertices)");
      std::array<std::pair<int, int>, 3> face;
      for (int c = 0; c < 3; ++c) {
        const std::string_view t = tok[c + 1];
        const auto s1 = t.find('/');
        face[c].first = parse_index(t.substr(0, s1), static_cast<int>(positions.size()), source, line_no);
        face[c].second = -1;
        if (s1 != std::string_view::npos) {
          const auto s2 = t.find('/', s1 + 1);
          if (s2 != std::string_view::npos && s2 + 1 < t.size())
            face[c].second =
                parse_index(t.substr(s2 + 1), static_cast<int>(file_normals.size()), source, line_no);
        }
      }
      faces.push_back(face);
      face_lines.push_back(line_no);
    } else if (kw == "vt" || kw == "o" || kw == "g" || kw == "s" || kw == "usemtl" || kw == "mtllib") {
      // ignored
    } else {
      throw ParseError(std::string(source), line_no, "unsupported record '" + std::string(kw) + "'");
    }
    if (end == text.size()) break;
  }
  if (faces.empty()) throw InputError(std::string(source) + ": mesh has no faces");

  const bool all_normals =
      std::all_of(faces.begin(), faces.end(), [](const auto& f) {
        return f[0].second >= 0 && f[1].second >= 0 && f[2].second >= 0;
      });
  auto checked = [&](auto&& build) {
    try {
      return build();
    } catch (const InputError& e) {
      throw InputError(std::string(source) + ": " + e.what());
    }
  };
  if (!all_normals) {
    std::vector<TriMesh::Triangle> tris;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const auto& f = faces[i];
      const Vec3d e = cross(positions[f[1].first] - positions[f[0].first], positions[f[2].first] - positions[f[0].first]);
      if (!(norm(e) > 0.0)) throw ParseError(std::string(source), face_lines[i], "degenerate (zero area) face");
      tris.push_back({f[0].first, f[1].first, f[2].first});
    }
    // Unreferenced vertices have no normal; drop them.
    std::vector<int> remap(positions.size(), -1);
    std::vector<Vec3d> used;
    for (auto& t : tris)
      for (int& idx : t) {
        if (remap[idx] < 0) {
          remap[idx] = static_cast<int>(used.size());
          used.push_back(positions[idx]);
        }
        idx = remap[idx];
      }
    return checked([&] { return TriMesh::with_computed_normals(std::move(used), std::move(tris)); });
  }
  // Split vertices so each (position, normal) pair becomes one mesh vertex.
  std::map<std::pair<int, int>, int> ids;
  std::vector<Vec3d> verts, normals;
  std::vector<TriMesh::Triangle> tris;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const auto& f = faces[i];
    const Vec3d e = cross(positions[f[1].first] - positions[f[0].first], positions[f[2].first] - positions[f[0].first]);
    if (!(norm(e) > 0.0)) throw ParseError(std::string(source), face_lines[i], "degenerate (zero area) face");
    TriMesh::Triangle tri;
    for (int c = 0; c < 3; ++c) {
      const auto [it, inserted] = ids.emplace(f[c], static_cast<int>(verts.size()));
      if (inserted) {
        verts.push_back(positions[f[c].first]);
        normals.push_back(file_normals[f[c].second]);
      }
      tri[c] = it->second;
    }
    tris.push_back(tri);
  }
  return checked([&] { return TriMesh(std::move(verts), std::move(tris), std::move(normals)); });
}

std::string mesh_to_obj(const TriMesh& mesh) {
  std::string out;
  auto num = [&out](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v == 0.0 ? 0.0 : v);
    out.append(buf, res.ptr);
  };
  for (const Vec3d& v : mesh.vertices()) {
    out += "v ";
    num(v.x), out += ' ', num(v.y), out += ' ', num(v.z), out += '\n';
  }
  for (const Vec3d& n : mesh.normals()) {
    out += "vn ";
    num(n.x), out += ' ', num(n.y), out += ' ', num(n.z), out += '\n';
  }
  for (const auto& t : mesh.triangles()) {
    out += 'f';
    for (int idx : t) out += ' ' + std::to_string(idx + 1) + "//" + std::to_string(idx + 1);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- outputs

void OutputSet::add(fs::path path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

void OutputSet::commit() {
  std::random_device rd;
  const std::string tag = std::to_string(rd());
  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  try {
    for (const auto& [path, content] : files_) {
      fs::path tmp = path;
      tmp += ".tmp-" + tag;
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw InputError("cannot write '" + path.string() + "'");
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) throw InputError("failed writing '" + path.string() + "'");
    }
    for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], files_[i].first);
  } catch (const fs::filesystem_error& e) {
    cleanup();
    throw InputError(e.what());
  } catch (...) {
    cleanup();
    throw;
  }
  files_.clear();
}

}  // namespace handsem
