#pragma once

// JSON file formats for skeletons, motions, semantic matrices, run
// configuration and metric reports; an ASCII OBJ subset for meshes; and
// all-or-nothing output writing.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "handsem/hand_model.hpp"
#include "handsem/mesh.hpp"
#include "handsem/retarget.hpp"
#include "handsem/semantics.hpp"
#include "handsem/tbs_frames.hpp"

namespace handsem {

inline constexpr int kFormatVersion = 1;

// Reads a whole file; throws InputError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

struct SkeletonParseOptions {
  bool strict = true;              // reject unknown keys
  bool require_rest_tbs = true;    // when false, missing rest_tbs become identity placeholders
};

std::string skeleton_to_json(const HandSkeleton& skeleton);
HandSkeleton skeleton_from_json(std::string_view text, std::string_view source = "<skeleton>",
                                const SkeletonParseOptions& options = {});

// Quaternions are written as [w, x, y, z] with w >= 0.
std::string motion_to_json(const MotionSequence& motion);
MotionSequence motion_from_json(std::string_view text, std::string_view source = "<motion>", bool strict = true);

// Flat data in (joint, frame, row, xyz) order with the shape [20, T, 29, 3].
std::string asm_to_json(const SemanticMatrix& d);
SemanticMatrix asm_from_json(std::string_view text, std::string_view source = "<asm>", bool strict = true);

struct RunConfig {
  RetargetConfig optimizer;  // weights live in optimizer.weights
  WindowOptions windows;
  double annotation_resolution = kDefaultAnnotationResolution;  // radians
  std::vector<FrameOverride> overrides;

  void validate() const;
};

// Keys: lambda_sem, lambda_ana, optimizer{max_iters, step_size, tol, init,
// seed, init_jitter, armijo_c, shrink, grow, max_backtracks}, window,
// overlap, annotation{resolution_deg, overrides[{joint, roll_deg | bend_axis}]}.
// Every key is optional; unknown keys are rejected.
RunConfig run_config_from_json(std::string_view text, std::string_view source = "<config>");
std::string run_config_to_json(const RunConfig& config);

// v, vn and triangular f records (v, v/t, v//n, v/t/n); comments, o, g, s,
// usemtl, mtllib and vt are ignored. Faces with more than three vertices
// raise ParseError with the line number. Without vn records, or when a
// face lacks normal references, normals are computed from the geometry.
TriMesh mesh_from_obj(std::string_view text, std::string_view source = "<mesh>");
std::string mesh_to_obj(const TriMesh& mesh);

// Collects outputs and writes them together: each file goes to a temporary
// sibling first and all are renamed into place only after every write
// succeeded. Nothing is left behind on failure.
class OutputSet {
 public:
  void add(std::filesystem::path path, std::string content);
  void commit();
  bool empty() const { return files_.empty(); }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace handsem
