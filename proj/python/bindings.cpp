#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "handsem/error.hpp"
#include "handsem/evaluation.hpp"
#include "handsem/io.hpp"
#include "handsem/objectives.hpp"
#include "handsem/retarget.hpp"
#include "handsem/semantics.hpp"
#include "handsem/synthetic.hpp"
#include "handsem/tbs_frames.hpp"

namespace py = pybind11;
using namespace handsem;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array vec3_array(const std::vector<Vec3d>& v, std::vector<py::ssize_t> shape) {
  Array out(shape);
  double* p = out.mutable_data();
  for (const Vec3d& x : v) *p++ = x.x, *p++ = x.y, *p++ = x.z;
  return out;
}

Array mats_array(const std::vector<Mat3d>& m, std::vector<py::ssize_t> shape) {
  Array out(shape);
  double* p = out.mutable_data();
  for (const Mat3d& x : m)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) *p++ = x(r, c);
  return out;
}

MotionSequence motion_from_array(const Array& q, const std::string& convention, double fps) {
  if (q.ndim() != 3 || q.shape(1) != kActuated || q.shape(2) != 4)
    throw InputError("rotations must have shape (T, 15, 4)");
  std::vector<Quatd> rot(static_cast<std::size_t>(q.shape(0)) * kActuated);
  const double* p = q.data();
  for (Quatd& r : rot) r = {p[0], p[1], p[2], p[3]}, p += 4;
  return MotionSequence(static_cast<int>(q.shape(0)), std::move(rot), convention_from_name(convention), fps);
}

Array motion_array(const MotionSequence& m) {
  Array out({static_cast<py::ssize_t>(m.frames()), static_cast<py::ssize_t>(kActuated), py::ssize_t{4}});
  double* p = out.mutable_data();
  for (const Quatd& q : m.rotations()) *p++ = q.w, *p++ = q.x, *p++ = q.y, *p++ = q.z;
  return out;
}

Array asm_array(const SemanticMatrix& d) {
  Array out({py::ssize_t{kJoints}, static_cast<py::ssize_t>(d.frames()), py::ssize_t{kAsmRows}, py::ssize_t{3}});
  std::copy(d.data().begin(), d.data().end(), out.mutable_data());
  return out;
}

SemanticMatrix asm_from_array(const Array& a) {
  if (a.ndim() != 4 || a.shape(0) != kJoints || a.shape(2) != kAsmRows || a.shape(3) != 3)
    throw InputError("semantic matrix must have shape (20, T, 29, 3)");
  return SemanticMatrix(static_cast<int>(a.shape(1)), std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict report_dict(const RetargetReport& r) {
  py::dict d;
  d["motion"] = r.motion;
  d["loss_trace"] = r.loss_trace;
  d["loss"] = r.final_loss.total;
  d["l_sem"] = r.final_loss.sem;
  d["l_ana"] = r.final_loss.ana;
  d["s_palm"] = r.s_palm;
  d["s_finger"] = r.s_finger;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semantic hand motion retargeting";

  static py::exception<Error> base(m, "HandsemError");
  static py::exception<InputError> input(m, "InputError", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(input, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<HandSkeleton>(m, "HandSkeleton")
      .def_static("from_json", [](const std::string& text) { return skeleton_from_json(text); })
      .def("to_json", &skeleton_to_json)
      .def_property_readonly("joint_names",
                             [](const HandSkeleton& s) {
                               std::vector<std::string> names;
                               for (const Joint& j : s.joints()) names.push_back(j.name);
                               return names;
                             })
      .def_property_readonly("offsets",
                             [](const HandSkeleton& s) {
                               std::vector<Vec3d> v;
                               for (const Joint& j : s.joints()) v.push_back(j.offset);
                               return vec3_array(v, {kJoints, 3});
                             })
      .def_property_readonly("rest_tbs",
                             [](const HandSkeleton& s) {
                               return mats_array({s.rest_tbs().begin(), s.rest_tbs().end()}, {kActuated, 3, 3});
                             })
      .def("rest_positions",
           [](const HandSkeleton& s) {
             const auto p = s.rest_positions();
             return vec3_array({p.begin(), p.end()}, {kJoints, 3});
           })
      .def("__eq__", [](const HandSkeleton& a, const HandSkeleton& b) { return a == b; });

  py::class_<MotionSequence>(m, "MotionSequence")
      .def(py::init(&motion_from_array), py::arg("rotations"), py::arg("convention") = "tbs_local",
           py::arg("fps") = 30.0)
      .def_static("from_json", [](const std::string& text) { return motion_from_json(text); })
      .def("to_json", &motion_to_json)
      .def_property_readonly("frames", &MotionSequence::frames)
      .def_property_readonly("fps", &MotionSequence::fps)
      .def_property_readonly("convention", [](const MotionSequence& s) { return std::string(convention_name(s.convention())); })
      .def_property_readonly("rotations", &motion_array);

  py::class_<TriMesh>(m, "TriMesh")
      .def_static("from_obj", [](const std::string& text) { return mesh_from_obj(text); })
      .def("to_obj", &mesh_to_obj)
      .def_property_readonly("vertices",
                             [](const TriMesh& t) { return vec3_array(t.vertices(), {static_cast<py::ssize_t>(t.vertices().size()), 3}); })
      .def_property_readonly("normals",
                             [](const TriMesh& t) { return vec3_array(t.normals(), {static_cast<py::ssize_t>(t.normals().size()), 3}); })
      .def_property_readonly("triangles", [](const TriMesh& t) {
        py::array_t<int> out({static_cast<py::ssize_t>(t.triangles().size()), py::ssize_t{3}});
        int* p = out.mutable_data();
        for (const auto& tri : t.triangles()) *p++ = tri[0], *p++ = tri[1], *p++ = tri[2];
        return out;
      });

  m.def(
      "make_synthetic_hand",
      [](std::uint64_t seed, double scale, double finger_length_scale) {
        HandSpec spec = HandSpec::defaults().scaled(scale).with_finger_length_scale(finger_length_scale);
        spec.seed = seed;
        SyntheticHand h = make_synthetic_hand(spec);
        return py::make_tuple(h.skeleton, h.mesh);
      },
      py::arg("seed") = 1, py::arg("scale") = 1.0, py::arg("finger_length_scale") = 1.0,
      "Returns (skeleton, mesh) of a procedural box hand.");
  m.def(
      "make_fixture_motion",
      [](const std::string& kind, const HandSkeleton& s, int frames, double fps) {
        return make_fixture_motion(fixture_motion_from_name(kind), s, frames, fps);
      },
      py::arg("kind"), py::arg("skeleton"), py::arg("frames") = 8, py::arg("fps") = 5.0);

  m.def("tbs_to_global", &tbs_to_global);
  m.def("global_to_tbs", &global_to_tbs);
  m.def(
      "forward_kinematics",
      [](const MotionSequence& q, const HandSkeleton& s) {
        const MotionSequence g = q.convention() == Convention::global ? q : tbs_to_global(q, s);
        const PoseFK fk = forward_kinematics(g, s);
        return vec3_array(fk.positions, {fk.frames, kJoints, 3});
      },
      "Joint positions of shape (T, 20, 3).");

  m.def(
      "extract_asm",
      [](const MotionSequence& q, const HandSkeleton& s) {
        return asm_array(extract_asm(q.convention() == Convention::global ? global_to_tbs(q, s) : q, s));
      },
      "Semantic matrix of shape (20, T, 29, 3).");
  m.def("s_palm", [](const Array& a, const Array& b) { return s_palm(asm_from_array(a), asm_from_array(b)); });
  m.def("s_finger", [](const Array& a, const Array& b) { return s_finger(asm_from_array(a), asm_from_array(b)); });
  m.def(
      "semantic_similarity",
      [](const Array& a, const Array& b, bool use_weights) {
        return semantic_similarity(asm_from_array(a), asm_from_array(b), use_weights);
      },
      py::arg("d_a"), py::arg("d_b"), py::arg("use_weights") = true);
  m.def("anatomical_loss", &anatomical_loss);
  m.def(
      "decompose_tbs_euler",
      [](const std::array<double, 4>& q) {
        const EulerTBS e = decompose_tbs_euler(quat::normalize({q[0], q[1], q[2], q[3]}));
        return py::make_tuple(e.twist, e.bend, e.splay);
      },
      "(twist, bend, splay) of a [w, x, y, z] quaternion.");

  m.def("copy_retarget", &copy_retarget_tbs, py::arg("motion"), py::arg("source"), py::arg("target"));
  m.def("tbs_copy_retarget", &tbs_copy_baseline, py::arg("motion"));
  m.def(
      "retarget",
      [](const MotionSequence& q, const HandSkeleton& src, const HandSkeleton& tgt, const std::string& config_json) {
        const RunConfig cfg = run_config_from_json(config_json);
        std::optional<WindowedResult> w;
        {
          py::gil_scoped_release release;
          w = retarget_sequence_windows(q, src, tgt, cfg.optimizer, cfg.windows);
        }
        if (w->windows.size() == 1) return report_dict(w->windows.front());
        py::list windows;
        for (const RetargetReport& r : w->windows) windows.append(report_dict(r));
        py::dict d;
        d["motion"] = w->motion;
        d["windows"] = windows;
        return d;
      },
      py::arg("motion"), py::arg("source"), py::arg("target"), py::arg("config_json") = "{}",
      "Optimizing retarget; config_json uses the CLI run-config format.");

  m.def(
      "annotate",
      [](const HandSkeleton& s, const TriMesh& mesh, const std::string& config_json) {
        const RunConfig cfg = run_config_from_json(config_json);
        const AnnotationResult r = annotate_frames(s, mesh, cfg.overrides, cfg.annotation_resolution);
        return s.with_rest_tbs(r.frames);
      },
      py::arg("skeleton"), py::arg("mesh"), py::arg("config_json") = "{}",
      "Skeleton with rest TBS frames annotated from the mesh.");
}
