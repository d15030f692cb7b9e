"""Semantic hand motion retargeting."""

from ._core import (
    HandSkeleton,
    HandsemError,
    InputError,
    MotionSequence,
    NumericalError,
    TriMesh,
    anatomical_loss,
    annotate,
    copy_retarget,
    decompose_tbs_euler,
    extract_asm,
    forward_kinematics,
    global_to_tbs,
    make_fixture_motion,
    make_synthetic_hand,
    retarget,
    s_finger,
    s_palm,
    semantic_similarity,
    tbs_copy_retarget,
    tbs_to_global,
)

__all__ = [
    "HandSkeleton",
    "HandsemError",
    "InputError",
    "MotionSequence",
    "NumericalError",
    "TriMesh",
    "anatomical_loss",
    "annotate",
    "copy_retarget",
    "decompose_tbs_euler",
    "extract_asm",
    "forward_kinematics",
    "global_to_tbs",
    "make_fixture_motion",
    "make_synthetic_hand",
    "retarget",
    "s_finger",
    "s_palm",
    "semantic_similarity",
    "tbs_copy_retarget",
    "tbs_to_global",
]
