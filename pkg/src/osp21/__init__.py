"""osp(2,1) boson-fermion realizations, QES transforms, and JC spectra."""

__version__ = "0.1.0"

from .fock import (
    FockSpace,
    FockState,
    Operator,
    anticommutator,
    commutator,
    eigen_dense,
    make_boson,
    make_fermion,
)
from .algebra import (
    GeneratorSet,
    RealizationKind,
    build_generators,
    gamma_action,
    verify_algebra,
    verify_qpm_closure,
)
from .transform import (
    SpinorBasis,
    TransformTag,
    TAGS,
    build_metric,
    build_transformed_generators,
    verify_intertwining,
    verify_transformed_algebra,
)
from .spectra import (
    JCKerrParams,
    MJCParams,
    Spectrum,
    build_jck_full,
    build_jck_reduced,
    build_mjc_full,
    build_mjc_reduced,
    compare_reduced_vs_full,
    jck_recurrence,
    mjc_closed_form,
)

__all__ = [
    "FockSpace", "FockState", "Operator", "anticommutator", "commutator",
    "eigen_dense", "make_boson", "make_fermion",
    "GeneratorSet", "RealizationKind", "build_generators", "gamma_action",
    "verify_algebra", "verify_qpm_closure",
    "SpinorBasis", "TransformTag", "TAGS", "build_metric",
    "build_transformed_generators", "verify_intertwining",
    "verify_transformed_algebra",
    "JCKerrParams", "MJCParams", "Spectrum", "build_jck_full",
    "build_jck_reduced", "build_mjc_full", "build_mjc_reduced",
    "compare_reduced_vs_full", "jck_recurrence", "mjc_closed_form",
]
