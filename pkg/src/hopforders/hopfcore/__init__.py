"""Hopf algebras from structure constants: elements, duals, exact axiom checks."""

from .core import (
    Character,
    CheckResult,
    HopfData,
    HopfElem,
    Report,
    TensorElem,
    UnverifiedAlgebra,
    comultiply,
    convolve,
    dual_hopf,
    dual_label,
    export_text,
    import_text,
    multiply,
    tables_equal,
    tensor_multiply,
    undual_label,
)
from .verify import AXIOM_FAMILIES, require_verified, verify_hopf_axioms, verify_hopf_map

__all__ = [
    "AXIOM_FAMILIES",
    "Character",
    "CheckResult",
    "HopfData",
    "HopfElem",
    "Report",
    "TensorElem",
    "UnverifiedAlgebra",
    "comultiply",
    "convolve",
    "dual_hopf",
    "dual_label",
    "export_text",
    "import_text",
    "multiply",
    "require_verified",
    "tables_equal",
    "tensor_multiply",
    "undual_label",
    "verify_hopf_axioms",
    "verify_hopf_map",
]
