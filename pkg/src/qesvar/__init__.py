"""Series solutions and variational estimates for quasi-exactly solvable oscillators.

Submodules
----------
- ``poly``: exact rational polynomials, Sturm sequences, real-root isolation.
- ``euler``: Euler-form operators and their graded series solutions.
- ``qes``: sextic QES models, measures, exact spectra and wavefunctions.
- ``variational``: residual scans over the energy for non-terminating sectors.
- ``reference``: finite-difference + bisection reference eigenvalues.
- ``cli``: the ``qesvar`` command.
"""

from .euler import (
    EulerOperator,
    MonomialTerm,
    XSeries,
    apply_operator,
    generate_series,
    indicial_roots,
    termination_polynomial,
)
from .poly import Poly, RootInterval, isolate_real_roots, refine_root, sturm_count
from .qes import (
    QesModel,
    assemble_wavefunction,
    derive_measure,
    euler_operator,
    qes_condition,
    solve_exact_spectrum,
)
from .reference import reference_spectrum
from .variational import (
    build_moment_table,
    identify_states,
    residual_inner_product,
    scan_delta,
    truncated_state,
)

__version__ = "0.1.0"

__all__ = [
    "Poly",
    "RootInterval",
    "isolate_real_roots",
    "refine_root",
    "sturm_count",
    "EulerOperator",
    "MonomialTerm",
    "XSeries",
    "apply_operator",
    "generate_series",
    "indicial_roots",
    "termination_polynomial",
    "QesModel",
    "assemble_wavefunction",
    "derive_measure",
    "euler_operator",
    "qes_condition",
    "solve_exact_spectrum",
    "reference_spectrum",
    "build_moment_table",
    "identify_states",
    "residual_inner_product",
    "scan_delta",
    "truncated_state",
]
