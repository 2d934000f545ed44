"""Exact q-series engine for Nahm sums and Rogers-Ramanujan type identities.

The modules build on one another: :mod:`.series` holds the truncated
series ring, :mod:`.products` and :mod:`.nahm` construct products and Nahm
sums, :mod:`.reduction` evaluates the auxiliary multi-sums and rank reduction
right sides, :mod:`.expr` is the expression language of the catalog and
:mod:`.catalog` stores and verifies the identities.
"""

from .series import INF, QSeries, add, first_mismatch, invert, make_monomial, mul, substitute_qk
from .products import ProductSpec, ThetaSpec, J, J2, phi, pochhammer, psi, qbinom, theta, theta0, theta1
from .nahm import NahmSpec, TadpoleSpec, chi, nahm_sum, new_repn_rhs, tadpole_matrix
from .reduction import FamilyIndex, RankReductionInstance, family_sum, reduce_even_rhs, reduce_odd_rhs
from .expr import Expr, evaluate, from_json, to_json
from .catalog import Catalog, IdentityRecord, VerificationReport, catalog_list, default_catalog, verify

__version__ = "0.1.0"

__all__ = [
    "INF", "QSeries", "add", "first_mismatch", "invert", "make_monomial", "mul", "substitute_qk",
    "ProductSpec", "ThetaSpec", "J", "J2", "phi", "pochhammer", "psi", "qbinom", "theta", "theta0", "theta1",
    "NahmSpec", "TadpoleSpec", "chi", "nahm_sum", "new_repn_rhs", "tadpole_matrix",
    "FamilyIndex", "RankReductionInstance", "family_sum", "reduce_even_rhs", "reduce_odd_rhs",
    "Expr", "evaluate", "from_json", "to_json",
    "Catalog", "IdentityRecord", "VerificationReport", "catalog_list", "default_catalog", "verify",
]
