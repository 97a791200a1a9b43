"""Bridge pydantic documents to domain objects.

Pydantic checks shapes and types; the domain constructors then enforce the
numerical invariants (normalization, Hermiticity, completeness), so a
well-typed but unphysical payload still fails with an invariant error.
"""

from __future__ import annotations

from .. import serialize
from ..channels import KrausSet
from ..states import DensityMatrix, PureState
from .schemas import KrausSetDoc, StateDoc


def state_from_doc(doc: StateDoc) -> "PureState | DensityMatrix":
    return serialize.state_from_json(doc.model_dump())


def kraus_from_doc(doc: KrausSetDoc) -> KrausSet:
    return serialize.kraus_set_from_json(doc.model_dump())
