"""Exact computations with root data.

Lattices are integer matrices acting on column vectors; a root datum lives on
X = Z^n with X̌ identified with Z^n through the dot product.  See the README
for the conventions on morphisms and the JSON format.
"""

from .abelian import BudgetExceeded, NotTame, Tame, is_tame, lift_automorphism, tame_torus
from .asai import complete_embeddings, cyclic_block_embedding, smooth_covering
from .catalog import catalog, general_linear, intermediate_lattices, simply_connected
from .central import (
    CentralProductSpec,
    central_product,
    decompose_as_central_product,
    derived_embedding_structure,
    group_from_factors,
    recover_components,
)
from .classify import ClassTriple, classify_products, isomorphic, triple_of, triples_equivalent
from .embed import (
    classify_embedding,
    optimal_embedding,
    smooth_regular_embedding,
    steinberg_obstruction_check,
)
from .morphism import (
    PMorphism,
    compose,
    dualize,
    infer,
    is_p_frobenius,
    is_p_isogeny,
    is_p_steinberg,
    validate_p_morphism,
)
from .rootdata import RootDatum, derived_datum, direct_sum, dual, radical, torus, validate
from .zlattice import IntMatrix, smith_normal_form

__all__ = [
    "BudgetExceeded",
    "CentralProductSpec",
    "ClassTriple",
    "IntMatrix",
    "NotTame",
    "PMorphism",
    "RootDatum",
    "Tame",
    "catalog",
    "central_product",
    "classify_embedding",
    "classify_products",
    "complete_embeddings",
    "compose",
    "cyclic_block_embedding",
    "decompose_as_central_product",
    "derived_datum",
    "derived_embedding_structure",
    "direct_sum",
    "dual",
    "dualize",
    "general_linear",
    "group_from_factors",
    "infer",
    "intermediate_lattices",
    "is_p_frobenius",
    "is_p_isogeny",
    "is_p_steinberg",
    "is_tame",
    "isomorphic",
    "lift_automorphism",
    "optimal_embedding",
    "radical",
    "recover_components",
    "simply_connected",
    "smith_normal_form",
    "smooth_covering",
    "smooth_regular_embedding",
    "steinberg_obstruction_check",
    "tame_torus",
    "torus",
    "triple_of",
    "triples_equivalent",
    "validate",
    "validate_p_morphism",
]
