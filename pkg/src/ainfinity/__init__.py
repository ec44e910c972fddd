"""Exact A-infinity algebra, bimodule and inner-product toolkit."""

from .ainf import AInfAlgebra, check_relations, from_dga
from .bimod import AInfBimodule, check_bimodule, dual, dual_self_bimodule, from_dg_bimodule, self_bimodule
from .diagrams import Diagram, differential, enumerate_diagrams, homology_ranks
from .graded import Q, Z, Z2, GradedBasis, Ring, TensorWord, Vector
from .hoch import HochschildCochain, bracket, connes_b, cup, delta
from .iprod import InnerProduct, check_inner_product, relation_terms
from .morph import BimoduleMorphism, check_morphism, compose, identity_morphism, pushforward
from .tensor import MultiMap

__all__ = [
    "AInfAlgebra", "AInfBimodule", "BimoduleMorphism", "Diagram", "GradedBasis", "HochschildCochain",
    "InnerProduct", "MultiMap", "Q", "Ring", "TensorWord", "Vector", "Z", "Z2",
    "bracket", "check_bimodule", "check_inner_product", "check_morphism", "check_relations", "compose",
    "connes_b", "cup", "delta", "differential", "dual", "dual_self_bimodule", "enumerate_diagrams",
    "from_dg_bimodule", "from_dga", "homology_ranks", "identity_morphism", "pushforward", "relation_terms",
    "self_bimodule",
]
