"""Finite groups on multiplication tables: subgroups, Frattini theory, products."""
from .catalogue import catalogue, catalogue_group, catalogue_names
from .frattini import frattini_criterion, frattini_subgroup, is_frattini_epi, minimal_supplement, supplements
from .group import (
    SIZE_CAP,
    FiniteGroup,
    GroupError,
    GroupHom,
    direct_product,
    format_cycles,
    homomorphisms,
    parse_cycles,
)
from .iso import are_isomorphic, find_isomorphism
from .products import (
    FibreProduct,
    Semidirect,
    TypeMu,
    action_from_generators,
    check_action,
    conjugation_action,
    fibre_product,
    semidirect_product,
    seven_two_isos,
    trivial_action,
    type_mu_epi,
)
