"""
Families Module - Q-index 极值问题中用到的各个图族
"""

from families.constructors import (
    FamilyParams,
    complete,
    complete_bipartite,
    degree_census,
    disjoint_union,
    f_family,
    family_by_name,
    g_e_t,
    join,
    kn_minus_e,
    kn_minus_perfect_matching,
    literal_statement_graph,
    odd_case_family,
    predicted_extremal,
    subdivided_clique,
)

__all__ = [
    "FamilyParams",
    "complete",
    "complete_bipartite",
    "degree_census",
    "disjoint_union",
    "f_family",
    "family_by_name",
    "g_e_t",
    "join",
    "kn_minus_e",
    "kn_minus_perfect_matching",
    "literal_statement_graph",
    "odd_case_family",
    "predicted_extremal",
    "subdivided_clique",
]
