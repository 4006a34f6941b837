"""Thin convenience wrapper over the _outertrack extension module."""

from _outertrack import (
    audit_run,
    big_f_images,
    certify_folding,
    certify_unfolding,
    chi_minus,
    closed_form_matrix,
    construction_identity_holds,
    decompose,
    edge_order,
    ergodic_rank,
    gamma_edge_labels,
    gamma_rank,
    mixing_depth,
    monitor_subgroup,
    run_game,
    witness_loop_through,
)

__all__ = [
    "audit_run",
    "big_f_images",
    "certify_folding",
    "certify_unfolding",
    "chi_minus",
    "closed_form_matrix",
    "construction_identity_holds",
    "decompose",
    "edge_order",
    "ergodic_rank",
    "gamma_edge_labels",
    "gamma_rank",
    "mixing_depth",
    "monitor_subgroup",
    "run_game",
    "witness_loop_through",
]
