"""Aggregate per-channel analysis: rank, extremality, wedge ranks, verdict."""

from dataclasses import dataclass

from .channel import KrausChannel, rank
from .entanglement import Verdict, classify_channel
from .errors import SizeGuardExceeded
from .invariants import ExtremalityReport, WedgeReport, is_extremal, wedge_invariants
from .linalg import DEFAULT_TOL, SIZE_GUARD, Tolerance


@dataclass(frozen=True)
class ChannelReport:
    """Everything the analyzer knows about one channel."""

    dim_h: int
    dim_k: int
    rank: int
    extremality: ExtremalityReport
    wedge: WedgeReport  # None when the tensor powers exceed the size guard
    verdict: Verdict
    rel_eps: float


def analyze_channel(
    phi: KrausChannel, tol: Tolerance = DEFAULT_TOL, size_guard: int = SIZE_GUARD
) -> ChannelReport:
    """Run the full battery on a channel; the wedge is skipped above the guard."""
    try:
        wedge = wedge_invariants(phi, tol, size_guard)
    except SizeGuardExceeded:
        wedge = None
    return ChannelReport(
        dim_h=phi.dim_h,
        dim_k=phi.dim_k,
        rank=rank(phi, tol),
        extremality=is_extremal(phi, tol),
        wedge=wedge,
        verdict=classify_channel(phi, tol),
        rel_eps=tol.rel_eps,
    )


def report_to_json_dict(report: ChannelReport) -> dict:
    wedge = (
        {"w": report.wedge.w, "w_star": report.wedge.w_star}
        if report.wedge is not None
        else None
    )
    return {
        "dims": {"dim_h": report.dim_h, "dim_k": report.dim_k},
        "rank": report.rank,
        "extremal": report.extremality.extremal,
        "wedge": wedge,
        "verdict": report.verdict.to_json_dict(),
        "witnesses": {
            "verdict_witness": float(report.verdict.witness_value),
            "extremality_gram_rank": report.extremality.gram_rank,
            "extremality_min_singval": float(report.extremality.min_singval),
        },
        "tolerances": {"rel_eps": report.rel_eps},
        "seed": None,
    }
