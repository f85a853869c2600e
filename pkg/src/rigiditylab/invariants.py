"""Rigidity certificates and flex-invariant angle combinations.

A polyhedron whose edge lengths are linearly independent over the rationals
is rigid; independence of exact lengths is decided by radicand bookkeeping,
and for numeric lengths a lattice search gives a "presumed" verdict
qualified by the coefficient height it checked.  Whenever lengths are
rationally dependent, each basis element of their rational span yields an
integer combination of lifted dihedral angles that must stay constant along
any flex; monitoring those combinations (plus enclosed volume and the
length-weighted angle sum) is the numerical check of that prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .flex import FlexPath
from .geometry import (
    Polyhedron,
    all_dihedrals,
    edge_length_vector,
    oriented_volume,
)
from .lengths import (
    DEPENDENT,
    INDEPENDENT_EXACT,
    INDEPENDENT_UP_TO_HEIGHT,
    IndependenceVerdict,
    SpanBasis,
    find_integer_relation,
    is_q_independent,
    q_basis,
)

RIGID = "rigid"
RIGID_PRESUMED = "rigid_presumed"
INCONCLUSIVE = "inconclusive"

DEPENDENCE_CAVEAT = (
    "a rational dependence among edge lengths does not imply flexibility; "
    "the independence condition is sufficient for rigidity only"
)


@dataclass
class RigidityCertificate:
    """Verdict of the length-independence rigidity test.

    ``verdict`` is one of RIGID, RIGID_PRESUMED, INCONCLUSIVE.  RIGID is
    only ever issued on exact evidence; RIGID_PRESUMED carries the height
    bound of the heuristic search.  ``constant_angle_edges`` lists canonical
    edge indices whose length lies outside the rational span of the others,
    so their lifted dihedral angle cannot move during any flex.
    """

    verdict: str
    mode: str
    evidence: IndependenceVerdict
    constant_angle_edges: tuple[int, ...] = ()
    height: int | None = None
    caveat: str | None = None

    def __post_init__(self):
        if self.verdict == RIGID:
            assert self.evidence.kind == INDEPENDENT_EXACT
        if self.verdict == RIGID_PRESUMED:
            assert self.height is not None


@dataclass
class InvariantCombination:
    """Integer coefficient vector over edges whose angle sum is conserved.

    One combination arises per basis element of the rational span of the
    edge lengths: the rational coefficients of the lengths on that basis
    element, cleared to integers by their common denominator.  Coefficients
    are integers and never all zero.
    """

    label: str
    coeffs: tuple[int, ...]
    claimed_constant: float

    def __post_init__(self):
        assert any(self.coeffs), "coefficients must not be all zero"
        assert all(isinstance(c, int) for c in self.coeffs)

    def value(self, angles: np.ndarray) -> float:
        return float(np.dot(self.coeffs, angles))


def constant_angle_edges(span: SpanBasis) -> tuple[int, ...]:
    """Edges whose length no rational combination of the others can reach.

    With lengths in the form r*sqrt(d) these are exactly the edges whose
    radicand appears once in the whole length set; their dihedral angles are
    predicted constant along every flex.
    """
    counts: dict[int, int] = {}
    owner: dict[int, list[int]] = {}
    for i, row in enumerate(span.coefficients):
        (j,) = [k for k, c in enumerate(row) if c != 0]
        d = span.basis[j].d
        counts[d] = counts.get(d, 0) + 1
        owner.setdefault(d, []).append(i)
    return tuple(sorted(owner[d][0] for d, c in counts.items() if c == 1))


def rigidity_certificate(
    P: Polyhedron,
    mode: str = "exact",
    height: int = 10**6,
    scale: int = 10**12,
    precision: int = 50,
    length_tol: float = 1e-9,
) -> RigidityCertificate:
    """Decide rigidity from rational (in)dependence of the edge lengths.

    Exact mode requires exact lengths on the polyhedron (from exact
    coordinates or declared); they are cross-checked against the float edge
    lengths so a declared set cannot silently disagree with the geometry.
    Numeric mode runs the lattice-reduction relation search on the float
    lengths and can only ever certify rigidity "up to height".
    """
    if mode not in ("exact", "numeric"):
        raise ValueError(f"mode must be 'exact' or 'numeric', got {mode!r}")
    float_lengths = edge_length_vector(P)
    if mode == "exact":
        exact = P.exact_edge_lengths()
        for ell, f in zip(exact, float_lengths):
            if abs(ell.value() - f) > length_tol * max(f, 1.0):
                raise ValueError(
                    f"exact length {ell} disagrees with measured length {f:.12g}"
                )
        verdict = is_q_independent(exact)
        if verdict.kind == INDEPENDENT_EXACT:
            span = q_basis(exact)
            return RigidityCertificate(
                RIGID, "exact", verdict, constant_angle_edges(span)
            )
        span = q_basis(exact)
        return RigidityCertificate(
            INCONCLUSIVE,
            "exact",
            verdict,
            constant_angle_edges(span),
            caveat=DEPENDENCE_CAVEAT,
        )
    relation = find_integer_relation(
        [repr(float(v)) for v in float_lengths],
        height=height,
        scale=scale,
        precision=precision,
    )
    if relation is None:
        verdict = IndependenceVerdict(INDEPENDENT_UP_TO_HEIGHT, height=height)
        return RigidityCertificate(
            RIGID_PRESUMED, "numeric", verdict, height=height
        )
    verdict = IndependenceVerdict(DEPENDENT, relation=relation)
    return RigidityCertificate(
        INCONCLUSIVE, "numeric", verdict, caveat=DEPENDENCE_CAVEAT
    )


def invariant_combinations(
    span: SpanBasis, initial_angles: np.ndarray
) -> list[InvariantCombination]:
    """One conserved integer combination per basis element of the span.

    ``initial_angles`` are the principal dihedral values at the starting
    configuration, in canonical edge order; they fix the claimed constant of
    each combination.
    """
    initial_angles = np.asarray(initial_angles, dtype=float)
    out = []
    for j, lam in enumerate(span.basis):
        column = [row[j] for row in span.coefficients]
        lcm = 1
        for c in column:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        coeffs = tuple(int(c * lcm) for c in column)
        out.append(
            InvariantCombination(
                label=str(lam),
                coeffs=coeffs,
                claimed_constant=float(np.dot(coeffs, initial_angles)),
            )
        )
    return out


@dataclass
class MonitoringReport:
    """Largest deviations of the conserved quantities along a flex path."""

    combination_deviations: list[float]
    volume_deviation: float
    weighted_angle_sum_deviation: float
    volume_initial: float
    weighted_angle_sum_initial: float
    n_samples: int
    volume_series: np.ndarray = field(repr=False, default=None)
    weighted_angle_sum_series: np.ndarray = field(repr=False, default=None)


def monitor_flex(
    path: FlexPath,
    combinations: list[InvariantCombination],
    P: Polyhedron | None = None,
) -> MonitoringReport:
    """Track every conserved quantity along a traced path.

    For each combination the maximal absolute deviation of its lifted-angle
    sum from the claimed constant is recorded, together with the deviations
    of the enclosed oriented volume and of the length-weighted angle sum.
    """
    if path.n_samples == 0:
        raise ValueError("empty path")
    comb_dev = []
    for comb in combinations:
        series = path.lifted_angles @ np.asarray(comb.coeffs, dtype=float)
        comb_dev.append(float(np.max(np.abs(series - comb.claimed_constant))))

    volumes = np.empty(path.n_samples)
    weighted = np.empty(path.n_samples)
    for k in range(path.n_samples):
        Pk = path.polyhedron_at(k)
        volumes[k] = oriented_volume(Pk)
        weighted[k] = float(
            np.dot(edge_length_vector(Pk), path.lifted_angles[k])
        )
    return MonitoringReport(
        combination_deviations=comb_dev,
        volume_deviation=float(np.max(np.abs(volumes - volumes[0]))),
        weighted_angle_sum_deviation=float(np.max(np.abs(weighted - weighted[0]))),
        volume_initial=float(volumes[0]),
        weighted_angle_sum_initial=float(weighted[0]),
        n_samples=path.n_samples,
        volume_series=volumes,
        weighted_angle_sum_series=weighted,
    )


def initial_principal_angles(P: Polyhedron) -> np.ndarray:
    """Principal dihedral values in canonical edge order."""
    return np.array([d.principal_value for d in all_dihedrals(P)])
