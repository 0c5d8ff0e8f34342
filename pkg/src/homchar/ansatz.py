"""Homomorphism-basis ansatz: expansion, constraint extraction, solution families.

Writing each unknown as f_i = sum_j c_{i,j} phi_j and substituting into the
equation turns it into a polynomial identity in the formal values
X_j = phi_j(x).  Because powers of distinct homomorphisms are algebraically
independent, the coefficient of every monomial must vanish; those vanishing
conditions are the constraint system.  The admissible supports of exact
solutions are block partitions of the row indices, one homomorphism per
block, with a power-sum condition on each block's coefficients.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .equation import ExponentProfile
from .errors import IncompleteAssignmentError
from .expr import MultiIndex, SymbolId, SymbolUniverse, SymPoly, UnknownPoly, collect_coefficients, hom, poly_pow
from .scalars import GaussRational

DEFAULT_SEED = 42
BLOCK_RESIDUAL_TOL = 1e-9
SUBSTITUTION_TOL = 1e-8
SUBSTITUTION_SAMPLES = 16


def unknown_name(row: int, column: int) -> str:
    """Canonical name for the coefficient of phi_column in row ``row`` (1-based)."""
    return f"c{row}_{column}"


def ansatz_universe(profile: ExponentProfile, k: int) -> SymbolUniverse:
    symbols = [hom(j) for j in range(1, k + 1)]
    unknowns = [unknown_name(i, j) for i in range(1, profile.n + 1) for j in range(1, k + 1)]
    return SymbolUniverse.of(symbols, unknowns)


def expand_ansatz(profile: ExponentProfile, k: int) -> SymPoly:
    """Full expansion of  sum_i (c_{i,1} X_1^{p_i} + ... + c_{i,k} X_k^{p_i})^{q_i}.

    Every monomial of the result has total degree N.
    """
    if k < 1:
        raise ValueError("need at least one homomorphism")
    universe = ansatz_universe(profile, k)
    total = SymPoly.zero(universe)
    for i, (p, q) in enumerate(profile.rows, start=1):
        base = SymPoly.zero(universe)
        for j in range(1, k + 1):
            coeff = SymPoly.from_unknown(universe, unknown_name(i, j))
            base = base + coeff * SymPoly.from_symbol(universe, hom(j), p)
        total = total + poly_pow(base, q).scale(profile.row_multiplier(i - 1))
    return total


@dataclass(frozen=True)
class ConstraintSystem:
    """The vanishing conditions, one per monomial of the expanded ansatz."""

    profile: ExponentProfile
    k: int
    universe: SymbolUniverse
    entries: tuple[tuple[MultiIndex, UnknownPoly], ...]

    def monomial_text(self, mono: MultiIndex) -> str:
        factors = [
            f"X{j + 1}" if e == 1 else f"X{j + 1}^{e}"
            for j, e in enumerate(mono)
            if e
        ]
        return "*".join(factors) if factors else "1"

    def rendered(self) -> list[tuple[str, str]]:
        return [
            (self.monomial_text(mono), poly.render(self.universe.unknowns))
            for mono, poly in self.entries
        ]

    def evaluate_exact(self, values: Mapping[str, GaussRational]) -> list[GaussRational]:
        ordered = [GaussRational.of(values[name]) for name in self.universe.unknowns]
        return [poly.evaluate(ordered) for _, poly in self.entries]

    def evaluate_complex(self, values: Mapping[str, complex]) -> list[complex]:
        ordered = [complex(values[name]) for name in self.universe.unknowns]
        return [poly.evaluate_complex(ordered) for _, poly in self.entries]

    def satisfied_exactly(self, values: Mapping[str, GaussRational]) -> bool:
        return all(v.is_zero for v in self.evaluate_exact(values))


def extract_constraints(profile: ExponentProfile, k: int) -> ConstraintSystem:
    """Collect the expanded ansatz by monomial; each coefficient must vanish."""
    expansion = expand_ansatz(profile, k)
    return ConstraintSystem(
        profile=profile,
        k=k,
        universe=expansion.universe,
        entries=tuple(collect_coefficients(expansion)),
    )


# -- solution families ------------------------------------------------------


@dataclass(frozen=True)
class PartitionFamily:
    """A block decomposition of the row indices with per-block coefficient constraints.

    Block j is served by its own homomorphism phi_j.  For a row i in block j
    the solution is f_i = c_i phi_j, and the block coefficients satisfy
    sum over the block of c_i^{q_i} = 0.  When the first row has outer power
    one it may spread over every block as f_1 = sum_j c_{1,j} phi_j, entering
    each block constraint linearly.
    """

    profile: ExponentProfile
    blocks: tuple[tuple[int, ...], ...]
    shares_row1: bool

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def irreducible(self) -> bool:
        return self.k == 1

    def block_of(self, row: int) -> int:
        for j, block in enumerate(self.blocks):
            if row in block and not (self.shares_row1 and row == 1):
                return j
        raise KeyError(f"row {row} not in any block")

    def constraint_text(self, j: int) -> str:
        parts = []
        if self.shares_row1:
            parts.append(f"c1_{j + 1}")
        for i in self.blocks[j]:
            if self.shares_row1 and i == 1:
                continue
            q = self.profile.rows[i - 1][1]
            parts.append(f"c{i}" if q == 1 else f"c{i}^{q}")
        return " + ".join(parts) + " = 0"

    def render(self) -> str:
        blocks = " | ".join("{" + ",".join(map(str, block)) + "}" for block in self.blocks)
        constraints = "; ".join(self.constraint_text(j) for j in range(self.k))
        tag = " (irreducible form)" if self.irreducible else ""
        return f"blocks {blocks}{tag}: {constraints}"

    def block_residuals(self, values: Mapping) -> list[complex]:
        """Exact-shape residuals of each block constraint at a complex assignment."""
        normalized = _normalize_assignment(self, values)
        out = []
        for j, block in enumerate(self.blocks):
            total = 0j
            if self.shares_row1:
                total += normalized[(1, j)]
            for i in block:
                if self.shares_row1 and i == 1:
                    continue
                q = self.profile.rows[i - 1][1]
                total += normalized[i] ** q
            out.append(total)
        return out


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All set partitions, blocks ordered by first occurrence (restricted growth)."""
    items = list(items)
    if not items:
        yield []
        return

    def rec(index: int, blocks: list[list[int]]) -> Iterator[list[list[int]]]:
        if index == len(items):
            yield [list(b) for b in blocks]
            return
        for block in blocks:
            block.append(items[index])
            yield from rec(index + 1, blocks)
            block.pop()
        blocks.append([items[index]])
        yield from rec(index + 1, blocks)
        blocks.pop()

    yield from rec(1, [[items[0]]])


def solution_families(profile: ExponentProfile) -> list[PartitionFamily]:
    """Every admissible block decomposition, fewest blocks first.

    The number of blocks stays below the number of rows (an all-singleton
    split would force every function to vanish); the single-block family is
    the irreducible form with the full power-sum constraint.
    """
    n = profile.n
    q1 = profile.rows[0][1]
    shares = q1 == 1 and n > 1
    if n == 1:
        return [PartitionFamily(profile, ((1,),), shares_row1=q1 == 1)]
    base_items = list(range(2, n + 1)) if shares else list(range(1, n + 1))
    families = []
    for blocks in _set_partitions(base_items):
        if len(blocks) > n - 1:
            continue
        if shares:
            blocks = [[1, *sorted(b)] for b in blocks]
        shaped = tuple(tuple(sorted(b)) for b in blocks)
        shaped = tuple(sorted(shaped))
        families.append(PartitionFamily(profile, shaped, shares_row1=shares))
    families.sort(key=lambda fam: (fam.k, fam.blocks))
    return families


def solve_block_constraint(
    q_exponents: Sequence[int],
    fixed: Mapping[int, complex],
    free_index: int,
) -> list[complex]:
    """All roots c of  c^q = -(sum of the fixed powers), by ascending argument."""
    if free_index in fixed:
        raise ValueError("the free index must not carry a fixed value")
    missing = set(range(len(q_exponents))) - set(fixed) - {free_index}
    if missing:
        raise IncompleteAssignmentError(f"no values for indices {sorted(missing)}")
    target = -sum(complex(fixed[i]) ** q_exponents[i] for i in fixed)
    q = q_exponents[free_index]
    if q < 1:
        raise ValueError("exponent must be positive")
    if target == 0:
        return [0j] * q
    radius = abs(target) ** (1.0 / q)
    theta = cmath.phase(target)
    roots = [radius * cmath.exp(1j * (theta + 2 * math.pi * k) / q) for k in range(q)]
    return sorted(roots, key=cmath.phase)


@dataclass(frozen=True)
class FamilyVerdict:
    holds: bool
    block_residuals: tuple[float, ...]
    substitution_residual: float


def _normalize_assignment(family: PartitionFamily, values: Mapping) -> dict:
    normalized: dict = {}
    for key, value in values.items():
        normalized[key] = complex(value)
    needed = []
    if family.shares_row1:
        needed.extend((1, j) for j in range(family.k))
    for block in family.blocks:
        for i in block:
            if family.shares_row1 and i == 1:
                continue
            needed.append(i)
    missing = [key for key in needed if key not in normalized]
    if missing:
        raise IncompleteAssignmentError(f"assignment misses {missing}")
    return normalized


def check_family(
    profile: ExponentProfile,
    family: PartitionFamily,
    values: Mapping,
    *,
    seed: int = DEFAULT_SEED,
    samples: int = SUBSTITUTION_SAMPLES,
    block_tol: float = BLOCK_RESIDUAL_TOL,
    substitution_tol: float = SUBSTITUTION_TOL,
) -> FamilyVerdict:
    """Verify a numeric assignment: block constraints plus sampled substitution.

    The assignment maps row index -> c_i, and (1, j) -> c_{1,j} when the
    first row is shared.  The substitution check evaluates the expanded
    ansatz with the induced coefficient matrix at random complex points.
    """
    normalized = _normalize_assignment(family, values)
    block_res = [abs(r) for r in family.block_residuals(normalized)]

    coeffs: dict[str, complex] = {
        unknown_name(i, j): 0j
        for i in range(1, profile.n + 1)
        for j in range(1, family.k + 1)
    }
    if family.shares_row1:
        for j in range(family.k):
            coeffs[unknown_name(1, j + 1)] = normalized[(1, j)]
    for block_idx, block in enumerate(family.blocks):
        for i in block:
            if family.shares_row1 and i == 1:
                continue
            coeffs[unknown_name(i, block_idx + 1)] = normalized[i]

    expansion = expand_ansatz(profile, family.k)
    ordered = [coeffs[name] for name in expansion.universe.unknowns]
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        point = [
            rng.uniform(0.5, 1.0) * cmath.exp(2j * math.pi * rng.random())
            for _ in range(family.k)
        ]
        value = 0j
        for mono, coeff in expansion.terms.items():
            term = coeff.evaluate_complex(ordered)
            for e, x in zip(mono, point):
                if e:
                    term *= x**e
            value += term
        worst = max(worst, abs(value))
    holds = all(r <= block_tol for r in block_res) and worst <= substitution_tol
    return FamilyVerdict(holds, tuple(block_res), worst)


# -- structural cross-check helpers ----------------------------------------


def monomials_collide(p_i: int, J_i: Sequence[int], p_j: int, J_j: Sequence[int]) -> bool:
    """Two ansatz addends share a monomial iff their exponent patterns scale together."""
    return all(a * p_i == b * p_j for a, b in zip(J_i, J_j))


def refine_assignment(
    system: ConstraintSystem,
    start: Sequence[complex],
    *,
    iterations: int = 60,
) -> list[complex] | None:
    """Gauss-Newton refinement of a random start toward the constraint variety.

    Returns the refined assignment when the residual drops below 1e-12,
    otherwise None.  Used by the small-scale completeness check.
    """
    names = system.universe.unknowns
    values = list(start)
    polys = [poly for _, poly in system.entries]
    partials = [
        [poly.partial(col) for col in range(len(names))]
        for poly in polys
    ]
    for _ in range(iterations):
        residual = [poly.evaluate_complex(values) for poly in polys]
        norm = max(abs(r) for r in residual) if residual else 0.0
        if norm < 1e-12:
            return values
        jac = [
            [entry.evaluate_complex(values) for entry in row]
            for row in partials
        ]
        step = _min_norm_step(jac, residual)
        if step is None:
            return None
        values = [v + s for v, s in zip(values, step)]
    residual = [poly.evaluate_complex(values) for poly in polys]
    if residual and max(abs(r) for r in residual) < 1e-12:
        return values
    return None


def _min_norm_step(jac: list[list[complex]], residual: list[complex]) -> list[complex] | None:
    """Solve J J* y = -r and return J* y (the minimum-norm Newton step)."""
    rows = len(jac)
    cols = len(jac[0]) if rows else 0
    gram = [
        [sum(jac[a][c] * jac[b][c].conjugate() for c in range(cols)) for b in range(rows)]
        for a in range(rows)
    ]
    rhs = [-r for r in residual]
    y = _solve_dense(gram, rhs)
    if y is None:
        return None
    return [sum(jac[a][c].conjugate() * y[a] for a in range(rows)) for c in range(cols)]


def _solve_dense(matrix: list[list[complex]], rhs: list[complex]) -> list[complex] | None:
    n = len(matrix)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if abs(aug[pivot][col]) < 1e-14:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def random_start(system: ConstraintSystem, rng: random.Random, spread: float = 1.5) -> list[complex]:
    return [
        complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        for _ in system.universe.unknowns
    ]
