from __future__ import annotations

from itertools import permutations

from ..core import Isomorphism, SubIsoInstance, is_injective_homomorphism
from ..errors import BudgetError
from .budget import SolveBudget


def solve_subiso_bruteforce(
    inst: SubIsoInstance, budget: SolveBudget | None = None
) -> Isomorphism | None:
    """First injective homomorphism in lexicographic order of image tuples, if any."""
    budget = budget or SolveBudget()
    if inst.h.n > budget.max_pattern_vertices or inst.g.n > budget.max_host_vertices:
        raise BudgetError(
            f"oracle scale is pattern <= {budget.max_pattern_vertices}, "
            f"host <= {budget.max_host_vertices} vertices"
        )
    for image in permutations(range(1, inst.g.n + 1), inst.h.n):
        phi = Isomorphism(image)
        if is_injective_homomorphism(inst, phi):
            return phi
    return None
