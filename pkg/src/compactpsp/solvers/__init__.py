from .budget import SolveBudget
from .cover import solve_exact_cover_bfs, solve_exact_cover_bnb
from .packing import packing_table, solve_set_packing_bnb, solve_set_packing_dp
from .subiso import solve_subiso_bruteforce
from .vecsum import VectorSumInstance, solve_vector_sum, xor_of

__all__ = [
    "SolveBudget",
    "VectorSumInstance",
    "packing_table",
    "solve_exact_cover_bfs",
    "solve_exact_cover_bnb",
    "solve_set_packing_bnb",
    "solve_set_packing_dp",
    "solve_subiso_bruteforce",
    "solve_vector_sum",
    "xor_of",
]
