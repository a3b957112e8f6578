"""Independent oracle computations for the test suite.

Everything here re-derives expected values along a different route than
the library: per-pattern trig evaluated directly from distances, the
mirror branch through the agreement-count sine instead of the distance
cosine, and brute-force sums over basis states. The oracles never call
the code paths they check.
"""

import math

from mirrorqam.patterns import BitPattern, PatternSet, hamming_distance


def branch_joint_probability(
    input_pattern: BitPattern, stored: BitPattern, n: int, b: int, branch_weight: float
) -> float:
    """weight * (1/p-free) cos^{2b}(pi d / 2n); caller divides by p."""
    d = hamming_distance(input_pattern, stored)
    return branch_weight * math.cos(math.pi * d / (2 * n)) ** (2 * b)


def mirror_branch_conditional(
    input_pattern: BitPattern, patterns: PatternSet, b: int
) -> dict[BitPattern, float]:
    """Branch-1 conditional over mirror-corrected outputs, via the sine route.

    The raw branch-1 output for stored pattern q is mirror(q), weighted by
    sin^{2b}(pi * agreements / 2n) where agreements = n - d(input, q).
    Mirror correction maps the key back to q.
    """
    n = patterns.n
    weights = {}
    for q in patterns:
        agreements = n - hamming_distance(input_pattern, q)
        weights[q] = math.sin(math.pi * agreements / (2 * n)) ** (2 * b)
    total = sum(weights.values())
    return {q: w / total for q, w in weights.items()}


def tv_distance(p: dict, q: dict) -> float:
    support = set(p) | set(q)
    return 0.5 * sum(abs(p.get(x, 0.0) - q.get(x, 0.0)) for x in support)


def quadrature_cos_power_average(b: int) -> float:
    """(2/pi) * integral of cos^{2b} over [0, pi/2] by adaptive quadrature."""
    from scipy.integrate import quad

    value, _ = quad(lambda x: math.cos(x) ** (2 * b), 0.0, math.pi / 2)
    return 2.0 / math.pi * value
