"""Fast oracle checks run by ``mis-lab selftest``."""

from __future__ import annotations

from fractions import Fraction

from .boundary import h_boundary, h_boundary_limit, distribute_tau
from .counting import (BoundaryRegion, MisSpec, pattern_count_bruteforce, pattern_count_exact,
                       region_projection_bruteforce, log_pattern_count_region)
from .lattice import Box, MultiplierVector, enumerate_hist_oracle, hist_J, hist_K
from .sft2d import preset_spec, frame_count_bruteforce, frame_count_empirical
from .subshift import SubshiftSpec, word_counts


def run_checks():
    """Yield (name, ok, detail) triples."""
    golden = SubshiftSpec.golden_mean()
    out = []

    counts = word_counts(golden, 6)
    out.append(("golden_word_counts", counts == [1, 2, 3, 5, 8, 13, 21], str(counts)))

    p = MultiplierVector((2, 3))
    box = Box((13, 10))
    J, K = enumerate_hist_oracle(box, p)
    ok = J.counts == hist_J(box, p).counts and K.counts == hist_K(box, p).counts
    out.append(("chain_histograms", ok, f"box {box.sides}"))

    mis = MisSpec(MultiplierVector((2, 2)), golden)
    small = Box((3, 4))
    a, b = pattern_count_exact(mis, small), pattern_count_bruteforce(mis, small)
    out.append(("box_count_vs_bruteforce", a == b, f"{a} vs {b}"))

    region = BoundaryRegion(Box((4, 4)), (2, 2))
    lhs = float(log_pattern_count_region(mis, region, 64).mid)
    rhs = region_projection_bruteforce(mis, region)
    import math
    out.append(("frame_count_vs_bruteforce", abs(lhs - math.log(rhs)) < 1e-12, f"{rhs}"))

    mis23 = MisSpec.make((2, 3), golden)
    tau = Fraction(1, 10)
    closed = h_boundary(mis23, tau, 64)
    limit = h_boundary_limit(mis23, distribute_tau(tau, (2, 3)), 64)
    out.append(("boundary_closed_form", closed.overlaps(limit), closed.to_decimal(15)))

    spec = preset_spec("no_vertical_pair")
    a, b = frame_count_empirical(spec, 2, 3, 1), frame_count_bruteforce(spec, 2, 3, 1)
    out.append(("sft2d_frame_dp", a == b, f"{a} vs {b}"))
    return out
