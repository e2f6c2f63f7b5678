"""Tuning knobs with their theoretical defaults and desk-scale defaults.

Every knob that the analysis pins to a specific asymptotic value is kept
here twice: ``theory`` is the value the guarantees are stated for,
``desk`` is the value used by default so that test suites and benches
finish in seconds.  Metric files echo both so a reader can always tell
which regime produced a number.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, asdict


def ell_theory(n: int, c0: int) -> int:
    """Pair-sample size that backs the 1/n^3 failure bound of the group test."""
    return max(100 ** 3, math.ceil((90 * math.log(4 * n ** 3)) ** 2), (6 * c0 + 3) ** 2)


def ell_desk(c0: int) -> int:
    return max(400, (6 * c0 + 3) ** 2)


def lam_theory(n: int) -> int:
    """Pivot-pool instance count for the O(1) expected interval occupancy."""
    return math.ceil(n * n * math.log(max(n, 2)))


def lam_desk(n: int) -> int:
    return max(64, math.ceil(n * math.log(max(n, 2))))


def trie_sample_theory(t0: int, n: int) -> int:
    t0 = max(t0, 2)
    return math.ceil(t0 * math.log(t0) * math.log(max(n, 2)))


def coupling_degree_theory(d0: int) -> int:
    """Degree bound certified by the elimination-ideal argument (astronomical)."""
    return 2 * (d0 * d0 // 2 + d0) ** 16


def coupling_degree_desk(d0: int) -> int:
    return max(2 * d0 * d0, 4)


@dataclass
class Knobs:
    """Desk-scale configuration for training and operation.

    ``None`` fields fall back to the desk defaults above at the point of
    use; explicit values win.  ``cap_log`` collects a line per knob whose
    theoretical value was replaced, so the substitution is never silent.
    """

    ell: int | None = None                # pair-sample size for the group test
    lam: int | None = None                # instances pooled for pivots / canonical net
    trie_sample_cap: int = 4096           # hard cap on trie training instances
    outcome_bound_scale: int = 4          # constant in front of the outcome-count bounds
    d_test: int | None = None             # degree used by the coupling/triple tests
    rank_tol: float = 1e-8                # relative tolerance of the numerical rank test
    exact_rank: bool = False              # route dependence tests through rationals
    c_net: int = 8                        # disk-net size cap multiplier (|net| <= c_net * n)
    net_audit_disks: int = 2000           # random heavy disks checked per net audit
    ell_floor: int = 16                   # below this the group test is meaningless
    group_test_margin: float = 1.0        # multiplies the LMS threshold (1.0 = exact rule)
    direct_split_dt: bool = False         # skip the sampling recursion in dt_from_split_tree
    seed: int = 0
    cap_log: list[str] = field(default_factory=list)

    def resolve_ell(self, n: int, c0: int) -> int:
        if self.ell is not None:
            return self.ell
        desk = ell_desk(c0)
        self.cap_log.append(f"ell: theory {ell_theory(n, c0)} -> desk {desk}")
        return desk

    def resolve_lam(self, n: int) -> int:
        if self.lam is not None:
            return self.lam
        desk = lam_desk(n)
        self.cap_log.append(f"lam: theory {lam_theory(n)} -> desk {desk}")
        return desk

    def resolve_trie_samples(self, t0: int, n: int) -> int:
        want = trie_sample_theory(t0, n)
        if want > self.trie_sample_cap:
            self.cap_log.append(
                f"trie samples: theory {want} capped at {self.trie_sample_cap} (t0={t0})"
            )
            return self.trie_sample_cap
        return want

    def resolve_d_test(self, d0: int) -> int:
        if self.d_test is not None:
            return self.d_test
        desk = coupling_degree_desk(d0)
        self.cap_log.append(
            f"d_test: theory {coupling_degree_theory(d0)} -> desk {desk}"
        )
        return desk

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("cap_log")
        return d


ENV_PREFIX = "SELFIMPROVE_"


def knobs_from_env(base: Knobs | None = None) -> Knobs:
    """Apply SELFIMPROVE_* environment overrides onto ``base`` (for CI)."""
    k = base or Knobs()
    for name, caster in (
        ("ell", int), ("lam", int), ("trie_sample_cap", int), ("d_test", int),
        ("rank_tol", float), ("c_net", int), ("seed", int),
    ):
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            setattr(k, name, caster(raw))
    return k
