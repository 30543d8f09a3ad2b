"""Golden reading trace for the bundled three-sentence fixture document.

The fixture simulation at memory limit 5 must keep exactly these node sets,
choose these roots, and recall proposition 8 in cycle 3. `verify_golden`
checks a trace structurally and reports every mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .memory import SimulationTrace

GOLDEN_MEMORY_LIMIT = 5
GOLDEN_KEPT_SETS = (
    frozenset({2, 3, 4, 5, 7}),
    frozenset({7, 10, 11, 12, 13}),
    frozenset({8, 10, 11, 15, 16}),
)
GOLDEN_ROOTS = (4, 10, 11)
GOLDEN_RECALLED = (frozenset(), frozenset(), frozenset({8}))


@dataclass(frozen=True)
class GoldenReport:
    ok: bool
    diffs: tuple[str, ...]

    def __str__(self) -> str:
        return "golden trace ok" if self.ok else "\n".join(self.diffs)


def verify_golden(trace: SimulationTrace) -> GoldenReport:
    diffs: list[str] = []
    if trace.memory_limit != GOLDEN_MEMORY_LIMIT:
        diffs.append(f"memory limit {trace.memory_limit} != {GOLDEN_MEMORY_LIMIT}")
    if len(trace.cycles) != len(GOLDEN_KEPT_SETS):
        diffs.append(f"{len(trace.cycles)} cycles != {len(GOLDEN_KEPT_SETS)}")
    for i, snap in enumerate(trace.cycles[:len(GOLDEN_KEPT_SETS)]):
        n = i + 1
        if snap.kept_ids() != GOLDEN_KEPT_SETS[i]:
            diffs.append(
                f"cycle {n} kept {sorted(snap.kept_ids())} != "
                f"{sorted(GOLDEN_KEPT_SETS[i])}")
        if snap.root != GOLDEN_ROOTS[i]:
            diffs.append(f"cycle {n} root {snap.root} != {GOLDEN_ROOTS[i]}")
        if snap.recalled_ids() != GOLDEN_RECALLED[i]:
            diffs.append(
                f"cycle {n} recalled {sorted(snap.recalled_ids())} != "
                f"{sorted(GOLDEN_RECALLED[i])}")
    return GoldenReport(ok=not diffs, diffs=tuple(diffs))
