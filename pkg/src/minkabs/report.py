"""Machine-readable run reports for the verification commands.

A report is deterministic for a fixed configuration and seed: the JSON
serialization sorts keys and, by default, zeroes the wall-clock timings
(opt back in with ``include_timings``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .quantum.verify import CheckResult

__all__ = ["RunReport", "sweep_csv", "SWEEP_CSV_HEADER"]

SWEEP_CSV_HEADER = "delta_t_sec,rapidity,leakage,N"


@dataclass
class RunReport:
    """Results of one verification suite run."""

    suite: str
    config: dict
    checks: list[CheckResult] = field(default_factory=list)
    tables: dict[str, list[dict]] = field(default_factory=dict)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, include_timings: bool = False) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "passed": self.all_passed(),
            "checks": [
                {
                    "name": c.name,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                    "bound": c.details.get("bound", "upper"),
                    "passed": c.passed,
                    "N": c.n,
                    "seconds": c.seconds if include_timings else 0.0,
                    "details": {
                        k: v for k, v in c.details.items() if k != "bound"
                    },
                }
                for c in self.checks
            ],
            "tables": self.tables,
        }

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(
            self.to_dict(include_timings=include_timings),
            indent=2,
            sort_keys=True,
            allow_nan=False,
        )

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            rel = "<=" if c.details.get("bound", "upper") == "upper" else ">="
            lines.append(
                f"{mark} {c.name}: residual {c.residual:.3e} {rel} {c.tolerance:.3e}"
            )
        return lines


def sweep_csv(rows: list[dict]) -> str:
    """Leakage sweep as CSV with the fixed header."""
    out = [SWEEP_CSV_HEADER]
    for r in rows:
        out.append(
            f"{r['delta_t_sec']!r},{r['rapidity']!r},{r['leakage']!r},{r['N']}"
        )
    return "\n".join(out) + "\n"
