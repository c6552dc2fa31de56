"""Verdict rows for congruence checks.

Every check in the suite reduces to "are these two residues congruent at
this modulus": one CongruenceReport records the two sides, the modulus,
and the resulting verdict for a single (case, prime, check) triple.
Checks that do not apply at a prime report SKIP with the reason inline,
so a sweep shows its full coverage rather than silently thinning out.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

__all__ = [
    "CongruenceReport",
    "TSV_HEADER",
    "compare",
    "skip",
]

TSV_HEADER = "case_id\tp\tcheck\tlhs\trhs\tmodulus\tverdict\textra"


@dataclass(frozen=True)
class CongruenceReport:
    """One check outcome.  verdict is PASS, FAIL, or SKIP(reason)."""

    case_id: str
    p: int
    check: str
    lhs: int
    rhs: int
    modulus: int
    verdict: str
    extra: str = ""

    @property
    def passed(self):
        return self.verdict == "PASS"

    @property
    def failed(self):
        return self.verdict == "FAIL"

    @property
    def skipped(self):
        return self.verdict.startswith("SKIP")

    def as_dict(self):
        return asdict(self)

    def tsv_row(self):
        return "\t".join(
            str(x)
            for x in (
                self.case_id,
                self.p,
                self.check,
                self.lhs,
                self.rhs,
                self.modulus,
                self.verdict,
                self.extra,
            )
        )


def compare(case_id, p, check, lhs, rhs, modulus, extra=""):
    """Reduce both sides and judge them at the given modulus."""
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    verdict = "PASS" if (lhs - rhs) % modulus == 0 else "FAIL"
    return CongruenceReport(
        case_id, p, check, lhs % modulus, rhs % modulus, modulus, verdict, extra
    )


def skip(case_id, p, check, reason):
    """A check that does not apply; the sweep records why."""
    return CongruenceReport(case_id, p, check, 0, 0, 0, f"SKIP({reason})")
