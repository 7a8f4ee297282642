"""
Inequality verdict records and their JSON-lines / CSV serialization.
"""

import csv
import io
import json
import math
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, ConfigDict, Field

from lpbounds.config import get_settings
from lpbounds.exponents import Exponent, exponent_sort_key, format_exponent, parse_exponent

SCHEMA_VERSION = 1


class ClaimId(str, Enum):
    """
    Every checked claim. Definition order is the deterministic report order.
    """

    THEOREM1 = "theorem1"
    THEOREM1_TIGHTENED = "theorem1-tightened"
    THEOREM1_SUPNORM_FORM = "theorem1-supnorm-form"
    COROLLARY1_LOWER = "corollary1-lower"
    COROLLARY1_UPPER = "corollary1-upper"
    COROLLARY2_LOWER = "corollary2-lower"
    COROLLARY2_UPPER = "corollary2-upper"
    RENYI_LOWER = "renyi-lower"
    RENYI_UPPER = "renyi-upper"
    PROPOSITION1 = "proposition1"
    LEMMA1 = "lemma1"
    LEMMA1_INTERMEDIATE_LOWER = "lemma1-intermediate-lower"
    LEMMA1_INTERMEDIATE_UPPER = "lemma1-intermediate-upper"
    LEMMA3 = "lemma3"
    LEMMA4 = "lemma4"
    LEMMA5 = "lemma5"
    LEMMA5_TIGHTENED = "lemma5-tightened"
    LEMMA5_SQUARE = "lemma5-square"
    SYMMETRIC_DENSITY_BOUND = "symmetric-density-bound"
    DIFFERENCE_DENSITY_JENSEN = "difference-density-jensen"
    FINITE_MEASURE = "finite-measure"
    THEOREM2 = "theorem2"
    LEMMA2 = "lemma2"
    LEMMA4_ND = "lemma4-nd"
    LEMMA6 = "lemma6"
    LEMMA6_SQUARE = "lemma6-square"
    SYMMETRIC_DENSITY_BOUND_ND = "symmetric-density-bound-nd"

    @property
    def order(self) -> int:
        return _CLAIM_ORDER[self]

    @property
    def is_multivariate(self) -> bool:
        return self in MULTIVARIATE_CLAIMS

    @property
    def log_form(self) -> bool:
        """Claims whose sides are logarithms; tightness is exp(lhs - rhs)."""
        return self in LOG_FORM_CLAIMS


_CLAIM_ORDER = {claim: i for i, claim in enumerate(ClaimId)}

MULTIVARIATE_CLAIMS = frozenset(
    {
        ClaimId.THEOREM2,
        ClaimId.LEMMA2,
        ClaimId.LEMMA4_ND,
        ClaimId.LEMMA6,
        ClaimId.LEMMA6_SQUARE,
        ClaimId.SYMMETRIC_DENSITY_BOUND_ND,
    }
)
LOG_FORM_CLAIMS = frozenset(
    {
        ClaimId.COROLLARY2_LOWER,
        ClaimId.COROLLARY2_UPPER,
        ClaimId.RENYI_LOWER,
        ClaimId.RENYI_UPPER,
    }
)

CSV_COLUMNS = (
    "claim_id",
    "family",
    "params_digest",
    "p",
    "q",
    "alpha",
    "lhs",
    "rhs",
    "margin",
    "tightness",
    "holds",
)
ND_CSV_COLUMNS = CSV_COLUMNS + ("n", "sigma_digest")


class InequalityVerdict(BaseModel):
    """
    Outcome of one inequality check ``lhs <= rhs``.

    ``holds`` is true iff ``margin >= -tol * max(|lhs|, |rhs|)``. Exponents are
    stored as strings (``"inf"`` for infinity) so every record survives JSON.
    """

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    claim_id: ClaimId
    lhs: float
    rhs: float
    margin: float
    tightness: float
    holds: bool
    tol: float = Field(gt=0)
    p: Optional[str] = None
    q: Optional[str] = None
    alpha: Optional[float] = None
    n: Optional[int] = None
    family: str = ""
    params_digest: str = ""
    sigma_digest: Optional[str] = None
    exact: bool = False
    in_theorem_range: bool = True

    @property
    def p_value(self) -> Optional[Exponent]:
        return None if self.p is None else parse_exponent(self.p)

    @property
    def q_value(self) -> Optional[Exponent]:
        return None if self.q is None else parse_exponent(self.q)

    def sort_key(self) -> Tuple[Any, ...]:
        return (
            self.claim_id.order,
            self.family,
            self.params_digest,
            -1.0 if self.p is None else exponent_sort_key(parse_exponent(self.p)),
            -1.0 if self.q is None else exponent_sort_key(parse_exponent(self.q)),
            -1.0 if self.alpha is None else self.alpha,
            0 if self.n is None else self.n,
        )

    def csv_row(self, columns: Sequence[str] = CSV_COLUMNS) -> List[str]:
        row = []
        for name in columns:
            value = getattr(self, name)
            if isinstance(value, Enum):
                row.append(str(value.value))
            elif isinstance(value, bool):
                row.append("true" if value else "false")
            elif isinstance(value, float):
                row.append(repr(value))
            elif value is None:
                row.append("")
            else:
                row.append(str(value))
        return row


def make_verdict(
    claim_id: ClaimId,
    lhs: float,
    rhs: float,
    *,
    exact: bool,
    p: Optional[Exponent] = None,
    q: Optional[Exponent] = None,
    alpha: Optional[float] = None,
    n: Optional[int] = None,
    density: Any = None,
    sigma_digest: Optional[str] = None,
    tol: Optional[float] = None,
) -> InequalityVerdict:
    """
    Build a verdict for ``lhs <= rhs``.

    Args:
        exact: True when every quantity came from a closed form or exact
            segment integral; selects the tighter default tolerance
        density: Density (or profile) the claim was checked on, for the
            family label and parameter digest
        tol: Explicit tolerance, overriding the settings defaults
    """
    cfg = get_settings()
    if tol is None:
        tol = cfg.closed_form_tol if exact else cfg.verdict_tol
    lhs, rhs = float(lhs), float(rhs)
    margin = rhs - lhs
    holds = margin >= -tol * max(abs(lhs), abs(rhs))
    if claim_id.log_form:
        tightness = math.exp(lhs - rhs)
    elif rhs > 0:
        tightness = lhs / rhs
    elif lhs == 0:
        tightness = 1.0
    else:
        tightness = math.inf
    target = getattr(density, "density", density)
    return InequalityVerdict(
        claim_id=claim_id,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        tightness=tightness,
        holds=bool(holds),
        tol=tol,
        p=None if p is None else format_exponent(p),
        q=None if q is None else format_exponent(q),
        alpha=None if alpha is None else float(alpha),
        n=n,
        family=target.describe() if target is not None else "",
        params_digest=target.digest() if target is not None else "",
        sigma_digest=sigma_digest,
        exact=exact,
        in_theorem_range=alpha is None or float(alpha) >= 1.0,
    )


def merge_verdicts(*groups: Iterable[InequalityVerdict]) -> List[InequalityVerdict]:
    """Concatenate verdict groups in a scheduling-independent order."""
    merged = [v for group in groups for v in group]
    return sorted(merged, key=InequalityVerdict.sort_key)


def write_jsonl(verdicts: Iterable[InequalityVerdict], stream: TextIO) -> int:
    count = 0
    for verdict in verdicts:
        stream.write(verdict.model_dump_json() + "\n")
        count += 1
    return count


def read_jsonl(stream: TextIO) -> List[InequalityVerdict]:
    return [
        InequalityVerdict.model_validate_json(line) for line in stream if line.strip()
    ]


def write_csv(
    verdicts: Iterable[InequalityVerdict],
    stream: TextIO,
    columns: Optional[Sequence[str]] = None,
) -> int:
    """
    Write verdicts as CSV with the fixed column order.

    Multivariate columns are appended automatically when any verdict carries
    a dimension.
    """
    rows = list(verdicts)
    if columns is None:
        columns = ND_CSV_COLUMNS if any(v.n is not None for v in rows) else CSV_COLUMNS
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for verdict in rows:
        writer.writerow(verdict.csv_row(columns))
    return len(rows)


def verdicts_to_csv(verdicts: Iterable[InequalityVerdict]) -> str:
    buffer = io.StringIO()
    write_csv(verdicts, buffer)
    return buffer.getvalue()


def summarize(verdicts: Iterable[InequalityVerdict]) -> Dict[str, Any]:
    """Counts per claim and the largest tightness seen."""
    summary: Dict[str, Dict[str, Any]] = {}
    for v in verdicts:
        entry = summary.setdefault(
            v.claim_id.value, {"checked": 0, "violations": 0, "max_tightness": 0.0}
        )
        entry["checked"] += 1
        entry["violations"] += 0 if v.holds else 1
        entry["max_tightness"] = max(entry["max_tightness"], v.tightness)
    return {"claims": summary}


def verdicts_to_json(verdicts: Iterable[InequalityVerdict]) -> str:
    return json.dumps([v.model_dump(mode="json") for v in verdicts], indent=2)
