"""Per-brand sentiment shares and the satisfaction ranking."""

import warnings
from dataclasses import dataclass
from typing import Optional

from .corpus import Label

UNATTRIBUTED = "unattributed"


class ReportWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BrandSummary:
    brand: str
    positive: int
    negative: int
    tested: Optional[int] = None

    def __post_init__(self):
        if self.positive < 0 or self.negative < 0 or self.n_classified == 0:
            raise ValueError(f"brand {self.brand!r} needs at least one classified document")

    @property
    def n_classified(self):
        return self.positive + self.negative

    @property
    def positive_pct(self):
        return self.positive / self.n_classified

    @property
    def negative_pct(self):
        return self.negative / self.n_classified

    def to_dict(self):
        return {
            "brand": self.brand,
            "tested": self.tested if self.tested is not None else self.n_classified,
            "n_classified": self.n_classified,
            "positive": self.positive,
            "negative": self.negative,
            "positive_pct": self.positive_pct,
            "negative_pct": self.negative_pct,
        }


def summarize_brand(predictions, brands=(), tested=None):
    """Count labels per brand.

    ``predictions`` yields ``(brand, label)`` pairs; a missing brand is
    counted under ``"unattributed"``. Brands listed in ``brands`` that got no
    predictions are left out with a warning. ``tested`` optionally maps brand
    to the number of documents sent to the classifier; a mismatch with the
    classified count is warned about, never silently reconciled.
    """
    counts = {}
    for brand, label in predictions:
        brand = brand or UNATTRIBUTED
        pos, neg = counts.get(brand, (0, 0))
        if Label(label) is Label.POSITIVE:
            pos += 1
        else:
            neg += 1
        counts[brand] = (pos, neg)

    tested = dict(tested or {})
    for brand in brands:
        if brand not in counts:
            warnings.warn(f"brand {brand!r} has no classified documents; omitted", ReportWarning)
    if UNATTRIBUTED in counts:
        warnings.warn(
            f"{sum(counts[UNATTRIBUTED])} predictions carry no brand; reported as {UNATTRIBUTED!r}",
            ReportWarning,
        )

    summaries = []
    for brand in sorted(counts):
        pos, neg = counts[brand]
        n_tested = tested.get(brand)
        if n_tested is not None and n_tested != pos + neg:
            warnings.warn(
                f"brand {brand!r}: {n_tested} documents tested but {pos + neg} classified",
                ReportWarning,
            )
        summaries.append(BrandSummary(brand, pos, neg, n_tested))
    return summaries


def rank_by_satisfaction(summaries):
    """Highest positive share first; ties go to more data, then brand name."""
    return sorted(summaries, key=lambda s: (-s.positive_pct, -s.n_classified, s.brand))


def fmt_pct(share):
    return f"{share * 100:.1f}"


def render_table(summaries):
    rows = [("Brand", "Testing Data Number", "Positive", "Negative")]
    for s in summaries:
        rows.append((
            s.brand,
            str(s.tested if s.tested is not None else s.n_classified),
            f"{s.positive} ({fmt_pct(s.positive_pct)}%)",
            f"{s.negative} ({fmt_pct(s.negative_pct)}%)",
        ))
    widths = [max(len(r[c]) for r in rows) for c in range(4)]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [row[c].rjust(widths[c]) for c in range(1, 4)]
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"
