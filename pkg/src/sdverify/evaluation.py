"""Synthetic labeled communities, false-trigger / effectiveness metrics, tables.

The real forums behind the reference results are not redistributable, so the
benchmark generates seeded synthetic communities with exact ground truth:
every member gets true characteristic values, declared values (honest or
deceiving), and posts of ASCII filler with marker pattern text embedded at
the configured signal and noise rates.  Filler is ASCII on purpose: shipped
markers are Cyrillic, so filler can never match one by accident.
"""

from __future__ import annotations

import csv
import io
import json
import random
import string
from dataclasses import dataclass, replace

from .corpus import AGE_BUCKETS, Corpus, DeclaredProfile, Post, list_members
from .errors import CoverageError, FormatError, MissingTruthError
from .lexicon import MarkerLexicon, compile_lexicon
from .verifier import (
    CONFIRMED,
    INFERRED,
    REFUTED,
    MemberReport,
    VerifierConfig,
    verify_member,
)
from ._rounding import percent_round_half_up

# Age spans used when inverting a declared age bucket into a birth year.
_BUCKET_SPANS = {value: (max(lo, 8), min(hi, 80)) for value, lo, hi in AGE_BUCKETS}


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of one generated community; fixed seed => fixed corpus."""

    label: str
    n_members: int
    posts_min: int
    posts_max: int
    signal_rate: float
    noise_rate: float
    deceiver_fraction: float
    characteristics: tuple[str, ...]
    seed: int
    reference_year: int = 2015

    def __post_init__(self):
        if self.n_members < 0 or self.posts_min < 0 or self.posts_max < self.posts_min:
            raise ValueError("invalid member/post counts")
        for name in ("signal_rate", "noise_rate", "deceiver_fraction"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass(frozen=True)
class GroundTruth:
    """True value per (member, characteristic) plus the deceiver flags."""

    values: dict[str, dict[str, str]]
    deceivers: frozenset[str]

    def true_value(self, member_id: str, characteristic: str) -> str:
        try:
            return self.values[member_id][characteristic]
        except KeyError:
            raise MissingTruthError(member_id) from None


@dataclass(frozen=True)
class EvaluationReport:
    label: str
    checked_members: int
    false_rate_percent: float
    effectiveness_percent: float
    # Raw counts; None for rows built from published percentages only.
    false_trigger_count: int | None = None
    effective_count: int | None = None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "checked_members": self.checked_members,
            "false_trigger_count": self.false_trigger_count,
            "effective_count": self.effective_count,
            "false_rate_percent": self.false_rate_percent,
            "effectiveness_percent": self.effectiveness_percent,
        }


def _insertable_markers(lexicon: MarkerLexicon,
                        characteristics: tuple[str, ...]) -> dict[tuple[str, str], list]:
    """Token/phrase markers per (characteristic, value); regexes are not
    invertible into text, so they cannot seed generated posts."""
    table: dict[tuple[str, str], list] = {}
    domains = {ch.id: ch.values for ch in lexicon.characteristics}
    for characteristic in characteristics:
        if characteristic not in domains:
            raise CoverageError(f"lexicon does not declare {characteristic!r}")
        for value in domains[characteristic]:
            table[(characteristic, value)] = []
    for marker in lexicon.markers:
        key = (marker.characteristic, marker.value)
        if key in table and marker.pattern_kind in ("token", "phrase"):
            table[key].append(marker)
    for (characteristic, value), markers in table.items():
        if not markers:
            raise CoverageError(
                f"no token/phrase marker for {characteristic!r}={value!r}")
    return table


def _filler_word(rng: random.Random) -> str:
    return "".join(rng.choice(string.ascii_lowercase)
                   for _ in range(rng.randint(3, 8)))


def _declared_birth_year(rng: random.Random, bucket: str, reference_year: int) -> int:
    lo, hi = _BUCKET_SPANS[bucket]
    return reference_year - rng.randint(lo, hi)


def generate_synthetic(spec: SyntheticSpec,
                       lexicon: MarkerLexicon) -> tuple[Corpus, GroundTruth]:
    """Build a labeled community; deterministic for a fixed spec.

    Declared profiles equal the true values except for deceivers, whose
    declared value per characteristic is drawn uniformly from the wrong
    values.  Each post, per characteristic, carries a true-value marker with
    probability signal_rate and a wrong-value marker with probability
    noise_rate.
    """
    insertable = _insertable_markers(lexicon, spec.characteristics)
    domains = {ch.id: ch.values for ch in lexicon.characteristics}
    rng = random.Random(spec.seed)

    member_ids = [f"m{i:05d}" for i in range(spec.n_members)]
    truths: dict[str, dict[str, str]] = {
        member_id: {c: rng.choice(domains[c]) for c in spec.characteristics}
        for member_id in member_ids
    }
    n_deceivers = round(spec.n_members * spec.deceiver_fraction)
    deceivers = frozenset(member_ids[i]
                          for i in sorted(rng.sample(range(spec.n_members), n_deceivers)))

    profiles: dict[tuple[str, str], DeclaredProfile] = {}
    posts: dict[tuple[str, str], tuple[Post, ...]] = {}
    for i, member_id in enumerate(member_ids):
        declared: dict[str, str] = {}
        for characteristic in spec.characteristics:
            true_value = truths[member_id][characteristic]
            if member_id in deceivers:
                wrong = [v for v in domains[characteristic] if v != true_value]
                declared[characteristic] = rng.choice(wrong)
            else:
                declared[characteristic] = true_value

        profile_fields: dict[str, object] = {}
        for characteristic, value in declared.items():
            if characteristic == "age_group":
                profile_fields["birth_year"] = _declared_birth_year(
                    rng, value, spec.reference_year)
            elif characteristic in ("gender", "residence", "education", "occupation"):
                profile_fields[characteristic] = value
        profiles[(spec.label, member_id)] = DeclaredProfile(
            member_id=member_id, community_id=spec.label, **profile_fields)

        member_posts = []
        n_posts = rng.randint(spec.posts_min, spec.posts_max)
        for j in range(n_posts):
            tokens = [_filler_word(rng) for _ in range(rng.randint(3, 8))]
            for characteristic in spec.characteristics:
                true_value = truths[member_id][characteristic]
                if rng.random() < spec.signal_rate:
                    marker = rng.choice(insertable[(characteristic, true_value)])
                    tokens.insert(rng.randint(0, len(tokens)), marker.pattern)
                if rng.random() < spec.noise_rate:
                    wrong = [v for v in domains[characteristic] if v != true_value]
                    value = rng.choice(wrong)
                    marker = rng.choice(insertable[(characteristic, value)])
                    tokens.insert(rng.randint(0, len(tokens)), marker.pattern)
            member_posts.append(Post(
                post_id=f"p{i:05d}-{j:04d}",
                community_id=spec.label,
                member_id=member_id,
                timestamp=1_000_000 + j,
                text=" ".join(tokens),
            ))
        if member_posts:
            posts[(spec.label, member_id)] = tuple(member_posts)

    truth = GroundTruth(values=truths, deceivers=deceivers)
    return Corpus(posts, profiles), truth


def _contradicts_truth(verdict, truth_value: str) -> bool:
    if verdict.verdict == CONFIRMED:
        return verdict.declared != truth_value
    if verdict.verdict == REFUTED:
        return verdict.declared == truth_value
    if verdict.verdict == INFERRED:
        return verdict.inferred != truth_value
    return False


def _matches_truth(verdict, truth_value: str) -> bool:
    if verdict.verdict == CONFIRMED:
        return verdict.declared == truth_value
    if verdict.verdict == REFUTED:
        return verdict.declared != truth_value
    if verdict.verdict == INFERRED:
        return verdict.inferred == truth_value
    return False


def evaluate(reports: list[MemberReport], truth: GroundTruth,
             label: str | None = None) -> EvaluationReport:
    """Member-level metrics.

    A member is a false trigger iff at least one definitive verdict
    contradicts ground truth; a member counts as effective iff at least one
    definitive verdict agrees with it.  Percentages are 100 x ratio rounded
    half-up to one decimal.
    """
    if label is None:
        label = reports[0].community_id if reports else ""
    checked = len(reports)
    false_triggers = 0
    effective = 0
    for report in reports:
        if report.member_id not in truth.values:
            raise MissingTruthError(report.member_id)
        is_false = False
        is_effective = False
        for verdict in report.verdicts:
            truth_value = truth.true_value(report.member_id, verdict.characteristic)
            if _contradicts_truth(verdict, truth_value):
                is_false = True
            if _matches_truth(verdict, truth_value):
                is_effective = True
        false_triggers += is_false
        effective += is_effective
    return EvaluationReport(
        label=label,
        checked_members=checked,
        false_rate_percent=percent_round_half_up(false_triggers, checked),
        effectiveness_percent=percent_round_half_up(effective, checked),
        false_trigger_count=false_triggers,
        effective_count=effective,
    )


def format_results_table(rows: list[EvaluationReport]) -> tuple[str, str]:
    """Render (text table, CSV).

    The text table mirrors the reference tabular layout and floors the
    percentages to integers for display; the CSV keeps one decimal and uses
    RFC-4180 quoting.
    """
    if not rows:
        raise ValueError("need at least one row")
    header = ("Community", "Checked", "False rate %", "Effectiveness %")
    cells = [
        (row.label, str(row.checked_members),
         str(int(row.false_rate_percent)), str(int(row.effectiveness_percent)))
        for row in rows
    ]
    widths = [max(len(header[col]), *(len(line[col]) for line in cells))
              for col in range(4)]
    lines = [
        "  ".join([header[0].ljust(widths[0])]
                  + [header[col].rjust(widths[col]) for col in (1, 2, 3)]).rstrip()
    ]
    for line in cells:
        lines.append("  ".join([line[0].ljust(widths[0])]
                               + [line[col].rjust(widths[col]) for col in (1, 2, 3)]).rstrip())
    table = "\n".join(lines) + "\n"

    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["community", "checked_members",
                     "false_rate_percent", "effectiveness_percent"])
    for row in rows:
        writer.writerow([row.label, row.checked_members,
                         format(row.false_rate_percent, ".1f"),
                         format(row.effectiveness_percent, ".1f")])
    return table, buffer.getvalue()


def run_benchmark(spec_set: list[SyntheticSpec], lexicon: MarkerLexicon,
                  config: VerifierConfig) -> list[EvaluationReport]:
    """Generate, verify, and evaluate every spec; deterministic per seed.

    The spec's characteristic selection and reference year override the
    config so declared buckets always line up with the generator.
    """
    matcher = compile_lexicon(lexicon)
    results = []
    for spec in spec_set:
        run_config = replace(config,
                             selected_characteristics=frozenset(spec.characteristics),
                             reference_year=spec.reference_year)
        corpus, truth = generate_synthetic(spec, lexicon)
        members = (list_members(corpus, spec.label)
                   if spec.label in corpus.communities else [])
        reports = [
            verify_member(corpus, matcher, lexicon, spec.label, member_id, run_config)
            for member_id, _, _ in members
        ]
        results.append(evaluate(reports, truth, label=spec.label))
    return results


def load_benchmark_specs(path) -> list[SyntheticSpec]:
    """Read a benchmark spec file: {"specs": [...]} or a bare JSON list."""
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", path=str(path),
                              line=exc.lineno) from None
    if isinstance(raw, dict):
        raw = raw.get("specs")
    if not isinstance(raw, list):
        raise FormatError("expected a list of specs or {\"specs\": [...]}",
                          path=str(path))
    specs = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise FormatError(f"spec #{i} is not an object", path=str(path))
        try:
            specs.append(SyntheticSpec(
                label=item["label"],
                n_members=item["n_members"],
                posts_min=item["posts_min"],
                posts_max=item["posts_max"],
                signal_rate=item["signal_rate"],
                noise_rate=item["noise_rate"],
                deceiver_fraction=item["deceiver_fraction"],
                characteristics=tuple(item["characteristics"]),
                seed=item["seed"],
                reference_year=item.get("reference_year", 2015),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"spec #{i}: {exc}", path=str(path)) from None
    return specs
