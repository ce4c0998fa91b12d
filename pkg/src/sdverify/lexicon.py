"""The socio-demographic marker dictionary and its compiled matcher.

A lexicon declares characteristics (each with an ordered value domain) and
markers: weighted token / phrase / regex patterns, each voting for one
(characteristic, value) pair.  ``compile_lexicon`` builds a token-level
Aho-Corasick automaton over the token and phrase patterns plus precompiled
regexes, so matching a post is one pass over its token stream.  Both the
lexicon and the compiled matcher are immutable and shareable across workers.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from importlib import resources
from statistics import median

from .analyzer import tokenize
from .errors import FormatError, InvariantViolationError, RegexError

MARKER_CLASSES = ("lexico_semantic", "lexico_syntactic", "grammatical")
PATTERN_KINDS = ("token", "phrase", "regex")


@dataclass(frozen=True)
class Characteristic:
    id: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class Marker:
    marker_id: str
    marker_class: str
    pattern_kind: str
    pattern: str
    characteristic: str
    value: str
    weight: float


@dataclass(frozen=True)
class MarkerLexicon:
    version: str
    characteristics: tuple[Characteristic, ...]
    markers: tuple[Marker, ...]

    def characteristic_ids(self) -> list[str]:
        return [ch.id for ch in self.characteristics]

    def value_domain(self, characteristic_id: str) -> tuple[str, ...]:
        for ch in self.characteristics:
            if ch.id == characteristic_id:
                return ch.values
        raise KeyError(characteristic_id)


@dataclass(frozen=True)
class Issue:
    severity: str
    marker_id: str | None
    message: str


def check_lexicon(lexicon: MarkerLexicon) -> None:
    """Raise InvariantViolationError on any hard invariant breach."""
    seen_chars: set[str] = set()
    domains: dict[str, tuple[str, ...]] = {}
    for ch in lexicon.characteristics:
        if not ch.id:
            raise InvariantViolationError("characteristic with empty id")
        if ch.id in seen_chars:
            raise InvariantViolationError(f"duplicate characteristic {ch.id!r}")
        seen_chars.add(ch.id)
        if len(ch.values) < 2:
            raise InvariantViolationError(
                f"characteristic {ch.id!r} needs at least 2 values")
        if len(set(ch.values)) != len(ch.values):
            raise InvariantViolationError(
                f"characteristic {ch.id!r} has duplicate values")
        domains[ch.id] = ch.values

    seen_markers: set[str] = set()
    for marker in lexicon.markers:
        mid = marker.marker_id
        if not mid:
            raise InvariantViolationError("marker with empty id")
        if mid in seen_markers:
            raise InvariantViolationError(f"duplicate marker id {mid!r}")
        seen_markers.add(mid)
        if marker.marker_class not in MARKER_CLASSES:
            raise InvariantViolationError(
                f"class must be one of {MARKER_CLASSES}", marker_id=mid)
        if marker.pattern_kind not in PATTERN_KINDS:
            raise InvariantViolationError(
                f"pattern_kind must be one of {PATTERN_KINDS}", marker_id=mid)
        if not isinstance(marker.weight, (int, float)) or not marker.weight > 0:
            raise InvariantViolationError("weight must be > 0", marker_id=mid)
        if marker.characteristic not in domains:
            raise InvariantViolationError(
                f"unknown characteristic {marker.characteristic!r}", marker_id=mid)
        if marker.value not in domains[marker.characteristic]:
            raise InvariantViolationError(
                f"value {marker.value!r} not in domain of {marker.characteristic!r}",
                marker_id=mid)
        if not marker.pattern:
            raise InvariantViolationError("empty pattern", marker_id=mid)
        if marker.pattern_kind == "token":
            if any(c.isspace() for c in marker.pattern):
                raise InvariantViolationError(
                    "token pattern must not contain whitespace", marker_id=mid)
            if len(tokenize(marker.pattern)) != 1:
                raise InvariantViolationError(
                    "token pattern must normalize to exactly one token", marker_id=mid)
        if marker.pattern_kind == "phrase" and not tokenize(marker.pattern):
            raise InvariantViolationError(
                "phrase pattern normalizes to no tokens", marker_id=mid)
        if marker.pattern_kind == "regex":
            try:
                re.compile(marker.pattern)
            except re.error as exc:
                raise InvariantViolationError(
                    f"regex does not compile: {exc}", marker_id=mid) from None


def load_lexicon(path) -> MarkerLexicon:
    """Load lexicon.json and enforce every marker/lexicon invariant."""
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", path=str(path),
                              line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise FormatError("lexicon must be a JSON object", path=str(path))
    for key in ("version", "characteristics", "markers"):
        if key not in raw:
            raise FormatError(f"missing top-level key {key!r}", path=str(path))
    try:
        characteristics = tuple(
            Characteristic(id=ch["id"], values=tuple(ch["values"]))
            for ch in raw["characteristics"]
        )
        markers = tuple(
            Marker(
                marker_id=m["marker_id"],
                marker_class=m["class"],
                pattern_kind=m["pattern_kind"],
                pattern=m["pattern"],
                characteristic=m["characteristic"],
                value=m["value"],
                weight=float(m["weight"]),
            )
            for m in raw["markers"]
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed record: {exc}", path=str(path)) from None
    lexicon = MarkerLexicon(version=str(raw["version"]), characteristics=characteristics,
                            markers=markers)
    check_lexicon(lexicon)
    return lexicon


def dump_lexicon(lexicon: MarkerLexicon, path) -> None:
    """Serialize to the canonical lexicon.json layout (load ∘ dump = identity)."""
    doc = {
        "version": lexicon.version,
        "characteristics": [
            {"id": ch.id, "values": list(ch.values)} for ch in lexicon.characteristics
        ],
        "markers": [
            {
                "marker_id": m.marker_id,
                "class": m.marker_class,
                "pattern_kind": m.pattern_kind,
                "pattern": m.pattern,
                "characteristic": m.characteristic,
                "value": m.value,
                "weight": m.weight,
            }
            for m in lexicon.markers
        ],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(doc, handle, ensure_ascii=False, indent=2)
        handle.write("\n")


def validate_lexicon(lexicon: MarkerLexicon) -> list[Issue]:
    """Soft checks: coverage gaps, conflicting duplicate patterns, weight outliers.

    Returns an empty list iff there are no issues; the result is independent
    of marker order.
    """
    issues: list[Issue] = []

    covered: dict[tuple[str, str], int] = {}
    for marker in lexicon.markers:
        covered[(marker.characteristic, marker.value)] = \
            covered.get((marker.characteristic, marker.value), 0) + 1
    for ch in lexicon.characteristics:
        missing = [value for value in ch.values if (ch.id, value) not in covered]
        if len(missing) == len(ch.values):
            issues.append(Issue("warning", None,
                                f"characteristic {ch.id!r} has no markers"))
        elif missing:
            for value in missing:
                issues.append(Issue("warning", None,
                                    f"coverage gap: no markers for {ch.id!r}={value!r}"))

    by_pattern: dict[tuple[str, str], list[Marker]] = {}
    for marker in lexicon.markers:
        key = (marker.pattern_kind, _normalized_pattern(marker))
        by_pattern.setdefault(key, []).append(marker)
    for (kind, pattern), group in sorted(by_pattern.items()):
        targets: dict[str, set[str]] = {}
        for marker in group:
            targets.setdefault(marker.characteristic, set()).add(marker.value)
        for characteristic, values in sorted(targets.items()):
            if len(values) > 1:
                ids = sorted(m.marker_id for m in group
                             if m.characteristic == characteristic)
                issues.append(Issue(
                    "warning", ids[0],
                    f"duplicate {kind} pattern {pattern!r} targets conflicting values "
                    f"{sorted(values)} of {characteristic!r} (markers {ids})"))

    if lexicon.markers:
        mid_weight = median(m.weight for m in lexicon.markers)
        for marker in sorted(lexicon.markers, key=lambda m: m.marker_id):
            if mid_weight > 0 and marker.weight > 100 * mid_weight:
                issues.append(Issue(
                    "warning", marker.marker_id,
                    f"weight {marker.weight} exceeds 100x the median {mid_weight}"))

    return sorted(issues, key=lambda i: (i.severity, i.marker_id or "", i.message))


def _normalized_pattern(marker: Marker) -> str:
    if marker.pattern_kind in ("token", "phrase"):
        return " ".join(tokenize(marker.pattern))
    return marker.pattern


class _TokenAutomaton:
    """Aho-Corasick over token sequences; tokens are the alphabet."""

    def __init__(self, sequences: dict[str, tuple[str, ...]]):
        self._goto: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        self._hits: list[list[str]] = [[]]
        for marker_id, sequence in sequences.items():
            self._insert(sequence, marker_id)
        self._build_failures()

    def _insert(self, sequence: tuple[str, ...], marker_id: str) -> None:
        state = 0
        for token in sequence:
            nxt = self._goto[state].get(token)
            if nxt is None:
                self._goto.append({})
                self._fail.append(0)
                self._hits.append([])
                nxt = len(self._goto) - 1
                self._goto[state][token] = nxt
            state = nxt
        self._hits[state].append(marker_id)

    def _build_failures(self) -> None:
        queue = deque()
        for state in self._goto[0].values():
            queue.append(state)
        while queue:
            state = queue.popleft()
            for token, nxt in self._goto[state].items():
                queue.append(nxt)
                fall = self._fail[state]
                while fall and token not in self._goto[fall]:
                    fall = self._fail[fall]
                fall = self._goto[fall].get(token, 0)
                self._fail[nxt] = fall
                self._hits[nxt].extend(self._hits[fall])

    def count(self, tokens: list[str], into: dict[str, int]) -> None:
        state = 0
        for token in tokens:
            while state and token not in self._goto[state]:
                state = self._fail[state]
            state = self._goto[state].get(token, 0)
            for marker_id in self._hits[state]:
                into[marker_id] = into.get(marker_id, 0) + 1


class CompiledMatcher:
    """Lossless compiled form of a lexicon's patterns.

    Token and phrase patterns run through one automaton pass per post; regex
    patterns are precompiled and applied to the post's space-joined token
    stream.  The match set equals brute-force per-marker scanning.
    """

    def __init__(self, lexicon: MarkerLexicon):
        sequences: dict[str, tuple[str, ...]] = {}
        regexes: list[tuple[str, re.Pattern[str]]] = []
        for marker in lexicon.markers:
            if marker.pattern_kind == "regex":
                try:
                    regexes.append((marker.marker_id, re.compile(marker.pattern)))
                except re.error as exc:
                    raise RegexError(marker.marker_id, str(exc)) from None
            else:
                sequences[marker.marker_id] = tuple(tokenize(marker.pattern))
        self._automaton = _TokenAutomaton(sequences) if sequences else None
        self._regexes = tuple(regexes)

    def match_tokens(self, tokens: list[str]) -> dict[str, int]:
        """Raw occurrence count per marker over one post's token stream."""
        counts: dict[str, int] = {}
        if self._automaton is not None and tokens:
            self._automaton.count(tokens, counts)
        if self._regexes and tokens:
            joined = " ".join(tokens)
            for marker_id, pattern in self._regexes:
                n = sum(1 for _ in pattern.finditer(joined))
                if n:
                    counts[marker_id] = counts.get(marker_id, 0) + n
        return counts


def compile_lexicon(lexicon: MarkerLexicon) -> CompiledMatcher:
    """Precompile all patterns into a matcher; raises RegexError on bad regex."""
    return CompiledMatcher(lexicon)


def load_starter_lexicon() -> MarkerLexicon:
    """The shipped illustrative gender/age marker set (not a research dictionary)."""
    ref = resources.files("sdverify.data") / "starter_lexicon.json"
    with resources.as_file(ref) as path:
        return load_lexicon(path)
