"""Tokenization and marker-match aggregation over information tracks.

The quantitative core: a track's marker matches are counted per post, capped
per post to resist single-post spam, and folded into an evidence vector
holding the weighted mass S(c, v) per (characteristic, value) and the total
mass E(c) per characteristic.  All operations are pure, so per-post matching
and per-member analysis parallelize freely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from .corpus import InformationTrack
    from .lexicon import CompiledMatcher, MarkerLexicon

# U+2019 (right single quote) and U+02BC (modifier letter apostrophe) both
# occur as the apostrophe in Ukrainian text; normalize to ASCII U+0027.
_APOSTROPHES = {0x2019: 0x27, 0x02BC: 0x27}

# A token is a run of word characters, optionally with internal apostrophes.
_TOKEN_RE = re.compile(r"\w+(?:'\w+)*")


def tokenize(text: str) -> list[str]:
    """Lowercase, normalize apostrophes, split on whitespace/punctuation.

    Idempotent: tokenizing the space-joined result reproduces the stream.
    """
    normalized = text.translate(_APOSTROPHES).lower()
    return _TOKEN_RE.findall(normalized)


@dataclass(frozen=True)
class MatchSet:
    """Marker occurrences over one track.

    ``capped_totals`` maps marker_id to the track total after capping each
    post's raw count at the per-post cap; ``per_post`` holds the raw
    (marker_id, count) pairs for each post in track order.  Markers with no
    occurrences are omitted.
    """

    capped_totals: dict[str, int]
    per_post: tuple[tuple[tuple[str, int], ...], ...]


@dataclass(frozen=True)
class EvidenceVector:
    """Weighted evidence mass per (characteristic, value).

    ``masses[c]`` maps every value in the characteristic's domain (in domain
    order) to S(c, v) >= 0; ``totals[c]`` is E(c), the sum of the S(c, v)
    in domain order.
    """

    masses: dict[str, dict[str, float]]
    totals: dict[str, float]

    def mass(self, characteristic: str, value: str) -> float:
        return self.masses[characteristic][value]

    def total(self, characteristic: str) -> float:
        return self.totals[characteristic]

    def domain(self, characteristic: str) -> list[str]:
        return list(self.masses[characteristic])


def match_track(matcher: CompiledMatcher, track: InformationTrack,
                per_post_cap: int) -> MatchSet:
    """Count marker occurrences post by post, capping each post at the cap."""
    if per_post_cap < 1:
        raise ValueError("per_post_cap must be >= 1")
    capped: dict[str, int] = {}
    per_post = []
    for post in track.posts:
        raw = matcher.match_tokens(tokenize(post.text))
        per_post.append(tuple(sorted(raw.items())))
        for marker_id, count in raw.items():
            capped[marker_id] = capped.get(marker_id, 0) + min(count, per_post_cap)
    return MatchSet(capped_totals=capped, per_post=tuple(per_post))


def aggregate_evidence(match_set: MatchSet, lexicon: MarkerLexicon) -> EvidenceVector:
    """Fold capped match totals into S(c, v) = sum of weight x capped count.

    Markers are summed in marker_id lexicographic order and E(c) in domain
    order, so the floating-point result is reproducible bit for bit.
    """
    masses: dict[str, dict[str, float]] = {
        ch.id: {value: 0.0 for value in ch.values} for ch in lexicon.characteristics
    }
    for marker in sorted(lexicon.markers, key=lambda m: m.marker_id):
        count = match_set.capped_totals.get(marker.marker_id, 0)
        if count:
            masses[marker.characteristic][marker.value] += marker.weight * count
    totals = {ch: sum(per_value.values()) for ch, per_value in masses.items()}
    return EvidenceVector(masses=masses, totals=totals)


def analyze_track(matcher: CompiledMatcher, lexicon: MarkerLexicon,
                  track: InformationTrack, per_post_cap: int) -> EvidenceVector:
    """match_track followed by aggregate_evidence."""
    return aggregate_evidence(match_track(matcher, track, per_post_cap), lexicon)
