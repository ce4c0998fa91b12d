"""Verdicts, reliability, verified profiles, and member classification.

Per characteristic c the verifier normalizes evidence into a distribution
P(c, v) = S(c, v) / E(c), picks the best-supported value v*, and scores
reliability R(c) = P(c, v*) * min(1, E(c) / theta_sat).  A definitive verdict
(Confirmed / Refuted / Inferred) needs E(c) >= theta_min, an untied argmax,
and R(c) >= theta_conf; anything else is Unverifiable.  The verified profile
keeps Confirmed characteristics only.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .analyzer import EvidenceVector, analyze_track
from .canonical import canonical_json
from .corpus import Corpus, build_information_track, declared_value
from .errors import (
    DuplicateCharacteristicError,
    EmptyVerdictsError,
    UnknownCharacteristicError,
    ValidationError,
)
from .lexicon import CompiledMatcher, MarkerLexicon

CONFIRMED = "Confirmed"
REFUTED = "Refuted"
UNVERIFIABLE = "Unverifiable"
INFERRED = "Inferred"
VERDICTS = (CONFIRMED, REFUTED, UNVERIFIABLE, INFERRED)
DEFINITIVE = (CONFIRMED, REFUTED, INFERRED)

VERIFIED = "Verified"
PARTIALLY_VERIFIED = "PartiallyVerified"
SUSPICIOUS = "Suspicious"
UNVERIFIED = "Unverified"
CLASSIFICATIONS = (VERIFIED, PARTIALLY_VERIFIED, SUSPICIOUS, UNVERIFIED)


@dataclass(frozen=True)
class VerifierConfig:
    """Thresholds and selection; defaults hold for every shipped benchmark."""

    theta_min: float = 3.0
    theta_sat: float = 10.0
    theta_conf: float = 0.6
    per_post_cap: int = 3
    reference_year: int = 2015
    selected_characteristics: frozenset[str] | None = None  # None = all

    def __post_init__(self):
        if self.theta_min < 0:
            raise ValidationError("theta_min must be >= 0")
        if self.theta_sat <= 0:
            raise ValidationError("theta_sat must be > 0")
        if self.theta_min > self.theta_sat:
            raise ValidationError("theta_min must be <= theta_sat")
        if not 0 < self.theta_conf <= 1:
            raise ValidationError("theta_conf must be in (0, 1]")
        if self.per_post_cap < 1:
            raise ValidationError("per_post_cap must be >= 1")

    def selection(self, lexicon: MarkerLexicon) -> list[str]:
        """Selected characteristic ids in lexicon order (default: all)."""
        known = lexicon.characteristic_ids()
        if self.selected_characteristics is None:
            return known
        unknown = sorted(self.selected_characteristics - set(known))
        if unknown:
            raise UnknownCharacteristicError(f"unknown characteristics: {unknown}")
        return [ch for ch in known if ch in self.selected_characteristics]


@dataclass(frozen=True)
class CharacteristicVerdict:
    characteristic: str
    declared: str | None
    inferred: str | None
    reliability: float
    verdict: str
    evidence_mass: float

    def to_dict(self) -> dict:
        return {
            "characteristic": self.characteristic,
            "declared": self.declared,
            "inferred": self.inferred,
            "reliability": self.reliability,
            "verdict": self.verdict,
            "evidence_mass": self.evidence_mass,
        }


@dataclass(frozen=True)
class VerifiedProfile:
    """The socio-demographic portrait: Confirmed characteristics only."""

    member_id: str
    community_id: str
    entries: dict[str, tuple[str, float]]
    annotations: tuple[CharacteristicVerdict, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "member_id": self.member_id,
            "community_id": self.community_id,
            "entries": {
                ch: {"value": value, "reliability": reliability}
                for ch, (value, reliability) in sorted(self.entries.items())
            },
            "annotations": [v.to_dict() for v in self.annotations],
        }


@dataclass(frozen=True)
class MemberReport:
    member_id: str
    community_id: str
    verdicts: tuple[CharacteristicVerdict, ...]
    profile: VerifiedProfile
    classification: str
    track_size: int

    def to_dict(self) -> dict:
        return {
            "member_id": self.member_id,
            "community_id": self.community_id,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "profile": self.profile.to_dict(),
            "classification": self.classification,
            "track_size": self.track_size,
        }

    def to_canonical_json(self) -> str:
        return canonical_json(self.to_dict())


def normalize(evidence: EvidenceVector, characteristic: str) -> dict[str, float] | None:
    """P(c, v) = S(c, v) / E(c); None when the characteristic has no mass."""
    total = evidence.total(characteristic)
    if total <= 0:
        return None
    return {value: mass / total
            for value, mass in evidence.masses[characteristic].items()}


def _argmax(evidence: EvidenceVector, characteristic: str) -> tuple[str, bool]:
    """Best-supported value (domain order breaks ties) and whether the top is tied."""
    masses = evidence.masses[characteristic]
    best_value = None
    best_mass = None
    tied = False
    for value, mass in masses.items():
        if best_mass is None or mass > best_mass:
            best_value, best_mass, tied = value, mass, False
        elif mass == best_mass:
            tied = True
    return best_value, tied


def reliability(evidence: EvidenceVector, characteristic: str,
                config: VerifierConfig) -> float:
    """R(c) = P(c, v*) * min(1, E(c) / theta_sat); 0 when E(c) = 0."""
    distribution = normalize(evidence, characteristic)
    if distribution is None:
        return 0.0
    v_star, _ = _argmax(evidence, characteristic)
    volume = min(1.0, evidence.total(characteristic) / config.theta_sat)
    return distribution[v_star] * volume


def verify_characteristic(evidence: EvidenceVector, declared: str | None,
                          characteristic: str, config: VerifierConfig) -> CharacteristicVerdict:
    """Decide one characteristic: compare declared value against the evidence."""
    total = evidence.total(characteristic)
    score = reliability(evidence, characteristic, config)
    if total < config.theta_min:
        return CharacteristicVerdict(characteristic, declared, None, score,
                                     UNVERIFIABLE, total)
    v_star, tied = _argmax(evidence, characteristic)
    if tied:
        return CharacteristicVerdict(characteristic, declared, None, score,
                                     UNVERIFIABLE, total)
    if score >= config.theta_conf:
        if declared is None:
            verdict = INFERRED
        elif v_star == declared:
            verdict = CONFIRMED
        else:
            verdict = REFUTED
    else:
        verdict = UNVERIFIABLE
    return CharacteristicVerdict(characteristic, declared, v_star, score, verdict, total)


def form_profile(verdicts: list[CharacteristicVerdict] | tuple[CharacteristicVerdict, ...],
                 member_id: str, community_id: str) -> VerifiedProfile:
    """Portrait from Confirmed verdicts; Refuted/Inferred kept as annotations."""
    seen: set[str] = set()
    for verdict in verdicts:
        if verdict.characteristic in seen:
            raise DuplicateCharacteristicError(
                f"two verdicts for characteristic {verdict.characteristic!r}")
        seen.add(verdict.characteristic)
    ordered = sorted(verdicts, key=lambda v: v.characteristic)
    entries = {v.characteristic: (v.inferred, v.reliability)
               for v in ordered if v.verdict == CONFIRMED}
    annotations = tuple(v for v in ordered if v.verdict in (REFUTED, INFERRED))
    return VerifiedProfile(member_id=member_id, community_id=community_id,
                           entries=entries, annotations=annotations)


def classify_member(verdicts: list[CharacteristicVerdict] | tuple[CharacteristicVerdict, ...]) -> str:
    """Suspicious > Verified > Unverified > PartiallyVerified, per the verdict set."""
    if not verdicts:
        raise EmptyVerdictsError("cannot classify a member with no verdicts")
    if any(v.verdict == REFUTED for v in verdicts):
        return SUSPICIOUS
    with_declared = [v for v in verdicts if v.declared is not None]
    if with_declared and all(v.verdict == CONFIRMED for v in with_declared):
        return VERIFIED
    if all(v.verdict == UNVERIFIABLE for v in verdicts):
        return UNVERIFIED
    return PARTIALLY_VERIFIED


def verify_member(corpus: Corpus, matcher: CompiledMatcher, lexicon: MarkerLexicon,
                  community_id: str, member_id: str, config: VerifierConfig) -> MemberReport:
    """Full pipeline for one member: track -> evidence -> verdicts -> report."""
    track = build_information_track(corpus, community_id, member_id)
    evidence = analyze_track(matcher, lexicon, track, config.per_post_cap)
    profile = corpus.profile(community_id, member_id)
    verdicts = []
    for characteristic in sorted(config.selection(lexicon)):
        declared = declared_value(profile, characteristic, config.reference_year)
        verdicts.append(verify_characteristic(evidence, declared, characteristic, config))
    verified = form_profile(verdicts, member_id, community_id)
    classification = classify_member(verdicts)
    return MemberReport(member_id=member_id, community_id=community_id,
                        verdicts=tuple(verdicts), profile=verified,
                        classification=classification, track_size=track.total_posts)


def config_with_overrides(config: VerifierConfig, overrides: dict) -> VerifierConfig:
    """Apply request-level overrides; unknown keys raise ValidationError."""
    allowed = {"theta_min", "theta_sat", "theta_conf", "per_post_cap", "reference_year"}
    unknown = sorted(set(overrides) - allowed)
    if unknown:
        raise ValidationError(f"unknown config overrides: {unknown}")
    cleaned: dict[str, object] = {}
    for key, value in overrides.items():
        if key in ("per_post_cap", "reference_year"):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"{key} must be an integer")
            cleaned[key] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{key} must be a number")
            cleaned[key] = float(value)
    return replace(config, **cleaned)
