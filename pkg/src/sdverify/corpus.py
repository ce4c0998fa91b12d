"""Community corpus: posts, declared account profiles, information tracks.

The corpus is loaded from two JSONL files (one post / one member record per
line, UTF-8, LF) and indexed by (community_id, member_id).  After loading it
is immutable, so any number of verification workers may read it concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Iterator

from .errors import DuplicateIdError, FormatError, UnknownCommunityError, UnknownMemberError

GENDERS = ("male", "female")
EDUCATION_LEVELS = ("secondary", "higher")

#: Age-group value ids with their inclusive age spans, in domain order.
AGE_BUCKETS = (
    ("under18", 0, 17),
    ("18-24", 18, 24),
    ("25-34", 25, 34),
    ("35-49", 35, 49),
    ("50plus", 50, 130),
)

MIN_BIRTH_YEAR = 1900


@dataclass(frozen=True)
class Post:
    post_id: str
    community_id: str
    member_id: str
    timestamp: int
    text: str


@dataclass(frozen=True)
class DeclaredProfile:
    """Account data as entered by the member; every field may be absent."""

    member_id: str
    community_id: str
    gender: str | None = None
    birth_year: int | None = None
    residence: str | None = None
    education: str | None = None
    occupation: str | None = None

    def declared_fields(self) -> dict[str, object]:
        out = {}
        for name in ("gender", "birth_year", "residence", "education", "occupation"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


@dataclass(frozen=True)
class InformationTrack:
    """A member's posts in one community, sorted ascending by (timestamp, post_id)."""

    member_id: str
    community_id: str
    posts: tuple[Post, ...]

    @property
    def total_posts(self) -> int:
        return len(self.posts)


class Corpus:
    """Immutable index of posts and declared profiles per (community, member)."""

    def __init__(self, posts: dict[tuple[str, str], tuple[Post, ...]],
                 profiles: dict[tuple[str, str], DeclaredProfile]):
        self._posts = posts
        self._profiles = profiles
        self._communities = frozenset(key[0] for key in profiles)

    @property
    def communities(self) -> frozenset[str]:
        return self._communities

    def members(self, community_id: str) -> list[str]:
        if community_id not in self._communities:
            raise UnknownCommunityError(f"unknown community {community_id!r}")
        return sorted(m for (c, m) in self._profiles if c == community_id)

    def profile(self, community_id: str, member_id: str) -> DeclaredProfile:
        try:
            return self._profiles[(community_id, member_id)]
        except KeyError:
            raise UnknownMemberError(
                f"unknown member {member_id!r} in community {community_id!r}") from None

    def posts_of(self, community_id: str, member_id: str) -> tuple[Post, ...]:
        return self._posts.get((community_id, member_id), ())

    def iter_posts(self) -> Iterator[Post]:
        for key in sorted(self._posts):
            yield from self._posts[key]

    def has_member(self, community_id: str, member_id: str) -> bool:
        return (community_id, member_id) in self._profiles


def _read_jsonl(path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", path=str(path), line=lineno) from None
            if not isinstance(record, dict):
                raise FormatError("record is not a JSON object", path=str(path), line=lineno)
            yield lineno, record


def _require(record: dict, key: str, kind: type, path: str, lineno: int):
    if key not in record:
        raise FormatError(f"missing field {key!r}", path=path, line=lineno)
    value = record[key]
    if kind is int:
        # bool is an int subclass; reject it explicitly.
        if isinstance(value, bool) or not isinstance(value, int):
            raise FormatError(f"field {key!r} must be an integer", path=path, line=lineno)
    elif not isinstance(value, kind):
        raise FormatError(f"field {key!r} must be {kind.__name__}", path=path, line=lineno)
    return value


def _parse_declared(raw: dict, member_id: str, community_id: str,
                    path: str, lineno: int) -> DeclaredProfile:
    known = {f.name for f in fields(DeclaredProfile)} - {"member_id", "community_id"}
    values: dict[str, object] = {}
    for key, value in raw.items():
        if key not in known:
            raise FormatError(f"unknown declared field {key!r}", path=path, line=lineno)
        if value is None:
            continue
        values[key] = value
    gender = values.get("gender")
    if gender is not None and gender not in GENDERS:
        raise FormatError(f"declared gender must be one of {GENDERS}", path=path, line=lineno)
    education = values.get("education")
    if education is not None and education not in EDUCATION_LEVELS:
        raise FormatError(f"declared education must be one of {EDUCATION_LEVELS}",
                          path=path, line=lineno)
    birth_year = values.get("birth_year")
    if birth_year is not None:
        if isinstance(birth_year, bool) or not isinstance(birth_year, int):
            raise FormatError("declared birth_year must be an integer", path=path, line=lineno)
        if birth_year < MIN_BIRTH_YEAR:
            raise FormatError(f"declared birth_year must be >= {MIN_BIRTH_YEAR}",
                              path=path, line=lineno)
    for key in ("residence", "occupation"):
        if key in values and not isinstance(values[key], str):
            raise FormatError(f"declared {key} must be a string", path=path, line=lineno)
    return DeclaredProfile(member_id=member_id, community_id=community_id, **values)


def load_corpus(posts_path, members_path) -> Corpus:
    """Load and index posts.jsonl + members.jsonl.

    A post whose member has no profile record gets an implicit all-absent
    profile.  Duplicate (community_id, post_id) or duplicate member records
    raise DuplicateIdError.
    """
    profiles: dict[tuple[str, str], DeclaredProfile] = {}
    for lineno, record in _read_jsonl(members_path):
        community_id = _require(record, "community_id", str, str(members_path), lineno)
        member_id = _require(record, "member_id", str, str(members_path), lineno)
        if not member_id or not community_id:
            raise FormatError("empty identifier", path=str(members_path), line=lineno)
        declared = record.get("declared", {})
        if not isinstance(declared, dict):
            raise FormatError("field 'declared' must be an object",
                              path=str(members_path), line=lineno)
        key = (community_id, member_id)
        if key in profiles:
            raise DuplicateIdError(f"duplicate member record {key!r}")
        profiles[key] = _parse_declared(declared, member_id, community_id,
                                        str(members_path), lineno)

    seen_posts: set[tuple[str, str]] = set()
    by_member: dict[tuple[str, str], list[Post]] = {}
    for lineno, record in _read_jsonl(posts_path):
        post = Post(
            post_id=_require(record, "post_id", str, str(posts_path), lineno),
            community_id=_require(record, "community_id", str, str(posts_path), lineno),
            member_id=_require(record, "member_id", str, str(posts_path), lineno),
            timestamp=_require(record, "timestamp", int, str(posts_path), lineno),
            text=_require(record, "text", str, str(posts_path), lineno),
        )
        if not post.post_id:
            raise FormatError("empty post_id", path=str(posts_path), line=lineno)
        if post.timestamp < 0:
            raise FormatError("timestamp must be >= 0", path=str(posts_path), line=lineno)
        post_key = (post.community_id, post.post_id)
        if post_key in seen_posts:
            raise DuplicateIdError(f"duplicate post {post_key!r}")
        seen_posts.add(post_key)
        member_key = (post.community_id, post.member_id)
        if member_key not in profiles:
            profiles[member_key] = DeclaredProfile(member_id=post.member_id,
                                                   community_id=post.community_id)
        by_member.setdefault(member_key, []).append(post)

    indexed = {
        key: tuple(sorted(posts, key=lambda p: (p.timestamp, p.post_id)))
        for key, posts in by_member.items()
    }
    return Corpus(indexed, profiles)


def dump_corpus(corpus: Corpus, posts_path, members_path) -> None:
    """Serialize a corpus back to canonical JSONL (sorted, LF, UTF-8)."""
    with open(members_path, "w", encoding="utf-8", newline="\n") as handle:
        for key in sorted(corpus._profiles):
            profile = corpus._profiles[key]
            record = {
                "community_id": profile.community_id,
                "member_id": profile.member_id,
                "declared": profile.declared_fields(),
            }
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    with open(posts_path, "w", encoding="utf-8", newline="\n") as handle:
        for post in corpus.iter_posts():
            record = {
                "community_id": post.community_id,
                "post_id": post.post_id,
                "member_id": post.member_id,
                "timestamp": post.timestamp,
                "text": post.text,
            }
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def build_information_track(corpus: Corpus, community_id: str, member_id: str) -> InformationTrack:
    """All of the member's posts in the community, in (timestamp, post_id) order."""
    if not corpus.has_member(community_id, member_id):
        if community_id not in corpus.communities:
            raise UnknownCommunityError(f"unknown community {community_id!r}")
        raise UnknownMemberError(
            f"unknown member {member_id!r} in community {community_id!r}")
    return InformationTrack(member_id=member_id, community_id=community_id,
                            posts=corpus.posts_of(community_id, member_id))


def list_members(corpus: Corpus, community_id: str) -> list[tuple[str, int, DeclaredProfile]]:
    """(member_id, total_posts, declared profile) for every member, sorted by id."""
    return [
        (member_id, len(corpus.posts_of(community_id, member_id)),
         corpus.profile(community_id, member_id))
        for member_id in corpus.members(community_id)
    ]


def age_group_of(age: int) -> str | None:
    for value, lo, hi in AGE_BUCKETS:
        if lo <= age <= hi:
            return value
    return None


def declared_value(profile: DeclaredProfile, characteristic: str,
                   reference_year: int) -> str | None:
    """Map raw profile fields onto a characteristic's value domain.

    Absent fields map to None (absence is a value, not an error).  For
    age_group the declared bucket is computed from birth_year against
    reference_year; a birth_year outside [1900, reference_year] cannot be
    bucketed and also maps to None.
    """
    if characteristic == "age_group":
        if profile.birth_year is None or profile.birth_year > reference_year:
            return None
        return age_group_of(reference_year - profile.birth_year)
    return getattr(profile, characteristic, None)
