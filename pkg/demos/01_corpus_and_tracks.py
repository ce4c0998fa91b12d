"""Loading a community corpus and assembling information tracks.

The corpus is two JSONL files: posts.jsonl (one post per line) and
members.jsonl (one account record per line).  A member's "information track"
is their complete post history in one community, in stable chronological
order; it is the linguistic evidence everything downstream works from.

Run from the repository root:  python demos/01_corpus_and_tracks.py
"""

from pathlib import Path

from sdverify import build_information_track, declared_value, list_members, load_corpus

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "demo"

corpus = load_corpus(FIXTURE / "posts.jsonl", FIXTURE / "members.jsonl")
print("communities:", sorted(corpus.communities))
print()

print("members of 'demo':")
for member_id, total_posts, profile in list_members(corpus, "demo"):
    declared = profile.declared_fields() or "(nothing declared)"
    print(f"  {member_id:8s} posts={total_posts:2d} declared={declared}")
print()

track = build_information_track(corpus, "demo", "olena")
print(f"information track of olena ({track.total_posts} posts):")
for post in track.posts:
    print(f"  t={post.timestamp}  {post.post_id}: {post.text}")
print()

# Declared fields map onto characteristic value domains; age comes from the
# birth year relative to a reference year.
profile = corpus.profile("demo", "olena")
print("olena declares gender:", declared_value(profile, "gender", 2015))
print("olena declares age_group:", declared_value(profile, "age_group", 2015))
