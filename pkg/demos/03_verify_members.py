"""End-to-end member verification.

For each member the pipeline aggregates marker matches over their track into
evidence masses, normalizes them, scores reliability, and compares the
best-supported value against the declared one.  The verified profile keeps
Confirmed characteristics only; Refuted claims make the member Suspicious.

Run from the repository root:  python demos/03_verify_members.py
"""

from pathlib import Path

from sdverify import VerifierConfig, compile_lexicon, list_members, load_corpus, load_starter_lexicon, verify_member

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "demo"

corpus = load_corpus(FIXTURE / "posts.jsonl", FIXTURE / "members.jsonl")
lexicon = load_starter_lexicon()
matcher = compile_lexicon(lexicon)
config = VerifierConfig()  # theta_min=3, theta_sat=10, theta_conf=0.6, cap=3

for member_id, _, _ in list_members(corpus, "demo"):
    report = verify_member(corpus, matcher, lexicon, "demo", member_id, config)
    print(f"{member_id} [{report.classification}] ({report.track_size} posts)")
    for verdict in report.verdicts:
        print(f"  {verdict.characteristic:10s} declared={str(verdict.declared):8s} "
              f"inferred={str(verdict.inferred):8s} E={verdict.evidence_mass:5.1f} "
              f"R={verdict.reliability:.2f}  {verdict.verdict}")
    if report.profile.entries:
        portrait = {ch: value for ch, (value, _) in report.profile.entries.items()}
        print(f"  verified portrait: {portrait}")
    print()
