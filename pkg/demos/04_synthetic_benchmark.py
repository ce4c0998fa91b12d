"""The synthetic evaluation harness.

Real forum corpora are not redistributable, so the benchmark generates seeded
communities with exact ground truth: honest members declare their true
values, deceivers declare wrong ones, and posts embed true-value markers at
the signal rate plus wrong-value markers at the noise rate.  The two metrics
are member-level: the false-trigger rate (a definitive verdict contradicting
ground truth) and effectiveness (at least one definitive verdict agreeing
with it).

Run from the repository root:  python demos/04_synthetic_benchmark.py
"""

from sdverify import SyntheticSpec, VerifierConfig, format_results_table, load_starter_lexicon, run_benchmark

lexicon = load_starter_lexicon()

specs = [
    SyntheticSpec(label=f"synthetic-{seed}", n_members=500, posts_min=5, posts_max=30,
                  signal_rate=0.5, noise_rate=0.05, deceiver_fraction=0.2,
                  characteristics=("gender", "age_group"), seed=seed)
    for seed in (1, 2, 3, 4, 5)
]

rows = run_benchmark(specs, lexicon, VerifierConfig())
table, csv_text = format_results_table(rows)
print(table)
print("(the false-trigger rate must stay at or below 18% on every community)")
print()
print("CSV form:")
print(csv_text)
