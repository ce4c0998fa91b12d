"""The marker lexicon and the compiled matcher.

A marker is a weighted pattern (single token, token phrase, or regex over a
post's normalized text) that votes for one value of one characteristic.  The
shipped starter lexicon holds a few dozen illustrative Ukrainian markers for
gender and age group -- e.g. the feminine past-tense ending in "я написала"
is evidence for gender=female.

Run from the repository root:  python demos/02_lexicon_and_matching.py
"""

from sdverify import compile_lexicon, load_starter_lexicon, tokenize, validate_lexicon

lexicon = load_starter_lexicon()
print(f"lexicon version {lexicon.version}: "
      f"{len(lexicon.characteristics)} characteristics, {len(lexicon.markers)} markers")
for ch in lexicon.characteristics:
    print(f"  {ch.id}: {', '.join(ch.values)}")
print()

issues = validate_lexicon(lexicon)
print("validation issues:", issues or "none")
print()

matcher = compile_lexicon(lexicon)
samples = [
    "Я написала листа і я рада.",
    "Я написав відповідь, моя дружина сміялась.",
    "Завтра контрольна, уроки ще не зробив...",
    "Після роботи в офіс, потім співбесіда.",
]
by_id = {marker.marker_id: marker for marker in lexicon.markers}
for text in samples:
    tokens = tokenize(text)
    hits = matcher.match_tokens(tokens)
    print(f"{text}")
    print(f"  tokens: {tokens}")
    for marker_id, count in sorted(hits.items()):
        marker = by_id[marker_id]
        print(f"  hit {marker_id} ({marker.characteristic}={marker.value}, "
              f"w={marker.weight}) x{count}")
    print()
