"""
Auditing the dichotomy over every small template
================================================

Up to isomorphism there are 3, 18, 139+26 and 2559+573 reflexive
complete 2-edge-coloured graphs on 1-4 vertices (tractable+hard).  The
audit classifies each one and cross-checks the verdict with independent
evidence; here we sweep n <= 3 in-process and inspect the split.
"""

from collections import Counter

from redblue.classify import classify
from redblue.smallgraphs import all_templates, count_templates

for n in (1, 2, 3):
    verdicts = Counter()
    kinds = Counter()
    for h in all_templates(n):
        c = classify(h)
        verdicts[c.verdict] += 1
        if c.certificate is not None:
            kinds[c.certificate.kind] += 1
    print(f"n={n}: {count_templates(n)} classes ->", dict(verdicts))
    if kinds:
        print("   hardness evidence:", dict(sorted(kinds.items())))

# The first hard template in enumeration order, with its evidence.
first_hard = next(h for h in all_templates(3) if not classify(h).is_p)
c = classify(first_hard)
print("\nfirst hard 3-element template:")
print("  blue:", sorted((int(a), int(b)) for a, b in zip(*first_hard.blue.nonzero()) if a <= b))
print("  red: ", sorted((int(a), int(b)) for a, b in zip(*first_hard.red.nonzero()) if a <= b))
print("  certificate:", c.certificate.to_json())
