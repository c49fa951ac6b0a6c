"""Classify a few Pfaff equations theta = 0 by their normal form.

Walks through the three possible verdicts -- exact (theta = d mu),
integrating factor (theta = lambda d mu), and non-integrable
(theta = d phi + lambda d mu) -- and writes a JSON summary.
"""

import json
import pathlib

from pseudoform import NormalForm, RegionSampler, classify, parse_oneform

EXAMPLES = {
    "exact height form dz": ["0", "0", "1"],
    "scaled slice form y dx": ["y", "0", "0"],
    "standard contact form x dy + dz": ["0", "x", "1"],
    "rolling-coin style constraint": ["1", "0", "-x"],
}

region = RegionSampler((0.2, 0.5, 0.2), (1.0, 1.5, 1.0), count=500, seed=0)

summary = {}
for label, components in EXAMPLES.items():
    theta = parse_oneform(components)
    verdict = classify(theta, region)
    summary[label] = {
        "components": components,
        "class": verdict.kind.value,
        "max_dtheta": verdict.max_dtheta,
        "max_frobenius": verdict.max_frobenius,
    }
    print(f"{label:35s} -> {verdict.kind.value}")
    if verdict.kind is NormalForm.NON_INTEGRABLE:
        print(f"{'':35s}    |theta ^ dtheta| up to {verdict.max_frobenius_raw:.3g}")

out = pathlib.Path(__file__).with_name("classify_forms.json")
out.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
print(f"\nwrote {out}")
