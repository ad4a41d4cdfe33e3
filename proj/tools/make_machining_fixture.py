#!/usr/bin/env python3
"""Writes fixtures/machining.pcnet.json, the automated-machining pc-net.

Hierarchy:
  machine-state
    within-limits
    out-of-limits
      tool-failure
        tool-chatter, tool-wear, tool-breakage
      sensor-failure
      transient-state

The leaf diagrams are mutually consistent: siblings under each internal
concept differ in the table of exactly one feature, and every other table is
shared with (or is the prior-weighted mixture of) the subtree it sits beside.

  machine-state   within vs out differ in   current
  out-of-limits   tool/sensor/transient in  AE-mean
  tool-failure    chatter/wear/breakage in  AE-mag | current

Under that structure the cover models preserve the leaf-level joint over
all features at every abstraction level.

Probabilities are hand-authored so that, given high motor current, chatter
makes a high acoustic magnitude most likely (and through it high acoustic
and cutting-force frequencies), wear makes a normal-to-rising magnitude most
likely, and breakage makes a low post-fracture magnitude with a high acoustic
peak and high cutting force most likely.
"""

import json
import pathlib

FEATURES = [
    ("current", ["normal", "high"]),
    ("AE-mean", ["low", "normal", "high"]),
    ("AE-mag", ["low", "normal", "high"]),
    ("dAE-mag", ["steady", "rising"]),
    ("AE-freq", ["normal", "high"]),
    ("dyn-freq-x", ["normal", "high"]),
    ("dyn-freq-y", ["normal", "high"]),
    ("dAE-mean", ["steady", "changing"]),
    ("dyn-rms-x", ["normal", "high"]),
    ("d-dyn-rms-x", ["steady", "changing"]),
    ("dyn-rms-y", ["normal", "high"]),
    ("d-dyn-rms-y", ["steady", "changing"]),
    ("AE-peak", ["normal", "high"]),
    ("dyn-peak-x", ["normal", "high"]),
    ("dyn-peak-y", ["normal", "high"]),
]
DOMAIN = dict(FEATURES)

PRIORS = {
    "within-limits": 0.80,
    "sensor-failure": 0.04,
    "transient-state": 0.06,
    "tool-chatter": 0.03,
    "tool-wear": 0.05,
    "tool-breakage": 0.02,
}
PARENT = {
    "within-limits": "machine-state",
    "out-of-limits": "machine-state",
    "tool-failure": "out-of-limits",
    "sensor-failure": "out-of-limits",
    "transient-state": "out-of-limits",
    "tool-chatter": "tool-failure",
    "tool-wear": "tool-failure",
    "tool-breakage": "tool-failure",
}
TOOL = ["tool-chatter", "tool-wear", "tool-breakage"]
OUT = ["tool-failure", "sensor-failure", "transient-state"]

# Tables shared by every leaf: feature -> (parents, {parent state: row}).
SHARED = {
    "dAE-mag": (["AE-mag"], {"low": [0.7, 0.3], "normal": [0.85, 0.15], "high": [0.3, 0.7]}),
    "AE-freq": (["AE-mag"], {"low": [0.9, 0.1], "normal": [0.85, 0.15], "high": [0.25, 0.75]}),
    "dyn-freq-x": (["AE-freq"], {"normal": [0.85, 0.15], "high": [0.2, 0.8]}),
    "dyn-freq-y": (["dyn-freq-x"], {"normal": [0.85, 0.15], "high": [0.25, 0.75]}),
    "dAE-mean": (["AE-mean"], {"low": [0.4, 0.6], "normal": [0.9, 0.1], "high": [0.5, 0.5]}),
    "dyn-rms-x": (["AE-mag"], {"low": [0.35, 0.65], "normal": [0.85, 0.15], "high": [0.45, 0.55]}),
    "d-dyn-rms-x": (["dyn-rms-x"], {"normal": [0.85, 0.15], "high": [0.4, 0.6]}),
    "dyn-rms-y": (["dyn-rms-x"], {"normal": [0.85, 0.15], "high": [0.3, 0.7]}),
    "d-dyn-rms-y": (["dyn-rms-y"], {"normal": [0.85, 0.15], "high": [0.4, 0.6]}),
    "AE-peak": (["AE-mag"], {"low": [0.1, 0.9], "normal": [0.9, 0.1], "high": [0.6, 0.4]}),
    "dyn-peak-x": (["dyn-rms-x"], {"normal": [0.9, 0.1], "high": [0.3, 0.7]}),
    "dyn-peak-y": (["dyn-rms-y"], {"normal": [0.9, 0.1], "high": [0.3, 0.7]}),
}

CURRENT_WITHIN = [0.95, 0.05]
CURRENT_OUT = [0.45, 0.55]

AE_MEAN = {
    "tool-failure": [0.15, 0.55, 0.30],
    "sensor-failure": [0.85, 0.10, 0.05],
    "transient-state": [0.10, 0.30, 0.60],
}

AE_MAG_NORMAL_CURRENT = [0.10, 0.80, 0.10]
AE_MAG_HIGH_CURRENT = {
    "tool-chatter": [0.05, 0.15, 0.80],
    "tool-wear": [0.10, 0.60, 0.30],
    "tool-breakage": [0.75, 0.05, 0.20],
}

ACTIONS = ["continue", "reduce-feed-rate", "reduce-depth-of-cut", "replace-tool", "alert-operator"]
UTILITY = {
    "within-limits": [100, 80, 80, 40, 70],
    "tool-chatter": [-200, 60, 70, 20, 0],
    "tool-wear": [-50, 0, 0, 60, 10],
    "tool-breakage": [-500, -400, -400, 50, -100],
    "sensor-failure": [-20, -20, -20, -40, 50],
    "transient-state": [80, 60, 60, 0, 40],
}
OBSERVED = ["current", "AE-mag", "AE-peak", "dyn-peak-x", "dyn-peak-y"]


def prior(concept):
    if concept in PRIORS:
        return PRIORS[concept]
    return sum(prior(c) for c, p in PARENT.items() if p == concept)


def mix(rows_by_concept, parent):
    total = prior(parent)
    n = len(next(iter(rows_by_concept.values())))
    return [sum(prior(c) / total * row[i] for c, row in rows_by_concept.items()) for i in range(n)]


def rows(feature, parents, table):
    if not parents:
        return [{"given": {}, "p": dict(zip(DOMAIN[feature], table))}]
    (parent,) = parents
    return [{"given": {parent: s}, "p": dict(zip(DOMAIN[feature], table[s]))} for s in DOMAIN[parent]]


def leaf_diagram(leaf):
    ae_mean_tool = AE_MEAN["tool-failure"]
    ae_mag_tool_high = mix(AE_MAG_HIGH_CURRENT, "tool-failure")
    ae_mean_out = mix(AE_MEAN, "out-of-limits")

    if leaf == "within-limits":
        current = CURRENT_WITHIN
        ae_mean = ae_mean_out
        ae_mag_high = ae_mag_tool_high
    elif leaf in TOOL:
        current = CURRENT_OUT
        ae_mean = ae_mean_tool
        ae_mag_high = AE_MAG_HIGH_CURRENT[leaf]
    else:
        current = CURRENT_OUT
        ae_mean = AE_MEAN[leaf]
        ae_mag_high = ae_mag_tool_high

    parents = {"current": [], "AE-mean": [], "AE-mag": ["current"]}
    cpt = {
        "current": rows("current", [], current),
        "AE-mean": rows("AE-mean", [], ae_mean),
        "AE-mag": rows("AE-mag", ["current"], {"normal": AE_MAG_NORMAL_CURRENT, "high": ae_mag_high}),
    }
    for feature, (ps, table) in SHARED.items():
        parents[feature] = ps
        cpt[feature] = rows(feature, ps, table)
    return {
        "concept": leaf,
        "features": [f for f, _ in FEATURES],
        "parents": parents,
        "cpt": cpt,
    }


def main():
    concepts = [{"id": "machine-state"}]
    for c, p in PARENT.items():
        entry = {"id": c, "parent": p}
        if c in PRIORS:
            entry["prior"] = PRIORS[c]
        concepts.append(entry)
    doc = {
        "features": [{"id": f, "domain": d, "rank": i} for i, (f, d) in enumerate(FEATURES)],
        "concepts": concepts,
        "diagrams": [leaf_diagram(leaf) for leaf in PRIORS],
        "preference": {
            "actions": ACTIONS,
            "utility": {a: {leaf: UTILITY[leaf][i] for leaf in PRIORS} for i, a in enumerate(ACTIONS)},
            "observed": OBSERVED,
        },
    }
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "machining.pcnet.json"
    out.write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
