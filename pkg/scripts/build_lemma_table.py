#!/usr/bin/env python3
"""Regenerate src/fcm/data/lemmas.tsv.

Expands a curated base vocabulary (maintenance / failure-report English)
into regular inflected forms, merges an irregulars list, and writes the
bundled lemma table. Run from the repo root after editing the word lists.
"""
from __future__ import annotations

from pathlib import Path

VOWELS = "aeiou"

# Verbs seen in corrective-maintenance narratives. Entries are base forms;
# a trailing "+" requests final-consonant doubling (drip -> dripped).
VERBS = """
activate adjust affect apply attempt bleed break build calibrate cause change
check clean close come command complete confirm connect corrode crack cycle
damage decrease dedicate deliver describe detect deteriorate disassemble
disconnect discover drain drip+ execute extrude fail find flush function hold
identify increase indicate inspect install instal leak lock loosen lose
maintain mean mention monitor mount nibble note notice observe occur open
operate overhaul oxidize pass perform pit+ plug+ pressurize protrude pull pump
push reassemble rebuild receive recommend record reduce regulate remove repair
replace report require return reveal rig+ roll run scratch score scuff seal
see send set shear show shut spill split start stick stop strip+ supply
suspect sustain swap+ tear test tighten torque trigger troubleshoot unlock use
vent verify wear wedge
""".split()

# Nouns covering components, parts, tests, and report boilerplate.
NOUNS = """
accumulator action adapter anomaly area assembly bench blade block body bolt
bonnet bore bottle can cap casing cause cavity chamber circuit command
component concept connector contractor crew cut cylinder day defect
description detection door drill edge element end event failure fluctuation
fluid fracture function hinge hole hose housing hour inspection investigation
joint kit leak leakage lock maintenance manifold mark material mechanism mud
operation operator oscillation packer panel part particle path pipe piston
plate plug pod port position pressure procedure pump ram range record
regulator replacement revision rig ring rock rotation scenario score scratch
seal seat section sensor signal solenoid spool spring stack stud surface
swarf system technician term test time tool tube valve vent weep well
wellbore wire worksheet year
""".split()

# Adjectives with regular comparative / superlative forms.
ADJECTIVES = "deep great hard high long low new old slow small".split()

IRREGULARS = [
    ("began", "verb", "begin"),
    ("begun", "verb", "begin"),
    ("bent", "verb", "bend"),
    ("bled", "verb", "bleed"),
    ("bound", "verb", "bind"),
    ("broke", "verb", "break"),
    ("broken", "verb", "break"),
    ("built", "verb", "build"),
    ("came", "verb", "come"),
    ("children", "noun", "child"),
    ("feet", "noun", "foot"),
    ("found", "verb", "find"),
    ("got", "verb", "get"),
    ("gotten", "verb", "get"),
    ("held", "verb", "hold"),
    ("kept", "verb", "keep"),
    ("leaves", "noun", "leaf"),
    ("leaves", "verb", "leave"),
    ("left", "verb", "leave"),
    ("lost", "verb", "lose"),
    ("made", "verb", "make"),
    ("meant", "verb", "mean"),
    ("men", "noun", "man"),
    ("ran", "verb", "run"),
    ("saw", "verb", "see"),
    ("seen", "verb", "see"),
    ("sent", "verb", "send"),
    ("shorn", "verb", "shear"),
    ("stuck", "verb", "stick"),
    ("taken", "verb", "take"),
    ("teeth", "noun", "tooth"),
    ("tore", "verb", "tear"),
    ("torn", "verb", "tear"),
    ("took", "verb", "take"),
    ("went", "verb", "go"),
    ("wore", "verb", "wear"),
    ("worn", "verb", "wear"),
    ("worse", "adj", "bad"),
    ("worst", "adj", "bad"),
    ("better", "adj", "good"),
    ("best", "adj", "good"),
]


def plural(word: str) -> str:
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if word.endswith("y") and len(word) > 1 and word[-2] not in VOWELS:
        return word[:-1] + "ies"
    return word + "s"


def verb_forms(base: str, double: bool) -> list[tuple[str, str]]:
    forms = [(plural(base), base)]
    if base.endswith("e"):
        forms.append((base + "d", base))
        forms.append((base[:-1] + "ing", base))
    elif base.endswith("y") and len(base) > 1 and base[-2] not in VOWELS:
        forms.append((base[:-1] + "ied", base))
        forms.append((base + "ing", base))
    elif double:
        forms.append((base + base[-1] + "ed", base))
        forms.append((base + base[-1] + "ing", base))
    else:
        forms.append((base + "ed", base))
        forms.append((base + "ing", base))
    return forms


def main() -> None:
    entries: dict[tuple[str, str], str] = {}
    irregular_verbs = {lemma for _, pos, lemma in IRREGULARS if pos == "verb"}

    for raw in VERBS:
        base = raw.rstrip("+")
        if base in irregular_verbs or base == "split":
            # past/participle handled by the irregulars list (or absent,
            # for zero-inflection verbs); only the -s form is regular
            entries[(plural(base), "verb")] = base
            continue
        for form, lemma in verb_forms(base, raw.endswith("+")):
            entries[(form, "verb")] = lemma
    for noun in NOUNS:
        entries[(plural(noun), "noun")] = noun
    for adj in ADJECTIVES:
        if adj.endswith("e"):
            entries[(adj + "r", "adj")] = adj
            entries[(adj + "st", "adj")] = adj
        else:
            entries[(adj + "er", "adj")] = adj
            entries[(adj + "est", "adj")] = adj
    for form, pos, lemma in IRREGULARS:
        entries[(form, pos)] = lemma

    # Forms whose lemma is identical across parts of speech collapse to a
    # single unkeyed line; the rest stay tagged so the heuristic tagger can
    # pick (e.g. leaves -> leaf|leave).
    by_form: dict[str, dict[str, str]] = {}
    for (form, pos), lemma in entries.items():
        by_form.setdefault(form, {})[pos] = lemma

    keys = {form for form in by_form}
    lines = []
    for form in sorted(by_form):
        lemmas = by_form[form]
        targets = set(lemmas.values())
        assert not (targets & keys), f"lemma target is itself a key: {targets & keys}"
        if len(targets) == 1:
            lines.append(f"{form}\t{next(iter(targets))}")
        else:
            for pos in sorted(lemmas):
                lines.append(f"{form}\t{pos}\t{lemmas[pos]}")

    out = Path(__file__).resolve().parents[1] / "src" / "fcm" / "data" / "lemmas.tsv"
    header = (
        "# Default lemma table: regular inflections of a maintenance-domain\n"
        "# vocabulary plus common English irregulars. Regenerate with\n"
        "# scripts/build_lemma_table.py. Format: form<TAB>lemma or\n"
        "# form<TAB>pos<TAB>lemma with pos in {noun, verb, adj, adv}.\n"
    )
    out.write_text(header + "\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(lines)} lines)")


if __name__ == "__main__":
    main()
