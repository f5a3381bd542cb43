#!/usr/bin/env python3
"""Builds the bundled demo dataset (data/europe_ai.csv) and the region
name-to-code lookup (data/region_codes.csv).

The dataset is synthetic but shaped like a real European NUTS-3 export:
781 regions, three nested thematic levels (ALL > COMPU > AI), and a set
of well-known regions whose specialization (RSI) and citation-impact
(RCI) profiles match published reference values. Counts are derived by
inverting the indicator formulas against fixed European aggregates
(AI share of COMPU and mean citations per AI paper), then one large
region absorbs the integer-rounding residue so the aggregates come out
exact. The script recomputes every indicator from the written file and
fails loudly if any target drifts.

Run from the repository root:  python3 scripts/make_demo_dataset.py
"""

import csv
import math
import random
import sys
from pathlib import Path

SEED = 20240615
AI_SHARE = 0.075        # European AI docs / COMPU docs
MEAN_CITES = 8.0        # European citations per AI paper

# name, country, nuts, target RSI, target RCI, AI docs -- the top-20 RSI
# table, in rank order.
TOP20 = [
    ("Bugas", "Bulgaria", "BG341", 0.820, 0.78, 900),
    ("Olomoucky kraj", "Czech Rep", "CZ071", 0.801, 1.30, 850),
    ("Giessen, Landkreis", "Germany", "DE721", 0.751, 1.22, 700),
    ("Granada", "Spain", "ES614", 0.712, 2.55, 4200),
    ("Banskobystricky kraj", "Slovakia", "SK032", 0.706, 0.92, 420),
    ("Jihočeský kraj", "Czech Rep", "CZ031", 0.702, 1.08, 560),
    ("Krakowski", "Poland", "PL214", 0.692, 0.85, 880),
    ("Czestochowski", "Poland", "PL224", 0.665, 0.80, 640),
    ("Vilniaus apskritis", "Lithuania", "LT011", 0.647, 2.80, 2500),
    ("Rzeszowski", "Poland", "PL823", 0.641, 0.83, 720),
    ("Burgos", "Spain", "ES412", 0.631, 1.38, 380),
    ("Navarra", "Spain", "ES220", 0.630, 1.52, 760),
    ("Jaén", "Spain", "ES616", 0.621, 2.05, 1200),
    ("Córdoba", "Spain", "ES613", 0.615, 1.62, 820),
    ("Salamanca", "Spain", "ES415", 0.609, 2.10, 680),
    ("Moravskoslezsky kraj", "Czech Rep", "CZ080", 0.608, 1.04, 980),
    ("Bihor", "Romania", "RO111", 0.606, 0.70, 360),
    ("Asturias", "Spain", "ES120", 0.585, 1.31, 740),
    ("Bialostocki", "Poland", "PL841", 0.579, 0.76, 520),
    ("Plovdiv", "Bulgaria", "BG421", 0.566, 0.72, 610),
]

# Other regions with pinned profiles (large producers, impact outliers).
NAMED = [
    ("Warszawa", "Poland", "PL911", 0.30, 0.90, 6000),
    ("Paris (Île-de-France)", "France", "FR101", -0.15, 1.05, 4500),
    ("Madrid", "Spain", "ES300", -0.05, 0.98, 4300),
    ("Praha", "Czech Rep", "CZ010", 0.20, 1.10, 3000),
    ("Fyn", "Denmark", "DK031", -0.20, 4.30, 800),
    ("Trento", "Italy", "ITH20", -0.10, 2.40, 700),
    ("Delft en Westland", "Netherlands", "NL333", -0.25, 2.60, 650),
    ("Potsdam", "Germany", "DE404", -0.30, 1.90, 400),
    ("Tübingen", "Germany", "DE142", -0.35, 2.20, 650),
]

BALANCER = ("Berlin", "Germany", "DE300")

COUNTRIES = {
    "AT": "Austria", "BE": "Belgium", "BG": "Bulgaria", "CH": "Switzerland",
    "CY": "Cyprus", "CZ": "Czech Rep", "DE": "Germany", "DK": "Denmark",
    "EE": "Estonia", "EL": "Greece", "ES": "Spain", "FI": "Finland",
    "FR": "France", "HR": "Croatia", "HU": "Hungary", "IE": "Ireland",
    "IT": "Italy", "LT": "Lithuania", "LU": "Luxembourg", "LV": "Latvia",
    "MT": "Malta", "NL": "Netherlands", "NO": "Norway", "PL": "Poland",
    "PT": "Portugal", "RO": "Romania", "SE": "Sweden", "SI": "Slovenia",
    "SK": "Slovakia", "UK": "United Kingdom",
}
FILLER_WEIGHTS = {
    "DE": 90, "FR": 70, "IT": 65, "UK": 60, "PL": 48, "ES": 38, "RO": 30,
    "EL": 28, "NL": 25, "CZ": 24, "AT": 20, "BE": 20, "BG": 20, "CH": 20,
    "HU": 20, "PT": 20, "SE": 20, "FI": 15, "HR": 15, "NO": 15, "SK": 14,
    "DK": 10, "SI": 10, "IE": 8, "LT": 7, "LV": 5, "EE": 4, "CY": 1,
    "LU": 1, "MT": 1,
}

N_REGIONS = 781
N_DECOYS = 5          # high RSI but under 200 COMPU docs
N_ZERO_AI = 10        # AI level present with zero docs
N_NO_AI_LEVEL = 4     # AI level absent entirely
N_NO_COMPU_LEVEL = 1  # COMPU level absent entirely


def aindx_of(rsi):
    return (1.0 + rsi) / (1.0 - rsi)


def rsi_of(aindx):
    return (aindx - 1.0) / (aindx + 1.0)


class Region:
    def __init__(self, name, country, nuts):
        self.name = name
        self.country = country
        self.nuts = nuts
        self.levels = {}  # level -> [docs, cites]


def make_codes(rng, count, used):
    codes = []
    ccs = list(FILLER_WEIGHTS)
    weights = [FILLER_WEIGHTS[c] for c in ccs]
    counters = {c: 0 for c in ccs}
    while len(codes) < count:
        cc = rng.choices(ccs, weights)[0]
        while True:
            code = f"{cc}{counters[cc]:03d}"
            counters[cc] += 1
            if code not in used:
                break
        used.add(code)
        codes.append((code, COUNTRIES[cc]))
    return codes


def fill_upper_levels(rng, region, ai_docs, ai_cites, compu_docs):
    compu_cites = ai_cites + round((compu_docs - ai_docs) * rng.uniform(3.0, 12.0))
    all_docs = compu_docs + round(compu_docs * rng.uniform(1.2, 5.5))
    all_cites = compu_cites + round((all_docs - compu_docs) * rng.uniform(2.0, 15.0))
    region.levels["ALL"] = [all_docs, all_cites]
    region.levels["COMPU"] = [compu_docs, compu_cites]


def build_regions():
    rng = random.Random(SEED)
    regions = []
    used = set()

    named_specs = []  # (region, rsi_target, rci_target, ai_docs)
    for name, country, nuts, rsi, rci, ai in TOP20 + NAMED:
        used.add(nuts)
        named_specs.append((Region(name, country, nuts), rsi, rci, ai))
    used.add(BALANCER[2])

    n_fillers = N_REGIONS - len(named_specs) - 1
    filler_codes = make_codes(rng, n_fillers, used)
    filler_specs = []  # (region, rsi_target, rci_target, kind)
    for i, (code, country) in enumerate(filler_codes):
        region = Region(f"Region {code}", country, code)
        if i < N_DECOYS:
            kind = "decoy"
            rsi = rng.uniform(0.70, 0.85) if i else 0.85
        elif i < N_DECOYS + N_ZERO_AI:
            kind, rsi = "zero_ai", -1.0
        elif i < N_DECOYS + N_ZERO_AI + N_NO_AI_LEVEL:
            kind, rsi = "no_ai_level", 0.0
        elif i < N_DECOYS + N_ZERO_AI + N_NO_AI_LEVEL + N_NO_COMPU_LEVEL:
            kind, rsi = "no_compu_level", 0.0
        else:
            kind = "plain"
            rsi = max(-0.90, min(0.45, rng.gauss(-0.05, 0.25)))
        rci = min(2.8, max(0.15, rng.lognormvariate(-0.06, 0.35)))
        filler_specs.append((region, rsi, rci, kind))

    # Pass 1: documents. AI counts follow the target activity level against
    # the fixed European share; the balancer absorbs the rounding residue.
    ai_cites_targets = {}
    for region, rsi, rci, ai in named_specs:
        compu = round(ai / (aindx_of(rsi) * AI_SHARE))
        region.levels["AI"] = [ai, 0]
        fill_upper_levels(rng, region, ai, 0, compu)
        ai_cites_targets[region.nuts] = rci

    for region, rsi, rci, kind in filler_specs:
        if kind == "decoy":
            compu = rng.randint(120, 199)
            ai = round(aindx_of(rsi) * AI_SHARE * compu)
        elif kind == "zero_ai":
            compu = rng.randint(150, 4000)
            ai = 0
        elif kind == "no_ai_level":
            compu = rng.randint(300, 6000)
            ai = 0
        elif kind == "no_compu_level":
            ai = rng.randint(50, 300)
            compu = None
        else:
            compu = max(60, round(rng.lognormvariate(7.2, 1.0)))
            ai = min(2200, round(aindx_of(rsi) * AI_SHARE * compu))
        if kind == "no_compu_level":
            all_docs = ai + round(ai * rng.uniform(8.0, 20.0))
            region.levels["AI"] = [ai, 0]
            region.levels["ALL"] = [all_docs, 0]
        else:
            if kind != "no_ai_level":
                region.levels["AI"] = [ai, 0]
            fill_upper_levels(rng, region, ai, 0, compu)
        if kind in ("decoy", "plain"):
            ai_cites_targets[region.nuts] = rci

    pool = [r for r, *_ in named_specs] + [r for r, *_ in filler_specs]

    # Named regions over-produce AI relative to the European share, so scale
    # the plain fillers' AI counts until the total sits close to the target
    # share; a single mid-sized balancer region then absorbs the remainder.
    def totals():
        compu = sum(r.levels["COMPU"][0] for r in pool if "COMPU" in r.levels)
        ai = sum(r.levels["AI"][0] for r in pool if "AI" in r.levels)
        return compu, ai

    sum_compu, sum_ai = totals()
    adjustable = [r for r, _, _, kind in filler_specs if kind == "plain" and r.levels["AI"][0] >= 20]
    excess = sum_ai - AI_SHARE * sum_compu
    factor = 1.0 - excess / sum(r.levels["AI"][0] for r in adjustable)
    assert 0.3 < factor < 1.7, factor
    for r in adjustable:
        compu = r.levels["COMPU"][0]
        cap = math.floor(aindx_of(0.45) * AI_SHARE * compu)
        r.levels["AI"][0] = min(max(0, round(r.levels["AI"][0] * factor)), cap, compu)

    sum_compu, sum_ai = totals()
    balancer = Region(*BALANCER)
    compu_bal = 40000
    ai_bal = round(AI_SHARE * (sum_compu + compu_bal) - sum_ai)
    assert 0 < ai_bal <= min(compu_bal, 5500), ai_bal
    balancer.levels["AI"] = [ai_bal, 0]
    fill_upper_levels(rng, balancer, ai_bal, 0, compu_bal)
    pool.append(balancer)

    # Pass 2: AI citations. Named regions keep their exact targets, filler
    # citations are rescaled so the European mean lands on MEAN_CITES, and
    # the balancer mops up the last few rounding units.
    total_ai = sum(r.levels["AI"][0] for r in pool if "AI" in r.levels)
    want_total = round(MEAN_CITES * total_ai)

    named_sum = 0
    for region, rsi, rci, ai in named_specs:
        cites = round(rci * MEAN_CITES * ai)
        region.levels["AI"][1] = cites
        named_sum += cites

    filler_raw = []
    for region, rsi, rci, kind in filler_specs:
        ai = region.levels["AI"][0] if "AI" in region.levels else 0
        filler_raw.append(rci * MEAN_CITES * ai)
    raw_sum = sum(filler_raw)
    gamma = (want_total - named_sum - MEAN_CITES * ai_bal) / raw_sum
    assert 0.6 < gamma < 1.4, gamma

    filler_sum = 0
    for (region, rsi, rci, kind), raw in zip(filler_specs, filler_raw):
        cites = round(raw * gamma)
        if "AI" in region.levels:
            region.levels["AI"][1] = cites
            filler_sum += cites

    cites_bal = want_total - named_sum - filler_sum
    if cites_bal == MEAN_CITES * ai_bal:
        cites_bal += 1  # keep the demo free of exact-boundary RCI values
    assert 0.9 * MEAN_CITES * ai_bal < cites_bal < 1.1 * MEAN_CITES * ai_bal
    balancer.levels["AI"][1] = cites_bal

    # Citations were assigned after COMPU/ALL were derived, so restore the
    # cumulative structure of the citation columns.
    for region in pool:
        if "AI" in region.levels and "COMPU" in region.levels:
            region.levels["COMPU"][1] += region.levels["AI"][1]
            region.levels["ALL"][1] += region.levels["AI"][1]
        elif "AI" in region.levels:
            region.levels["ALL"][1] = region.levels["AI"][1] * 2

    return pool


def verify(path):
    regions = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            reg = regions.setdefault(row["nuts_code"], {"name": row["region_name"]})
            reg[row["level"]] = (int(row["docs"]), int(row["cites"]))

    assert len(regions) == N_REGIONS, len(regions)
    sum_compu = sum(r["COMPU"][0] for r in regions.values() if "COMPU" in r)
    sum_ai = sum(r["AI"][0] for r in regions.values() if "AI" in r)
    sum_ai_cites = sum(r["AI"][1] for r in regions.values() if "AI" in r)
    share = sum_ai / sum_compu
    mean = sum_ai_cites / sum_ai
    assert abs(share - AI_SHARE) < 1e-6, share
    assert abs(mean - MEAN_CITES) < 1e-4, mean

    indicators = {}
    for nuts, r in regions.items():
        if "AI" not in r or "COMPU" not in r or r["COMPU"][0] == 0:
            continue
        aindx = (r["AI"][0] / r["COMPU"][0]) / share
        rsi = rsi_of(aindx)
        rci = (r["AI"][1] / r["AI"][0]) / mean if r["AI"][0] else None
        indicators[nuts] = (rsi, rci, r["COMPU"][0], r["AI"])

    ranked = sorted(
        ((rsi, nuts) for nuts, (rsi, _, compu, _) in indicators.items() if compu >= 200),
        key=lambda t: (-t[0], t[1]),
    )
    top = [nuts for _, nuts in ranked[:20]]
    want = [t[2] for t in TOP20]
    assert top == want, list(zip(top, want))
    for (name, _, nuts, rsi_t, _, _), (rsi, _) in zip(TOP20, ranked):
        assert abs(rsi - rsi_t) < 0.003, (name, rsi, rsi_t)
    assert ranked[20][0] <= 0.50, ranked[20]

    decoys = [n for n, (rsi, _, compu, _) in indicators.items() if compu < 200 and rsi > 0.566]
    assert len(decoys) >= N_DECOYS, decoys
    assert max(indicators[n][0] for n in decoys) > indicators["BG341"][0]

    for nuts, lo, hi in [("ES614", 2.50, 2.60), ("ES616", 2.00, 2.10)]:
        rci = indicators[nuts][1]
        assert lo < rci < hi, (nuts, rci)
    fyn_rsi, fyn_rci = indicators["DK031"][0], indicators["DK031"][1]
    assert fyn_rsi < 0 and fyn_rci > 4.0, (fyn_rsi, fyn_rci)
    assert fyn_rci == max(rci for _, rci, _, _ in indicators.values() if rci is not None)

    ai_docs = {n: r["AI"][0] for n, r in regions.items() if "AI" in r}
    ai_cites = {n: r["AI"][1] for n, r in regions.items() if "AI" in r}
    assert max(ai_docs, key=ai_docs.get) == "PL911"
    by_cites = sorted(ai_cites, key=ai_cites.get, reverse=True)
    assert by_cites[0] == "ES614" and by_cites[1] == "LT011", by_cites[:3]

    for nuts, r in regions.items():
        docs = {lvl: r[lvl][0] for lvl in ("AI", "COMPU", "ALL") if lvl in r}
        if "AI" in docs and "COMPU" in docs:
            assert docs["AI"] <= docs["COMPU"], nuts
        if "COMPU" in docs and "ALL" in docs:
            assert docs["COMPU"] <= docs["ALL"], nuts
        if "AI" in docs and "ALL" in docs:
            assert docs["AI"] <= docs["ALL"], nuts

    for nuts in ("ES614", "ES616", "LT011", "ES415", "DK031", "ITH20", "NL333", "DE404", "DE142"):
        assert ai_docs[nuts] >= 100, nuts

    bal_rsi, bal_rci = indicators["DE300"][0], indicators["DE300"][1]
    assert -0.45 < bal_rsi < 0.30 and 0.9 < bal_rci < 1.1, (bal_rsi, bal_rci)
    assert bal_rci != 1.0

    fig3 = sum(1 for n, d in ai_docs.items() if d >= 100)
    print(f"ok: {len(regions)} regions, AI share {share:.6f}, mean cites {mean:.4f}, "
          f"{fig3} regions with >=100 AI docs, top RSI {ranked[0][0]:.4f}")


def main():
    root = Path(__file__).resolve().parent.parent
    out = root / "data"
    out.mkdir(exist_ok=True)

    pool = build_regions()
    pool.sort(key=lambda r: r.nuts)

    dataset = out / "europe_ai.csv"
    with open(dataset, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["nuts_code", "region_name", "country", "level", "docs", "cites"])
        for region in pool:
            for level in sorted(region.levels):
                docs, cites = region.levels[level]
                writer.writerow([region.nuts, region.name, region.country, level, docs, cites])

    codes = out / "region_codes.csv"
    with open(codes, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["region_name", "country", "nuts_code"])
        for name, country, nuts, *_ in TOP20 + NAMED:
            writer.writerow([name, country, nuts])
        writer.writerow([*BALANCER[:2], BALANCER[2]])

    verify(dataset)
    print(f"wrote {dataset} and {codes}")


if __name__ == "__main__":
    sys.exit(main())
