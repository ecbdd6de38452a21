"""Per-instance degree-law rows over a random corpus, and per-family summaries."""

from __future__ import annotations

from collections import defaultdict

from .corpus import DEFAULT_BUDGET, corpus
from .jacobian import check_keller
from .oracle import NotPolynomialUpTo, is_exact_inverse, measure_inverse_degree

REPORT_FIELDS = [
    "family", "case", "n", "deg_forward", "deg_inverse", "predicted_deg_inverse",
    "degree_bound", "oracle_deg_inverse", "jacobian_constant",
    "keller_ok", "roundtrip_ok", "degree_law_ok", "bound_ok", "oracle_ok",
]
SUMMARY_FIELDS = ["family", "instances", "keller_ok", "roundtrip_ok", "degree_law_ok",
                  "bound_ok", "oracle_ok", "failures"]


def instance_row(pair, oracle: bool = True) -> dict:
    n = pair.nvars
    d_fwd = pair.forward.degree()
    d_inv = pair.inverse.degree()
    bound = max(1, d_fwd) ** (n - 1)
    rep = check_keller(pair.forward)
    keller = rep.jacobian_is_constant and rep.constant_value == pair.jacobian_constant
    roundtrip = is_exact_inverse(pair.forward, pair.inverse)[0]
    predicted = pair.predicted_deg_inverse
    law = (predicted is None or d_inv == predicted) and d_fwd == pair.predicted_deg_forward
    if pair.deg_inverse_bound is not None:
        law = law and d_inv <= pair.deg_inverse_bound
    row = {
        "family": pair.family.value,
        "case": pair.info.get("case", ""),
        "n": n,
        "deg_forward": d_fwd,
        "deg_inverse": d_inv,
        "predicted_deg_inverse": "" if predicted is None else predicted,
        "degree_bound": bound,
        "oracle_deg_inverse": "",
        "jacobian_constant": rep.constant_value if rep.jacobian_is_constant else "none",
        "keller_ok": keller,
        "roundtrip_ok": roundtrip,
        "degree_law_ok": law,
        "bound_ok": d_inv <= bound,
        "oracle_ok": "",
    }
    if oracle:
        measured = measure_inverse_degree(pair.forward)
        row["oracle_deg_inverse"] = str(measured)
        row["oracle_ok"] = not isinstance(measured, NotPolynomialUpTo) and measured == d_inv
    return row


def degree_report(per_family: int = 20, seed: int = 0, budget: int = DEFAULT_BUDGET,
                  oracle: bool = True, families=None) -> list[dict]:
    return [instance_row(pair, oracle) for _, pair in corpus(per_family, seed, families, budget)]


def summarize(rows) -> list[dict]:
    groups = defaultdict(list)
    for r in rows:
        groups[r["family"]].append(r)
    out = []
    checks = ["keller_ok", "roundtrip_ok", "degree_law_ok", "bound_ok", "oracle_ok"]
    for fam, sub in groups.items():
        entry = {"family": fam, "instances": len(sub)}
        failures = 0
        for key in checks:
            vals = [r[key] for r in sub if r[key] != ""]
            entry[key] = sum(bool(v) for v in vals) if vals else ""
            failures += sum(not v for v in vals)
        entry["failures"] = failures
        out.append(entry)
    return out
