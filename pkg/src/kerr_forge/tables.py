"""Reference values for the alpha = 2, tau = 2pi truncation tables and row builders."""

from __future__ import annotations

import math

from .wigner import LEVELS, REFERENCE_STEP, PRECISIONS, Region, criteria_report

M_RANGE = tuple(range(9, 17))

# isoline level -> ratio per M = 9..16
ISOLINE_REF = {
    0.1: (1.33, 1.20, 1.10, 1.04, 1.01, 1.01, 1.00, 1.00),
    0.3: (1.23, 1.10, 1.04, 1.01, 1.00, 1.00, 1.01, 1.01),
    0.5: (1.19, 1.08, 1.01, 1.04, 1.04, 1.04, 1.04, 1.04),
}
# precision -> percent of agreeing grid points
AGREEMENT_REF = {
    1e-2: (64, 76, 90, 99, 100, 100, 100, 100),
    1e-3: (26, 36, 44, 53, 65, 80, 97, 100),
}
# percent
AVG_ERR_REF = (1.67, 0.98, 0.55, 0.30, 0.15, 0.08, 0.04, 0.02)
MAX_ERR_REF = (11.30, 6.39, 3.48, 1.84, 0.94, 0.47, 0.22, 0.11)

FIDELITY_REF = {9: 0.9838, 10: 0.9943, 14: 0.9999}


def ref(table, m: int):
    """Reference entry for M, or None outside 9..16."""
    if m not in M_RANGE:
        return None
    return table[m - M_RANGE[0]]


def table_rows(alpha: float = 2.0, m_values=M_RANGE, tau: float = 2 * math.pi,
               region: Region | None = None, step: float = REFERENCE_STEP):
    """Computed-vs-reference rows for the three tables, one report per M."""
    known = alpha == 2.0 and math.isclose(tau, 2 * math.pi)
    iso, agree, err = [], [], []
    for m in m_values:
        rep = criteria_report(alpha, tau, m, region, step)
        row = {"M": m}
        for lv in LEVELS:
            row[f"ratio_{lv}"] = rep.isoline_ratios[lv]
            row[f"ref_{lv}"] = ref(ISOLINE_REF[lv], m) if known else None
        iso.append(row)
        row = {"M": m}
        for p in PRECISIONS:
            row[f"agree_{p:g}_pct"] = 100 * rep.agreement[p]
            row[f"ref_{p:g}_pct"] = ref(AGREEMENT_REF[p], m) if known else None
        agree.append(row)
        err.append({
            "M": m,
            "avg_pct": 100 * rep.avg_rel_err,
            "ref_avg_pct": ref(AVG_ERR_REF, m) if known else None,
            "max_pct": 100 * rep.max_rel_err,
            "ref_max_pct": ref(MAX_ERR_REF, m) if known else None,
            "fidelity": rep.fidelity,
        })
    return iso, agree, err
