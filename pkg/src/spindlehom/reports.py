"""Human tables and newline-delimited JSON records.

Records keep a fixed field order and contain only integers, strings,
booleans and lists of those, so identical runs give identical bytes.
"""

from __future__ import annotations

import json

from .homology import AbelianGroup, HomologyTable


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(v[k]) for k in sorted(v, key=_sort_key)}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, AbelianGroup):
        return str(v)
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return str(v)


def _sort_key(k):
    return (0, k, "") if isinstance(k, int) else (1, 0, str(k))


def record_line(rec: dict) -> str:
    return json.dumps({k: _plain(v) for k, v in rec.items()}, ensure_ascii=False,
                      separators=(",", ":"))


def records(recs) -> str:
    return "".join(record_line(r) + "\n" for r in recs)


# homology -------------------------------------------------------------------

def homology_records(H: HomologyTable, meta: dict):
    yield {"kind": "config", **meta}
    for d in H.degrees():
        G = H[d]
        yield {"kind": "group", "degree": d, "free": G.free_rank, "torsion": list(G.torsion),
               "group": str(G)}


def homology_table(H: HomologyTable) -> str:
    return " ".join(f"{d}:{H[d]}" for d in H.degrees()) + "\n"


# spectral -------------------------------------------------------------------

def spectral_records(pages: dict, meta: dict):
    yield {"kind": "config", **meta}
    for r in sorted(pages, key=lambda r: (r == "inf", r if r != "inf" else 0)):
        dims = pages[r]
        for (p, q) in sorted(dims):
            yield {"kind": "page", "r": r, "p": p, "q": q, "dim": dims[(p, q)]}


def spectral_table(pages: dict) -> str:
    lines = []
    for r in sorted(pages, key=lambda r: (r == "inf", r if r != "inf" else 0)):
        dims = pages[r]
        cells = " ".join(f"({p},{q}):{dims[(p, q)]}" for (p, q) in sorted(dims))
        label = "E^inf" if r == "inf" else f"E^{r}"
        lines.append(f"{label} {cells}".rstrip())
    return "\n".join(lines) + "\n"


# verification ledger ----------------------------------------------------------

def summary(entries) -> dict:
    out = {"pass": 0, "fail": 0, "vacuous": 0}
    for e in entries:
        out[e.status] += 1
    return out


def verify_records(entries):
    for e in entries:
        yield {"kind": "check", "check": e.check, "case": e.case, "status": e.status,
               "detail": e.detail}
    yield {"kind": "summary", **summary(entries)}


def verify_table(entries) -> str:
    lines = []
    for e in entries:
        extra = record_line(e.detail) if e.detail else ""
        lines.append(f"{e.status:<8} {e.check:<16} {e.case}  {extra}".rstrip())
    s = summary(entries)
    lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['vacuous']} vacuous")
    return "\n".join(lines) + "\n"


def validation_table(results) -> str:
    lines = []
    for rec in results:
        what = rec["what"]
        if rec["ok"]:
            lines.append(f"ok      {what}")
        else:
            lines.append(f"FAILED  {what}: {rec['error']}")
    return "\n".join(lines) + "\n"
