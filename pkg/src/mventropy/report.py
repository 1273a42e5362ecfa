"""Report assembly: CSV table, structured JSON document, optional figures.

The CSV is the determinism surface (criterion: byte-identical across runs);
every float is formatted, never repr'd.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field

CSV_HEADER = "kind,p,eps,n,count,rate,bound"


def _fmt(x):
    return "" if x is None else "%.6f" % x


@dataclass
class Report:
    """Flat rows plus a structured tree; both derive from one EntropyProfile."""
    rows: list = field(default_factory=list)       # dicts with the CSV columns
    headlines: dict = field(default_factory=dict)  # kind -> (rate, bound)
    metadata: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)      # human-readable lines

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for r in self.rows:
            out.write("%s,%s,%s,%d,%d,%s,%s\n" % (
                r["kind"],
                "" if r["p"] is None else str(r["p"]),
                r["eps"] if isinstance(r["eps"], str) else _fmt(r["eps"]),
                r["n"], r["count"], _fmt(r["rate"]), r["bound"]))
        return out.getvalue()

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "headlines": {k: {"rate": _fmt(v[0]), "bound": v[1]}
                          for k, v in sorted(self.headlines.items())},
            "rows": [{**r, "eps": r["eps"] if isinstance(r["eps"], str)
                      else (None if r["eps"] is None else _fmt(r["eps"])),
                      "rate": _fmt(r["rate"])} for r in self.rows],
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        lines = []
        for kind, (rate, bound) in sorted(self.headlines.items()):
            lines.append("%-8s headline %s  (%s)" % (kind, _fmt(rate), bound))
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"


def spec_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def from_profile(profile, metadata=None, notes=None) -> Report:
    """One CSV row per (kind, p, eps, n) cell of the profile."""
    rep = Report(metadata=dict(metadata or {}), notes=list(notes or []))
    rep.metadata.update(profile.metadata)
    caps = rep.metadata.get("caps")
    if caps is not None:
        rep.metadata["caps"] = {k: int(v) for k, v in caps.items()}
    for key in profile.cells():
        est = profile.estimates[key]
        eps = est.cover_id if est.eps is None else est.eps
        for n, (count, rate) in enumerate(zip(est.counts, est.rates), start=1):
            rep.rows.append({"kind": est.kind, "p": est.p, "eps": eps,
                             "n": n, "count": count, "rate": rate,
                             "bound": est.bound})
    for kind in sorted({k for (k, _p, _e) in profile.estimates}):
        rep.headlines[kind] = (profile.headline(kind), profile.headline_bound(kind))
    return rep


def write_report(report: Report, out_base: str) -> list:
    """Write <base>.csv and <base>.json; returns the paths written."""
    paths = []
    for suffix, text in ((".csv", report.to_csv()), (".json", report.to_json())):
        path = out_base + suffix
        with open(path, "w") as fh:
            fh.write(text)
        paths.append(path)
    return paths


def render_figures(report: Report, out_base: str) -> list:
    """One log-count-vs-n figure per kind, rendered beside the CSV/JSON."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import math

    paths = []
    kinds = sorted({r["kind"] for r in report.rows})
    for kind in kinds:
        fig, ax = plt.subplots(figsize=(6, 4))
        cells = {}
        for r in report.rows:
            if r["kind"] == kind:
                cells.setdefault((r["p"], r["eps"]), []).append((r["n"], r["count"]))
        for (p, eps), pts in sorted(cells.items(), key=lambda kv: str(kv[0])):
            pts.sort()
            label = eps if isinstance(eps, str) else "eps=%.4g" % eps
            ax.plot([n for n, _ in pts], [math.log(c) for _, c in pts],
                    marker="o", markersize=3, label=label)
        ax.set_xlabel("n")
        ax.set_ylabel("log count")
        ax.set_title(kind)
        ax.legend(fontsize=7)
        fig.tight_layout()
        path = "%s_%s.png" % (out_base, kind.lower())
        fig.savefig(path, dpi=110)
        plt.close(fig)
        paths.append(path)
    return paths
