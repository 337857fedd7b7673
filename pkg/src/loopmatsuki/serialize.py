"""JSON and TSV wire formats.

Constant matrices are row-major arrays of Gaussian-rational strings
("a/b+c/d*i"); Laurent matrices map each entry to {exponent: string}.
JSON is the source of truth; the TSV projection drops matrices and keeps
the human-diffable columns.
"""

from __future__ import annotations

import json

from typing import List, Optional, Union

from .canonicalize import CanonicalForm
from .coweight_orbits import SphericalClass
from .errors import InvalidInputError
from .gaussian import qi_from_str, qi_to_str
from .iwahori_orbits import IwahoriClass
from .laurent import LaurentMatrix, SeriesMatrix

def const_matrix_to_json(m: LaurentMatrix) -> List[List[str]]:
    if not m.is_constant():
        raise InvalidInputError("matrix is not constant")
    c = m.constant_matrix()
    return [[qi_to_str(v) for v in row] for row in c]

def const_matrix_from_json(rows: List[List[str]]) -> LaurentMatrix:
    return LaurentMatrix.from_scalars([[qi_from_str(v) for v in row]
                                       for row in rows])

def laurent_to_json(m: Union[LaurentMatrix, SeriesMatrix]) -> dict:
    entries = [[{str(k): qi_to_str(v) for k, v in sorted(e.items())}
                for e in row] for row in m.rows]
    out = {"n": m.n, "entries": entries}
    if isinstance(m, SeriesMatrix):
        out["precision"] = m.precision
    return out

def laurent_from_json(doc: dict) -> Union[LaurentMatrix, SeriesMatrix]:
    rows = [[{int(k): qi_from_str(v) for k, v in e.items()}
             for e in row] for row in doc["entries"]]
    if "precision" in doc:
        return SeriesMatrix(rows, int(doc["precision"]))
    return LaurentMatrix(rows)

def _datum_fields(datum) -> dict:
    return {
        "family": datum.family,
        "n": datum.n,
        "epsilon": datum.epsilon,
        "z": qi_to_str(datum.z),
    }

def orbit_row(cls: Union[SphericalClass, IwahoriClass]) -> dict:
    if isinstance(cls, SphericalClass):
        row = _datum_fields(cls.datum)
        row.update({
            "side": cls.side,
            "level": "spherical",
            "lambda": list(cls.lam),
            "label": cls.label,
            "component_group": list(cls.component_group),
            "representative": laurent_to_json(cls.loop_rep),
        })
        if cls.aut_label is not None:
            row["aut_label"] = cls.aut_label
        return row
    row = _datum_fields(cls.datum)
    row.update({
        "side": cls.side,
        "level": "iwahori",
        "lambda": list(cls.tw.lam),
        "w": list(cls.tw.w),
        "label": ",".join(str(a) for a in cls.g0_args),
        "component_group": list(cls.component_group),
    })
    if cls.loop_rep is not None:
        row["representative"] = laurent_to_json(cls.loop_rep)
    return row

def canonical_form_to_json(form: CanonicalForm) -> dict:
    return {
        "side": form.side,
        "lambda": list(form.lam),
        "g0": laurent_to_json(form.g0),
        "loop_rep": laurent_to_json(form.loop_rep),
        "certificate": laurent_to_json(form.certificate),
        "residual_precision": form.residual_precision,
        "orbit_class": orbit_row(form.orbit_class),
    }

def bundle_to_json(b) -> dict:
    out = {
        "epsilon": b.epsilon,
        "z": qi_to_str(b.z),
        "splitting": list(b.splitting),
        "c": const_matrix_to_json(b.gluing),
        "aut_label": b.aut_label,
    }
    if b.lines is not None:
        l0, linf = b.lines
        out["lines"] = {"l0": [qi_to_str(v) for v in l0],
                        "linf": [qi_to_str(v) for v in linf]}
    return out

def kottwitz_to_json(p) -> dict:
    return {
        "lambda": list(p.lam),
        "g": const_matrix_to_json(p.g),
        "z": qi_to_str(p.z),
    }

def kottwitz_from_json(doc: dict):
    from .bundles_kottwitz import KottwitzPoint
    return KottwitzPoint(lam=tuple(int(v) for v in doc["lambda"]),
                         g=const_matrix_from_json(doc["g"]),
                         z=qi_from_str(doc["z"]))

def matched_pair_to_json(pair, report: Optional[dict] = None) -> dict:
    out = {
        "level": pair.level,
        "theta": orbit_row(pair.theta_class),
        "eta": orbit_row(pair.eta_class),
        "common_rep": (laurent_to_json(pair.common_rep)
                       if pair.common_rep is not None else None),
    }
    if report is not None:
        out["verification"] = report
    return out

TSV_COLUMNS = ["family", "n", "epsilon", "z", "side", "level", "lambda",
               "label", "component_group", "aut_label"]

def rows_to_tsv(rows: List[dict]) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for row in rows:
        cells = []
        for col in TSV_COLUMNS:
            v = row.get(col, "")
            if isinstance(v, list):
                v = ",".join(str(x) for x in v)
            cells.append(str(v))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"

def dumps(doc) -> str:
    """Deterministic JSON text (sorted keys, stable separators)."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
