"""File formats: joint/dataset CSV, marginals JSON, moments JSON.

Joint CSV      header ``x1,...,xp,y,prob``; integer labels, decimal
               probabilities, rows in any order, missing cells are zero.
Dataset CSV    header ``x1,...,xp,y``; one sample per row.
Generic CSV    header ``x,y,prob`` for an unstructured two-alphabet joint.
Marginals JSON object with ``p``, ``m``, ``xx`` (map "i,j" -> m*m row-major,
               1-based i < j) and ``xy`` (map "i" -> m*2 row-major).
Moments JSON   object with ``mu`` (length p+1, Y last) and ``lambda``
               ((p+1)^2 row-major).

Alphabet sizes are inferred from the data (max label + 1, at least 2) unless
passed explicitly.  ``dumps_canonical`` renders JSON deterministically with
17-significant-digit floats for byte-stable reports.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .distributions import AlphabetSpec, Dataset, DiscreteJoint, PairwiseMarginalSet
from .errors import ValidationError
from .gaussian import GaussianMoments
from .hgr import GenericJoint


def _parse_label(text: str, what: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad {what} label {text!r}") from exc


def _parse_prob(text: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad probability {text!r}") from exc


def read_joint_csv(path, m: int | None = None) -> DiscreteJoint:
    """Load a joint table; infers p from the header and m from the labels."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if len(header) < 3 or header[-1] != "prob" or header[-2] != "y":
            raise ValidationError(f"{path}: expected header x1,...,xp,y,prob")
        p = len(header) - 2
        rows = []
        for line in reader:
            if not line:
                continue
            if len(line) != p + 2:
                raise ValidationError(f"{path}: row has {len(line)} fields, expected {p + 2}")
            x = tuple(_parse_label(v, "feature") for v in line[:p])
            y = _parse_label(line[p], "y")
            rows.append((x, y, _parse_prob(line[p + 1])))
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    if m is None:
        m = max(2, 1 + max(max(x) for x, _, _ in rows))
    from .distributions import joint_from_table

    return joint_from_table(AlphabetSpec(p, m), rows)


def write_joint_csv(joint: DiscreteJoint, path):
    """Write every atom (including zeros) in state-index order."""
    spec = joint.spec
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(spec.p)] + ["y", "prob"])
        for idx in range(spec.n_states):
            labels = spec.decode(idx)
            for y in (0, 1):
                writer.writerow(list(labels) + [y, format(joint.prob[idx, y], ".17g")])


def read_dataset_csv(path, m: int | None = None) -> Dataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if len(header) < 2 or header[-1] != "y":
            raise ValidationError(f"{path}: expected header x1,...,xp,y")
        p = len(header) - 1
        rows = []
        for line in reader:
            if not line:
                continue
            if len(line) != p + 1:
                raise ValidationError(f"{path}: row has {len(line)} fields, expected {p + 1}")
            rows.append([_parse_label(v, "feature") for v in line[:p]] + [_parse_label(line[p], "y")])
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    rows = np.asarray(rows, dtype=int)
    if m is None:
        m = max(2, 1 + int(rows[:, :p].max()))
    return Dataset(AlphabetSpec(p, m), rows)


def write_dataset_csv(data: Dataset, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(data.spec.p)] + ["y"])
        writer.writerows(data.rows.tolist())


def read_generic_csv(path) -> GenericJoint:
    """Unstructured two-alphabet joint from ``x,y,prob`` rows."""
    cells = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y", "prob"]:
            raise ValidationError(f"{path}: expected header x,y,prob")
        for line in reader:
            if not line:
                continue
            if len(line) != 3:
                raise ValidationError(f"{path}: row has {len(line)} fields, expected 3")
            x = _parse_label(line[0], "x")
            y = _parse_label(line[1], "y")
            if x < 0 or y < 0:
                raise ValidationError(f"{path}: labels must be non-negative")
            if (x, y) in cells:
                raise ValidationError(f"{path}: cell ({x}, {y}) specified twice")
            cells[(x, y)] = _parse_prob(line[2])
    if not cells:
        raise ValidationError(f"{path}: no data rows")
    nx = 1 + max(x for x, _ in cells)
    ny = 1 + max(y for _, y in cells)
    prob = np.zeros((nx, ny))
    for (x, y), v in cells.items():
        prob[x, y] = v
    return GenericJoint(prob)


def marginals_to_json_obj(marginals: PairwiseMarginalSet) -> dict:
    spec = marginals.spec
    xx = {}
    for i in range(spec.p):
        for j in range(i + 1, spec.p):
            xx[f"{i + 1},{j + 1}"] = [float(v) for v in marginals.xx[(i, j)].reshape(-1)]
    xy = {
        str(i + 1): [float(v) for v in marginals.xy[i].reshape(-1)] for i in range(spec.p)
    }
    return {"p": spec.p, "m": spec.m, "xx": xx, "xy": xy}


def marginals_from_json_obj(obj: dict) -> PairwiseMarginalSet:
    try:
        p = int(obj["p"])
        m = int(obj["m"])
        xy_raw = obj["xy"]
        xx_raw = obj.get("xx", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed marginals object: {exc}") from exc
    spec = AlphabetSpec(p, m)
    xy = np.zeros((p, m, 2))
    for i in range(p):
        key = str(i + 1)
        if key not in xy_raw:
            raise ValidationError(f"marginals missing xy table for feature {key}")
        tab = np.asarray(xy_raw[key], dtype=float)
        if tab.size != 2 * m:
            raise ValidationError(f"xy[{key}] must have {2 * m} entries")
        xy[i] = tab.reshape(m, 2)
    xx = {}
    for i in range(p):
        for j in range(i + 1, p):
            key = f"{i + 1},{j + 1}"
            if key not in xx_raw:
                raise ValidationError(f"marginals missing xx table for pair {key}")
            tab = np.asarray(xx_raw[key], dtype=float)
            if tab.size != m * m:
                raise ValidationError(f"xx[{key}] must have {m * m} entries")
            xx[(i, j)] = tab.reshape(m, m)
            xx[(j, i)] = xx[(i, j)].T
    px = xy.sum(axis=2)
    return PairwiseMarginalSet(spec, xx, xy, px)


def read_marginals_json(path) -> PairwiseMarginalSet:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return marginals_from_json_obj(obj)


def write_marginals_json(marginals: PairwiseMarginalSet, path):
    with open(path, "w") as fh:
        fh.write(dumps_canonical(marginals_to_json_obj(marginals)))
        fh.write("\n")


def read_moments_json(path) -> GaussianMoments:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    try:
        mu = np.asarray(obj["mu"], dtype=float)
        lam_flat = np.asarray(obj["lambda"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed moments object: {exc}") from exc
    n = mu.shape[0]
    if lam_flat.size != n * n:
        raise ValidationError(f"lambda must have {n * n} entries, got {lam_flat.size}")
    return GaussianMoments(mu, lam_flat.reshape(n, n))


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------


def _render(obj, out: list):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isnan(x):
            out.append("null")
        elif np.isinf(x):
            raise ValidationError("cannot serialize infinity")
        else:
            out.append(format(x, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for idx, key in enumerate(sorted(obj)):
            if idx:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _render(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for idx, item in enumerate(obj):
            if idx:
                out.append(",")
            _render(item, out)
        out.append("]")
    else:
        raise ValidationError(f"cannot serialize {type(obj).__name__}")


def dumps_canonical(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    out: list = []
    _render(obj, out)
    return "".join(out)
