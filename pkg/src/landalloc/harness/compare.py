"""Pooled front quality comparison of several optimizers over many instances."""

from __future__ import annotations

import csv
import json
from itertools import permutations
from pathlib import Path

import numpy as np

from ..errors import CoverageError
from ..metrics import (
    hypervolume_2d,
    igd,
    joined_rank,
    normalize,
    pseudo_optimal_front,
    rank_table,
    reference_point,
    wilcoxon_signed_rank,
)
from ..records import RunRecord
from .experiment import MANIFEST

ALPHA = 0.05


def load_archive(directory) -> dict[str, dict[str, dict[int, np.ndarray]]]:
    """``{instance: {optimizer: {seed: front}}}`` from an experiment directory.

    Raises:
        CoverageError: a planned cell failed or has no record, or optimizers
            were run on different seed sets.
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST
    if not manifest_path.exists():
        raise CoverageError(f"no {MANIFEST} in {directory}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    archive: dict = {}
    missing = []
    for cell in manifest["cells"]:
        where = f"{cell['instance']}/{cell['optimizer']}/seed {cell['seed']}"
        if cell.get("status") != "ok":
            missing.append(f"{where} ({cell.get('error', 'failed')})")
            continue
        path = directory / cell["path"]
        if not path.exists():
            missing.append(f"{where} (record file missing)")
            continue
        rec = RunRecord.load(path)
        archive.setdefault(cell["instance"], {}).setdefault(cell["optimizer"], {})[cell["seed"]] = rec.points()
    if missing:
        raise CoverageError("missing cells: " + "; ".join(missing))
    return archive


def _check_coverage(archive) -> tuple[list[str], list[str]]:
    instances = sorted(archive)
    optimizers = sorted({o for runs in archive.values() for o in runs})
    gaps = []
    for inst in instances:
        seeds = set().union(*(set(r) for r in archive[inst].values()))
        for opt in optimizers:
            have = set(archive[inst].get(opt, {}))
            gaps.extend(f"{inst}/{opt}/seed {s}" for s in sorted(seeds - have))
    if gaps:
        raise CoverageError("missing cells: " + "; ".join(gaps))
    if not instances or not optimizers:
        raise CoverageError("archive is empty")
    return instances, optimizers


def compare(archive) -> dict:
    """Compare optimizers on every instance of ``archive``.

    Per instance the fronts of all runs are pooled into a pseudo-optimal front
    (the IGD reference) and a shared HV reference point. Mean HV/IGD per
    optimizer are min-max normalised across optimizers and ranked; the joined
    rank averages the HV and IGD average ranks. Pairwise Wilcoxon tests pair
    runs by seed.
    """
    instances, optimizers = _check_coverage(archive)
    per_instance = {}
    mean_hv = np.zeros((len(optimizers), len(instances)))
    mean_igd = np.zeros_like(mean_hv)
    for j, inst in enumerate(instances):
        runs = archive[inst]
        seeds = sorted(next(iter(runs.values())))
        all_fronts = [runs[o][s] for o in optimizers for s in seeds]
        pseudo = pseudo_optimal_front(all_fronts)
        ref = reference_point(all_fronts)
        entry = {"reference_point": ref.tolist(), "pseudo_front": pseudo.tolist(), "seeds": seeds, "runs": {}}
        for i, opt in enumerate(optimizers):
            hv = [hypervolume_2d(runs[opt][s], ref) for s in seeds]
            ig = [igd(pseudo, runs[opt][s]) for s in seeds]
            entry["runs"][opt] = {"hv": hv, "igd": ig}
            mean_hv[i, j] = np.mean(hv)
            mean_igd[i, j] = np.mean(ig)
        entry["mean_hv"] = dict(zip(optimizers, mean_hv[:, j].tolist()))
        entry["mean_igd"] = dict(zip(optimizers, mean_igd[:, j].tolist()))
        for name, col in (("normalized_hv", mean_hv[:, j]), ("normalized_igd", mean_igd[:, j])):
            lo, hi = col.min(), col.max()
            entry[name] = {o: normalize(v, lo, hi) for o, v in zip(optimizers, col.tolist())}
        per_instance[inst] = entry

    hv_rank = rank_table(mean_hv, "maximize")
    igd_rank = rank_table(mean_igd, "minimize")
    joined = joined_rank(igd_rank, hv_rank)
    instance_joined = (hv_rank.ranks + igd_rank.ranks) / 2

    pairwise = []
    for a, b in permutations(range(len(optimizers)), 2):
        oa, ob = optimizers[a], optimizers[b]
        tests = {}
        for inst in instances:
            runs = per_instance[inst]["runs"]
            if len(per_instance[inst]["seeds"]) < 5:
                tests[inst] = None
                continue
            tests[inst] = {
                m: wilcoxon_signed_rank(runs[oa][m], runs[ob][m], ALPHA).to_dict() for m in ("hv", "igd")
            }
        pairwise.append({
            "optimizer": oa,
            "versus": ob,
            "better": int(np.sum(instance_joined[a] < instance_joined[b])),
            "worse": int(np.sum(instance_joined[a] > instance_joined[b])),
            "wilcoxon": tests,
        })

    table = []
    for i in np.argsort(joined, kind="stable"):
        table.append({
            "optimizer": optimizers[i],
            "joined_rank": float(joined[i]),
            "igd_median": float(igd_rank.median[i]),
            "igd_average": float(igd_rank.average[i]),
            "igd_min": float(igd_rank.minimum[i]),
            "igd_max": float(igd_rank.maximum[i]),
            "hv_median": float(hv_rank.median[i]),
            "hv_average": float(hv_rank.average[i]),
            "hv_min": float(hv_rank.minimum[i]),
            "hv_max": float(hv_rank.maximum[i]),
        })
    return {
        "optimizers": optimizers,
        "instances": instances,
        "alpha": ALPHA,
        "per_instance": per_instance,
        "ranking": {
            "hv": hv_rank.to_dict(),
            "igd": igd_rank.to_dict(),
            "joined": dict(zip(optimizers, joined.tolist())),
        },
        "pairwise": pairwise,
        "table": table,
    }


def write_table_csv(report: dict, path) -> Path:
    path = Path(path)
    rows = report["table"]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    return path
