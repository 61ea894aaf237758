import csv
import json
import math
from dataclasses import dataclass, replace
from importlib import metadata
from pathlib import Path
from typing import Iterable, List, Optional, Union, TextIO

import numpy as np

from fair_alloc.utils.util import git_describe
from fair_alloc.welfare import WelfareParam

CSV_HEADER = ("experiment", "instance", "policy", "q", "eta", "T", "reps", "mean_alg", "mean_opt", "regret",
              "regret_stderr", "rel_regret", "flu_value", "degenerate", "wall_time_ms")
SUMMARY_INSTANCE = "mean"
_FLOAT_FIELDS = ("mean_alg", "mean_opt", "regret", "regret_stderr", "rel_regret", "flu_value", "wall_time_ms")


def format_float(x: float) -> str:
    # 17 significant digits read back to the same double
    return format(x, ".17g")


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    instance: str
    policy: str
    q: WelfareParam
    eta: Optional[float]
    T: int
    reps: int
    mean_alg: float
    mean_opt: float
    regret: float
    regret_stderr: float
    rel_regret: float
    flu_value: float
    degenerate: bool
    wall_time_ms: float

    def to_record(self) -> dict:
        record = {
            "experiment": self.experiment,
            "instance": self.instance,
            "policy": self.policy,
            "q": self.q.token(),
            "eta": "" if self.eta is None else format_float(self.eta),
            "T": str(self.T),
            "reps": str(self.reps),
            "degenerate": "true" if self.degenerate else "false",
        }
        record.update({name: format_float(getattr(self, name)) for name in _FLOAT_FIELDS})
        return record

    @classmethod
    def from_record(cls, record: dict) -> "ResultRow":
        missing = [name for name in CSV_HEADER if name not in record]
        if missing:
            raise ValueError(f"result record is missing {', '.join(missing)}")
        if record["degenerate"] not in ("true", "false"):
            raise ValueError(f"degenerate must be true or false, got {record['degenerate']!r}")
        return cls(
            experiment=record["experiment"],
            instance=record["instance"],
            policy=record["policy"],
            q=WelfareParam.parse(record["q"]),
            eta=float(record["eta"]) if record["eta"] else None,
            T=int(record["T"]),
            reps=int(record["reps"]),
            degenerate=record["degenerate"] == "true",
            **{name: float(record[name]) for name in _FLOAT_FIELDS},
        )


class ResultWriter:
    """
        Streams rows to a CSV file in the order they are written.
    """

    def __init__(self, out: Union[str, Path, TextIO]):
        if isinstance(out, (str, Path)):
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            self._file = open(out, "w", newline="")
            self._owned = True
        else:
            self._file = out
            self._owned = False
        self._writer = csv.DictWriter(self._file, fieldnames=CSV_HEADER, lineterminator="\n")
        self._writer.writeheader()

    def write(self, row: ResultRow):
        self._writer.writerow(row.to_record())
        self._file.flush()

    def close(self):
        if self._owned:
            self._file.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_rows(rows: Iterable[ResultRow], out: Union[str, Path, TextIO]):
    with ResultWriter(out) as writer:
        for row in rows:
            writer.write(row)


def read_rows(src: Union[str, Path, TextIO]) -> List[ResultRow]:
    if isinstance(src, (str, Path)):
        with open(src, newline="") as f:
            return read_rows(f)
    reader = csv.DictReader(src)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [ResultRow.from_record(record) for record in reader]


def summarize_relative_regret(rows: Iterable[ResultRow]) -> List[ResultRow]:
    """
    Average per-instance rows into one row per (experiment, policy, q, eta, T) with instance "mean".

    rel_regret is the mean of the per-instance relative regrets (average of ratios), the other
    value columns are plain means, regret_stderr is the standard error of the mean regret.
    """
    groups = {}
    for row in rows:
        if row.instance == SUMMARY_INSTANCE:
            continue
        groups.setdefault((row.experiment, row.policy, row.q, row.eta, row.T), []).append(row)

    summary = []
    for group in groups.values():
        m = len(group)

        def mean(name):
            return float(np.mean([getattr(r, name) for r in group]))

        summary.append(replace(
            group[0],
            instance=SUMMARY_INSTANCE,
            reps=sum(r.reps for r in group),
            mean_alg=mean("mean_alg"),
            mean_opt=mean("mean_opt"),
            regret=mean("regret"),
            regret_stderr=math.sqrt(sum(r.regret_stderr ** 2 for r in group)) / m,
            rel_regret=mean("rel_regret"),
            flu_value=mean("flu_value"),
            degenerate=any(r.degenerate for r in group),
            wall_time_ms=float(sum(r.wall_time_ms for r in group)),
        ))
    return summary


def package_version() -> str:
    try:
        return metadata.version("fair_alloc")
    except metadata.PackageNotFoundError:
        return "unknown"


def write_manifest(path: Union[str, Path], config: dict, master_seed: int, distributions: Optional[dict] = None,
                   failures: Optional[list] = None) -> dict:
    """
    Write the JSON audit record of a run next to its CSV

    :param path: manifest path, conventionally <out>.json
    :param config: echo of the experiment configuration
    :param master_seed: seed every stream was derived from
    :param distributions: instance id -> distribution dict
    :param failures: one entry per job that did not produce a row
    """
    manifest = {
        "config": config,
        "master_seed": master_seed,
        "distributions": distributions or {},
        "version": package_version(),
        "git_describe": git_describe(),
        "csv_header": list(CSV_HEADER),
        "failures": failures or [],
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest

