"""Batch runner: presets of checks, JSON reports, exit codes 0/1/2."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Mapping

from ..errors import DimlabError
from ..report import FAILED
from . import checks
from .finite import corpus
from .presentations import PresentationSpec
from .reps import RepTag, monoadd_check

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _pres(spec: Mapping) -> PresentationSpec:
    return checks.presentation_from_params(spec)


def run_job(job: Mapping) -> dict:
    """Run one job description and return its report as a dict."""
    kind = job["kind"]
    if kind == "dim":
        rep = checks.check_dim_identity(job["id"], dict(job.get("params", {})))
    elif kind == "fox":
        rep = checks.check_fox(job["part"], _pres(job["pres"]), job.get("witnesses"))
    elif kind == "thdim":
        from .finite import abelian_table, load_table
        table = load_table(job["table"]) if "table" in job else abelian_table(job["pres"]["group"])
        rep = checks.check_thdim(_pres(job["pres"]), table)
    elif kind == "foxlimit":
        rep = checks.check_foxlimit(_pres(job["pres"]))
    elif kind == "limit":
        rep = checks.check_limit_formula(_pres(job["pres"]), RepTag.parse(job.get("rep", "gamma2_mod3")))
    elif kind == "monoadd":
        rep = monoadd_check(RepTag.parse(job["rep"]), _pres(job["pres"]), job.get("expect_injective"))
    elif kind == "dimq":
        rep = checks.check_dim_quotients(corpus(job.get("max_order", 16)), job.get("n", 3))
    else:
        raise DimlabError(f"unknown job kind {kind!r}")
    return rep.to_dict()


def _safe(job: Mapping) -> dict:
    try:
        return run_job(job)
    except DimlabError as exc:
        return {"check": job.get("id") or job.get("part") or job["kind"], "params": dict(job),
                "status": "ERROR", "error": f"{type(exc).__name__}: {exc}"}


SMOKE: list[dict] = [
    {"kind": "dim", "id": "FG1", "params": {"exponents": [4, 2]}},
    {"kind": "dim", "id": "L2", "params": {"exponents": [4, 2]}},
    {"kind": "dim", "id": "D3FR", "params": {"group": [2, 4]}},
    {"kind": "dim", "id": "D3R2", "params": {"group": [2, 2]}},
    {"kind": "dim", "id": "EQR", "params": {"group": [2, 4]}},
    {"kind": "limit", "rep": "gamma2_mod3", "pres": {"group": [2, 2]}},
    {"kind": "monoadd", "rep": "f2_over_fr_f4", "pres": {"group": [2, 2]}},
    {"kind": "fox", "part": "REMARK_TF", "pres": {"rank": 2, "relators": ["x1 x2^-1"]}},
    {"kind": "dimq", "n": 3, "max_order": 8},
]

FULL: list[dict] = (
    [{"kind": "dim", "id": cid, "params": {"exponents": e}}
     for cid in ("FG1", "L2", "FSIDEAL") for e in ([0, 0], [1, 1], [2, 2], [4, 2], [6, 2], [4, 2, 2])]
    + [{"kind": "dim", "id": "CORFRF", "params": {"exponents": e}} for e in ([0, 0], [1, 1], [0, 1], [0, 0, 1])]
    + [{"kind": "dim", "id": cid, "params": {"group": g}}
       for cid in ("FRCAPF3", "EQR", "KKV", "D3FR", "D3R2") for g in ([2, 2], [2, 4], [4, 4])]
    + [{"kind": "dim", "id": "CHAIN5", "params": {"group": [2, 2]}}]
    + [{"kind": "limit", "rep": "gamma2_mod3", "pres": {"group": g}} for g in ([2, 2], [2, 4])]
    + [{"kind": "limit", "rep": "gamma2_mod3",
        "pres": {"rank": 3, "relators": ["x1^2", "x2^4", "x3 x2^-1 x1^-1"], "include_gamma2": True}}]
    + [{"kind": "monoadd", "rep": "f2_over_fr_f4", "pres": {"group": g}} for g in ([2, 2], [2, 4])]
    + [{"kind": "monoadd", "rep": "gamma2_mod3", "pres": {"group": [2, 4]}, "expect_injective": False}]
    + [{"kind": "thdim", "pres": {"group": g}} for g in ([2, 2], [4, 2])]
    + [{"kind": "fox", "part": "GEN_B", "pres": {"group": [2, 2]}},
       {"kind": "fox", "part": "ISO_A", "pres": {"group": [2, 2]}},
       {"kind": "fox", "part": "REMARK_TF", "pres": {"rank": 2, "relators": ["x1 x2^-1"]}}]
    + [{"kind": "foxlimit", "pres": {"group": g}} for g in ([2, 2, 2], [2])]
    + [{"kind": "dimq", "n": 3, "max_order": 16}]
)

PRESETS = {"smoke": SMOKE, "full": FULL}


def run_suite(config: Mapping) -> tuple[int, list[dict]]:
    """config: {'preset': name} and/or {'jobs_list': [...]}, optional 'jobs' (workers) and 'report' (path)."""
    jobs: list[dict] = []
    preset = config.get("preset")
    if preset:
        if preset not in PRESETS:
            raise DimlabError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        jobs += PRESETS[preset]
    jobs += list(config.get("checks", []))
    if not jobs:
        raise DimlabError("the suite configuration selects no checks")
    workers = int(config.get("jobs", 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_safe, jobs))
    else:
        reports = [_safe(j) for j in jobs]
    for r in reports:
        log.info("%s %s", r["check"], r["status"])
    if config.get("report"):
        Path(config["report"]).write_text(json.dumps(reports, indent=2))
    return exit_status(reports), reports


def exit_status(reports: Iterable[Mapping]) -> int:
    statuses = [r["status"] for r in reports]
    if "ERROR" in statuses:
        return EXIT_USAGE
    if FAILED in statuses:
        return EXIT_FAILED
    return EXIT_OK
