"""Report serialisation: stamped JSON, CSV rows and atomic file output."""

import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Optional, TextIO, Union

import numpy as np
from pydantic import BaseModel

from models import ClaimClass, RunConfig, SweepReport
from utils.errors import UsageError

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.1.0"


@contextmanager
def atomic_output(path: Union[str, Path]) -> Iterator[TextIO]:
    """Write to a temporary file beside path and move it into place on success."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    handle = tempfile.NamedTemporaryFile(
        mode="w", dir=directory, prefix=f".{target.name}.", suffix=".tmp", delete=False,
        encoding="utf-8", newline="",
    )
    try:
        yield handle
        handle.flush()
        os.fsync(handle.fileno())
        handle.close()
        os.replace(handle.name, target)
        logger.debug("wrote %s", target)
    except BaseException:
        handle.close()
        Path(handle.name).unlink(missing_ok=True)
        raise


def _default(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return np.stack([obj.real, obj.imag], axis=-1).tolist()
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"object of type {type(obj).__name__} is not JSON serialisable")


def dumps_json(payload: Any) -> str:
    """Sorted keys, two-space indent, floats in shortest round-trip form."""
    return json.dumps(payload, indent=2, sort_keys=True, default=_default, allow_nan=False) + "\n"


def config_digest(echo: dict[str, Any]) -> str:
    canonical = json.dumps(echo, sort_keys=True, separators=(",", ":"), default=_default)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def stamp(payload: dict[str, Any], config: RunConfig, claim_class: Optional[ClaimClass] = None) -> dict[str, Any]:
    """Embed tool version, seed, config echo and its digest, and the claim class."""
    echo = config.echo()
    stamped = dict(payload)
    stamped.update(
        tool_version=TOOL_VERSION,
        seed=config.seed,
        config=echo,
        config_digest=config_digest(echo),
    )
    if claim_class is not None:
        stamped["claim_class"] = claim_class
    return stamped


def stamp_report(report: SweepReport, config: RunConfig) -> dict[str, Any]:
    seeded = report.model_copy(update={"seed": config.seed, "config": config.echo(), "tool_version": TOOL_VERSION})
    return stamp(seeded.model_dump(mode="json"), config, report.claim_class)


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def dumps_csv(report: SweepReport) -> str:
    """One row per evaluated point: sorted location keys, then value and margin."""
    keys = sorted({key for row in report.rows for key in row.location})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*keys, "value", "margin"])
    for row in report.rows:
        cells = [row.location.get(key) for key in keys] + [row.value, row.margin]
        writer.writerow([_format_cell(cell) for cell in cells])
    return buffer.getvalue()


def render(payload: Union[dict[str, Any], SweepReport], fmt: str, config: RunConfig) -> str:
    if isinstance(payload, SweepReport):
        if fmt == "csv":
            return dumps_csv(payload)
        return dumps_json(stamp_report(payload, config))
    if fmt == "csv":
        raise UsageError("CSV output is only available for sweep reports")
    return dumps_json(stamp(payload, config, payload.get("claim_class")))


def emit(text: str, out: Optional[str]) -> None:
    """Print to stdout, or write atomically when an output path is given."""
    if out is None:
        sys.stdout.write(text)
        return
    with atomic_output(out) as handle:
        handle.write(text)


__all__ = [
    "TOOL_VERSION",
    "atomic_output",
    "dumps_json",
    "config_digest",
    "stamp",
    "stamp_report",
    "dumps_csv",
    "render",
    "emit",
]
