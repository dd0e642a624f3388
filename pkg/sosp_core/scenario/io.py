import json
import logging
import os
from pathlib import Path
from typing import IO, Any, Dict, Iterable, Optional, Union

from ..orbits import ORBIT_COLS, Orbits
from ..utils.documents import DocumentParseError, as_float, as_int, as_list, as_pair, check_keys
from .opportunities import Opportunities, Opportunity
from .scenario import Scenario
from .tasks import Tasks

logger = logging.getLogger(__name__)

__all__ = [
    "FORMAT_VERSION",
    "ScenarioParseError",
    "scenario_to_document",
    "scenario_from_document",
    "dump_document",
    "parse_document",
    "save_scenario",
    "load_scenario",
]

FORMAT_VERSION = 1
SCENARIO_KEYS = ["format", "meta", "orbits", "tasks", "opportunities"]
META_KEYS = ["horizon_seconds", "max_cluster_duration"]
TASK_KEYS = ["id", "weight"]
ORBIT_KEYS = ["id"] + ORBIT_COLS[1:]
OPPORTUNITY_KEYS = ["task_id", "orbit_id", "window", "angle_range"]

PathOrFile = Union[str, os.PathLike, IO[str]]

# Scenario and schedule documents share one format and one parse error
ScenarioParseError = DocumentParseError


def scenario_to_document(scenario: Scenario) -> Dict[str, Any]:
    """
    Represent a scenario as a JSON-compatible document.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to represent.

    Returns
    -------
    document : dict
        Document with the keys format, meta, orbits, tasks and opportunities.
    """
    orbits = []
    for orbit in scenario.orbits.to_records():
        record = {"id": orbit.orbit_id}
        for name in ORBIT_COLS[1:]:
            record[name] = getattr(orbit, name)
        orbits.append(record)

    return {
        "format": FORMAT_VERSION,
        "meta": {
            "horizon_seconds": scenario.horizon_seconds,
            "max_cluster_duration": scenario.max_cluster_duration,
        },
        "orbits": orbits,
        "tasks": [{"id": t.task_id, "weight": t.weight} for t in scenario.task_records],
        "opportunities": [
            {
                "task_id": o.task_id,
                "orbit_id": o.orbit_id,
                "window": [o.start, o.end],
                "angle_range": [o.angle_lo, o.angle_hi],
            }
            for o in scenario.opportunity_records
        ],
    }


def scenario_from_document(
    document: Any, optional_keys: Iterable[str] = (), validate: bool = True
) -> Scenario:
    """
    Build a scenario from a parsed document.

    Parameters
    ----------
    document : dict
        Parsed document.
    optional_keys : iterable of str, optional
        Additional top-level keys that are tolerated (and ignored here).
    validate : bool, optional
        If True, check every scenario invariant.

    Returns
    -------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario.

    Raises
    ------
    ScenarioParseError : If the document is malformed. The message names the field.
    ScenarioValidationError : If the scenario breaks an invariant.
    """
    check_keys(document, SCENARIO_KEYS, "$", optional=optional_keys)
    version = as_int(document["format"], "format")
    if version != FORMAT_VERSION:
        raise ScenarioParseError(f"format: unsupported version {version}")

    meta = document["meta"]
    check_keys(meta, META_KEYS, "meta")
    horizon_seconds = as_int(meta["horizon_seconds"], "meta.horizon_seconds")
    max_cluster_duration = as_float(meta["max_cluster_duration"], "meta.max_cluster_duration")

    orbit_columns: Dict[str, list] = {name: [] for name in ORBIT_COLS}
    for i, record in enumerate(as_list(document["orbits"], "orbits")):
        path = f"orbits[{i}]"
        check_keys(record, ORBIT_KEYS, path)
        orbit_columns["orbit_id"].append(as_int(record["id"], f"{path}.id"))
        for name in ORBIT_COLS[1:-1]:
            orbit_columns[name].append(as_float(record[name], f"{path}.{name}"))
        orbit_columns["max_openings"].append(
            as_int(record["max_openings"], f"{path}.max_openings")
        )

    task_ids, weights = [], []
    for i, record in enumerate(as_list(document["tasks"], "tasks")):
        path = f"tasks[{i}]"
        check_keys(record, TASK_KEYS, path)
        task_ids.append(as_int(record["id"], f"{path}.id"))
        weights.append(as_int(record["weight"], f"{path}.weight"))

    opportunities = []
    for i, record in enumerate(as_list(document["opportunities"], "opportunities")):
        path = f"opportunities[{i}]"
        check_keys(record, OPPORTUNITY_KEYS, path)
        start, end = as_pair(record["window"], f"{path}.window", as_int)
        angle_lo, angle_hi = as_pair(record["angle_range"], f"{path}.angle_range", as_float)
        opportunities.append(
            Opportunity(
                task_id=as_int(record["task_id"], f"{path}.task_id"),
                orbit_id=as_int(record["orbit_id"], f"{path}.orbit_id"),
                start=start,
                end=end,
                angle_lo=angle_lo,
                angle_hi=angle_hi,
            )
        )

    if orbit_columns["orbit_id"]:
        orbits = Orbits.from_kwargs(**orbit_columns)
    else:
        orbits = Orbits.empty()
    if task_ids:
        tasks = Tasks.from_kwargs(task_id=task_ids, weight=weights)
    else:
        tasks = Tasks.empty()

    scenario = Scenario(
        tasks=tasks,
        orbits=orbits,
        opportunities=Opportunities.from_records(opportunities),
        horizon_seconds=horizon_seconds,
        max_cluster_duration=max_cluster_duration,
    )
    if validate:
        scenario.validate()
    return scenario


def dump_document(document: Dict[str, Any], sink: PathOrFile) -> None:
    text = json.dumps(document, indent=2) + "\n"
    if isinstance(sink, (str, os.PathLike)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def parse_document(source: PathOrFile) -> Any:
    """
    Read and parse a JSON document.

    Raises
    ------
    ScenarioParseError : If the text is not valid JSON. The message carries the
        line and column of the error.
    """
    if isinstance(source, (str, os.PathLike)):
        text = Path(source).read_text(encoding="utf-8")
        name = str(source)
    else:
        text = source.read()
        name = getattr(source, "name", "<stream>")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{name}: line {e.lineno} column {e.colno}: {e.msg}") from e


def save_scenario(scenario: Scenario, sink: PathOrFile) -> None:
    """
    Write a scenario as a UTF-8 JSON document.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to write.
    sink : str, path or text file
        Destination.
    """
    dump_document(scenario_to_document(scenario), sink)
    logger.debug(f"Saved {scenario!r}.")


def load_scenario(source: PathOrFile, optional_keys: Optional[Iterable[str]] = None) -> Scenario:
    """
    Read a scenario written by save_scenario (or by hand in the same format).

    Parameters
    ----------
    source : str, path or text file
        Source document.
    optional_keys : iterable of str, optional
        Additional top-level keys that are tolerated.

    Returns
    -------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Validated scenario.

    Raises
    ------
    ScenarioParseError : If the document is malformed.
    ScenarioValidationError : If the scenario breaks an invariant.
    """
    return scenario_from_document(parse_document(source), optional_keys=optional_keys or ())
