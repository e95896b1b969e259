"""Report tree and log files.

Layout under the report directory::

    <base>/
      run_<k>.dat, run_<k>.json     run summary (text and JSON mirror)
      transfers_<k>.dat             tick sender receiver msg_id
      <obj_id>/contacts_<k>.dat     neighbor ts_entry ts_exit
      <obj_id>/ways_<k>.dat         one way id per line, in traversal order
      <obj_id>/messages_<k>.dat     msg_id received_from received_at
      <obj_id>/summary_<k>.dat      key value
      events/<e_id>_<k>.dat         key value

Fields are separated by a single space; times are ``HH:MM:SS``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

from .errors import IoFailure
from .events import Event
from .mobility import AgentState
from .routing import ContactRecord, Transfer
from .timer import convert_hms, parse_hms

__all__ = [
    "AgentSummary", "EventRecord", "MessageRecord", "RunSummary", "convert_hms", "parse_hms",
    "create_report_directory", "write_movement_log", "write_event_log", "write_run_summary",
    "write_transfer_log", "read_contacts", "read_ways", "read_messages", "read_agent_summary",
    "read_event_log", "read_transfers", "read_run_summary", "summarize_run",
]


@dataclass
class RunSummary:
    run_index: int
    events_generated: int
    events_delivered: int
    delivery_ratio: float
    total_transfers: int
    mean_delivery_latency_h: Optional[float]
    per_agent_contacts: dict[str, int] = field(default_factory=dict)


class MessageRecord(NamedTuple):
    msg_id: str
    received_from: str
    received_at: str


class AgentSummary(NamedTuple):
    obj_id: str
    group_id: str
    movement: str
    protocol: str
    level: int
    time_traveled_s: float
    ways_traversed: int
    contacts: int
    messages: int


class EventRecord(NamedTuple):
    e_id: str
    assigned_to: str
    origin: str
    expiry: str
    expired: bool
    delivered_at: Optional[str]
    delivered_to: Optional[str]
    payload: bytes
    trace: list


def _write(path: Path, lines) -> Path:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
    except OSError as exc:
        raise IoFailure(path, str(exc)) from exc
    return path


def _read_lines(path) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(path, str(exc)) from exc


def _kv(path) -> dict[str, str]:
    out = {}
    for line in _read_lines(path):
        key, _, value = line.partition(" ")
        out[key] = value
    return out


def create_report_directory(base, obj_ids) -> Path:
    """Create ``base``, one directory per agent and ``events/``. Existing files stay."""
    base = Path(base)
    try:
        base.mkdir(parents=True, exist_ok=True)
        for obj_id in obj_ids:
            (base / obj_id).mkdir(exist_ok=True)
        (base / "events").mkdir(exist_ok=True)
    except OSError as exc:
        raise IoFailure(base, str(exc)) from exc
    return base


# -- per-agent --------------------------------------------------------------------

def agent_summary(agent: AgentState) -> AgentSummary:
    proto = agent.protocol
    return AgentSummary(agent.obj_id, agent.group_id, agent.movement_model,
                        getattr(proto, "kind", "-"), agent.level, agent.time_traveled_s,
                        len(agent.ways_visited), len(proto.contact_log) if proto else 0,
                        len(agent.buffer))


def write_movement_log(agent: AgentState, run_index: int, base) -> list[Path]:
    folder = Path(base) / agent.obj_id
    contacts = agent.protocol.contact_log if agent.protocol else []
    summary = agent_summary(agent)
    return [
        _write(folder / f"contacts_{run_index}.dat",
               (f"{c.neighbor} {c.ts_entry} {c.ts_exit}" for c in contacts)),
        _write(folder / f"ways_{run_index}.dat", (str(w) for w in agent.ways_visited)),
        _write(folder / f"messages_{run_index}.dat",
               (f"{e.message.msg_id} {e.sender} {convert_hms(e.received_h)}" for e in agent.buffer)),
        _write(folder / f"summary_{run_index}.dat",
               (f"{k} {v!r}" if isinstance(v, float) else f"{k} {v}"
                for k, v in summary._asdict().items())),
    ]


def read_contacts(path) -> list[ContactRecord]:
    return [ContactRecord(*line.split(" ")) for line in _read_lines(path)]


def read_ways(path) -> list[int]:
    return [int(line) for line in _read_lines(path)]


def read_messages(path) -> list[MessageRecord]:
    return [MessageRecord(*line.split(" ")) for line in _read_lines(path)]


def read_agent_summary(path) -> AgentSummary:
    kv = _kv(path)
    return AgentSummary(kv["obj_id"], kv["group_id"], kv["movement"], kv["protocol"],
                        int(kv["level"]), float(kv["time_traveled_s"]), int(kv["ways_traversed"]),
                        int(kv["contacts"]), int(kv["messages"]))


# -- events --------------------------------------------------------------------

def write_event_log(event: Event, run_index: int, base) -> Path:
    delivered_at = convert_hms(event.delivered_h) if event.delivered else "-"
    lines = [
        f"e_id {event.e_id}",
        f"assigned_to {event.assigned_to}",
        f"origin {convert_hms(event.time_h)}",
        f"expiry {convert_hms(event.expiry_h)}",
        f"expired {event.expired}",
        f"delivered_at {delivered_at}",
        f"delivered_to {event.delivered_to or '-'}",
        f"payload {event.data.hex() or '-'}",
        "trace " + " ".join(event.handler_trace),
    ]
    return _write(Path(base) / "events" / f"{event.e_id}_{run_index}.dat", lines)


def read_event_log(path) -> EventRecord:
    kv = _kv(path)

    def opt(value):
        return None if value == "-" else value

    payload = kv["payload"]
    return EventRecord(
        kv["e_id"], kv["assigned_to"], kv["origin"], kv["expiry"], kv["expired"] == "True",
        opt(kv["delivered_at"]), opt(kv["delivered_to"]),
        b"" if payload == "-" else bytes.fromhex(payload), kv["trace"].split())


# -- run level --------------------------------------------------------------------

def write_transfer_log(transfers, run_index: int, base) -> Path:
    return _write(Path(base) / f"transfers_{run_index}.dat",
                  (f"{t.tick} {t.sender} {t.receiver} {t.msg_id}" for t in transfers))


def read_transfers(path) -> list[Transfer]:
    out = []
    for line in _read_lines(path):
        tick, sender, receiver, msg_id = line.split(" ")
        out.append(Transfer(int(tick), sender, receiver, msg_id))
    return out


def summarize_run(run_index: int, events, transfers, agents) -> RunSummary:
    generated = len(events)
    delivered = [e for e in events if e.delivered]
    latency = (sum(e.delivered_h - e.time_h for e in delivered) / len(delivered)
               if delivered else None)
    return RunSummary(
        run_index=run_index,
        events_generated=generated,
        events_delivered=len(delivered),
        delivery_ratio=len(delivered) / max(generated, 1),
        total_transfers=len(transfers),
        mean_delivery_latency_h=latency,
        per_agent_contacts={a.obj_id: len(a.protocol.contact_log) for a in agents},
    )


def write_run_summary(summary: RunSummary, base) -> list[Path]:
    k = summary.run_index
    latency = summary.mean_delivery_latency_h
    lines = [
        f"run_index {k}",
        f"events_generated {summary.events_generated}",
        f"events_delivered {summary.events_delivered}",
        f"delivery_ratio {summary.delivery_ratio!r}",
        f"total_transfers {summary.total_transfers}",
        f"mean_delivery_latency_h {'-' if latency is None else repr(latency)}",
    ]
    lines += [f"contacts {obj_id} {n}" for obj_id, n in summary.per_agent_contacts.items()]
    text_path = _write(Path(base) / f"run_{k}.dat", lines)
    json_path = Path(base) / f"run_{k}.json"
    _write(json_path, [json.dumps(asdict(summary), sort_keys=True, indent=2)])
    return [text_path, json_path]


def read_run_summary(path) -> RunSummary:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return RunSummary(**data)
