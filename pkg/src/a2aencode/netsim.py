"""Synchronous p-port network engine.

The engine drives per-processor state machines in lock-step rounds: all
emissions of a round are collected and validated against the port model
before any delivery happens, so there are no intra-round ordering effects.
It meters the two communication costs:

* round count -- the number of rounds that carried at least one
  cross-processor message (self-delivery is a local state read and is
  never materialized as a message);
* element count -- the sum over counted rounds of the largest message
  size (in field elements) in that round, across all ports of all
  processors.

A processor may send at most one message per port and receive at most p
messages per round; violations abort the run with an error identifying
the processor and round. Two same-round messages from one sender to one
destination are allowed on distinct ports (only per-port limits apply).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .gf import Fe, PrimeField
from .linalg import DimensionError


class ModelViolation(RuntimeError):
    """A protocol broke the communication model."""

    def __init__(self, message: str, processor: int, round_no: int):
        super().__init__(f"{message} (processor {processor}, round {round_no})")
        self.processor = processor
        self.round_no = round_no


class PortOverflow(ModelViolation):
    """More sends or receives in one round than the processor has ports."""


class PortReuse(ModelViolation):
    """Two messages on the same (sender, port) in one round."""


class NonTermination(RuntimeError):
    """Protocol exceeded the round limit."""


class NoTrace(RuntimeError):
    """Trace requested from a run that did not record one."""


@dataclass(frozen=True)
class SystemConfig:
    """The machine model: K processors, p ports each, a prime field for
    payloads, and the per-message / per-element cost constants."""

    K: int
    p: int
    field: PrimeField
    beta_startup: Fraction = Fraction(1)
    tau_per_element: Fraction = Fraction(1)

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"need at least one processor, got K={self.K}")
        if self.p < 1:
            raise ValueError(f"need at least one port, got p={self.p}")
        if self.K > 1 and self.p >= self.K:
            raise ValueError(f"port count must satisfy p < K, got p={self.p}, K={self.K}")


@dataclass(frozen=True)
class Message:
    sender: int
    receiver: int
    port: int
    round_no: int
    payload: tuple[Fe, ...]


@dataclass(frozen=True)
class CostReport:
    """Measured costs of one completed run."""

    c1: int
    c2: int
    d: tuple[int, ...]
    messages: Optional[tuple[Message, ...]] = None
    violations: tuple[str, ...] = ()


class ProcessorProtocol:
    """Behavioral contract for per-processor state machines.

    ``emit(round_no)`` returns the outbound messages for the round as
    ``(receiver, port, payload)`` triples; ``absorb(round_no, messages)``
    applies the round's inbound messages (possibly none); ``output()``
    yields the processor's final coded packet. Both emit and absorb must
    be deterministic functions of the state. The run terminates when no
    processor emits anything.
    """

    def emit(self, round_no: int) -> list[tuple[int, int, list[Fe]]]:
        return []

    def absorb(self, round_no: int, messages: list[Message]) -> None:
        pass

    def output(self) -> Fe:
        raise NotImplementedError


SpawnFn = Callable[[int, Fe], ProcessorProtocol]


def default_round_limit(k: int) -> int:
    """4*ceil(log2 K) + 8: generous for every protocol in the library."""
    return 4 * (max(k, 1) - 1).bit_length() + 8


def run(
    config: SystemConfig,
    spawn: SpawnFn,
    inputs: Sequence[Fe],
    *,
    collect_trace: bool = False,
    round_limit: int | None = None,
) -> tuple[list[Fe], CostReport]:
    """Execute a protocol to completion and meter its communication."""
    if len(inputs) != config.K:
        raise DimensionError(f"expected {config.K} inputs, got {len(inputs)}")
    for x in inputs:
        if x.field.q != config.field.q:
            raise ValueError(f"input from F_{x.field.q}, config field is F_{config.field.q}")
    limit = default_round_limit(config.K) if round_limit is None else round_limit

    procs = [spawn(k, x) for k, x in enumerate(inputs)]
    d_list: list[int] = []
    trace: list[Message] = []
    round_no = 0

    while True:
        round_no += 1
        if round_no > limit:
            raise NonTermination(f"no completion after {limit} rounds")
        outbound: list[Message] = []
        for k, proc in enumerate(procs):
            sends = proc.emit(round_no)
            if not sends:
                continue
            if len(sends) > config.p:
                raise PortOverflow(
                    f"{len(sends)} sends with p={config.p} ports", k, round_no
                )
            used_ports = set()
            for receiver, port, payload in sends:
                if not 1 <= port <= config.p:
                    raise PortOverflow(f"port {port} outside [1, {config.p}]", k, round_no)
                if port in used_ports:
                    raise PortReuse(f"port {port} used twice", k, round_no)
                used_ports.add(port)
                if receiver == k:
                    raise ValueError(
                        f"self-messages are local reads, not messages "
                        f"(processor {k}, round {round_no})"
                    )
                if not 0 <= receiver < config.K:
                    raise ValueError(f"receiver {receiver} out of range (round {round_no})")
                if not payload:
                    raise ValueError(f"empty payload (processor {k}, round {round_no})")
                for e in payload:
                    if e.field.q != config.field.q:
                        raise ValueError(
                            f"payload element from F_{e.field.q} in F_{config.field.q} system"
                        )
                outbound.append(Message(k, receiver, port, round_no, tuple(payload)))

        if not outbound:
            break

        inbound: dict[int, list[Message]] = {}
        for msg in outbound:
            inbound.setdefault(msg.receiver, []).append(msg)
        for receiver, msgs in inbound.items():
            if len(msgs) > config.p:
                raise PortOverflow(
                    f"{len(msgs)} receives with p={config.p} ports", receiver, round_no
                )
        d_list.append(max(len(m.payload) for m in outbound))
        if collect_trace:
            trace.extend(sorted(outbound, key=lambda m: (m.sender, m.port)))
        for k, proc in enumerate(procs):
            proc.absorb(round_no, sorted(inbound.get(k, []), key=lambda m: (m.sender, m.port)))

    outputs = [proc.output() for proc in procs]
    report = CostReport(
        c1=len(d_list),
        c2=sum(d_list),
        d=tuple(d_list),
        messages=tuple(trace) if collect_trace else None,
    )
    return outputs, report


def total_cost(report: CostReport, beta: Fraction, tau: Fraction) -> Fraction:
    """Total communication cost: rounds * beta + elements * tau."""
    return report.c1 * Fraction(beta) + report.c2 * Fraction(tau)


def dump_trace(report: CostReport) -> list[dict]:
    """Message trace as dicts in deterministic (round, sender, port) order."""
    if report.messages is None:
        raise NoTrace("run was executed without trace collection")
    out = []
    for m in sorted(report.messages, key=lambda m: (m.round_no, m.sender, m.port)):
        out.append(
            {
                "round": m.round_no,
                "from": m.sender,
                "to": m.receiver,
                "port": m.port,
                "len": len(m.payload),
                "payload": [e.value for e in m.payload],
            }
        )
    return out


def merge_reports(first: CostReport, second: CostReport) -> CostReport:
    """Concatenate two sequential runs into one report; rounds of the second
    stage are renumbered to follow the first."""
    messages = None
    if first.messages is not None and second.messages is not None:
        shifted = tuple(
            Message(m.sender, m.receiver, m.port, m.round_no + first.c1, m.payload)
            for m in second.messages
        )
        messages = first.messages + shifted
    return CostReport(
        c1=first.c1 + second.c1,
        c2=first.c2 + second.c2,
        d=first.d + second.d,
        messages=messages,
        violations=first.violations + second.violations,
    )
