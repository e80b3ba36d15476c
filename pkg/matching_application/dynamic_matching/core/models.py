"""
Data models for the dynamic matching engine
Configuration, update operations and per-update procedure traces
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from .errors import GraphUpdateError, InvalidConfigError

VertexId = int
Edge = Tuple[int, int]

LEVEL_0 = 0
LEVEL_1 = 1

# Epoch classes for level 1 matched edges
RANDOM = 'random'
DETERMINISTIC = 'deterministic'


def normalize_edge(u: VertexId, v: VertexId) -> Edge:
    """Edge key with the smaller endpoint first"""
    return (u, v) if u < v else (v, u)


def default_threshold(n: int) -> int:
    """ceil(sqrt(n)) computed in integers"""
    if n <= 0:
        raise InvalidConfigError(f"vertex count must be positive, got {n}")
    return math.isqrt(n - 1) + 1


@dataclass
class MatchingConfig:
    """Engine configuration: vertex count, degree/ownership threshold and PRNG seed"""

    n: int
    threshold: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidConfigError(f"vertex count must be a positive integer, got {self.n!r}")
        if self.threshold is None:
            self.threshold = default_threshold(self.n)
        elif not isinstance(self.threshold, int) or self.threshold < 1:
            raise InvalidConfigError(f"threshold must be a positive integer, got {self.threshold!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'threshold': self.threshold, 'seed': self.seed}


class UpdateKind(Enum):
    INSERT = '+'
    DELETE = '-'


@dataclass(frozen=True)
class UpdateOp:
    """One edge insertion or deletion"""

    kind: UpdateKind
    u: VertexId
    v: VertexId

    def __post_init__(self):
        if self.u == self.v:
            raise GraphUpdateError(f"self-loop on vertex {self.u}")

    @classmethod
    def insert(cls, u: VertexId, v: VertexId) -> 'UpdateOp':
        return cls(UpdateKind.INSERT, u, v)

    @classmethod
    def delete(cls, u: VertexId, v: VertexId) -> 'UpdateOp':
        return cls(UpdateKind.DELETE, u, v)

    @property
    def edge(self) -> Edge:
        return normalize_edge(self.u, self.v)

    @property
    def is_insert(self) -> bool:
        return self.kind is UpdateKind.INSERT

    def to_line(self) -> str:
        return f"{self.kind.value} {self.u} {self.v}"

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'u': self.u, 'v': self.v}


@dataclass
class TraceEntry:
    """One procedure call recorded during an update"""

    procedure: str
    args: Tuple[Any, ...]
    work: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {'procedure': self.procedure, 'args': list(self.args), 'work': self.work}


@dataclass
class ProcedureTrace:
    """Ordered procedure calls made while processing one update"""

    update_index: int
    op: Optional[UpdateOp] = None
    entries: List[TraceEntry] = field(default_factory=list)
    random_settles: int = 0

    @property
    def call_count(self) -> int:
        return len(self.entries)

    def procedures(self) -> List[str]:
        return [entry.procedure for entry in self.entries]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'update_index': self.update_index,
            'op': self.op.to_dict() if self.op else None,
            'call_count': self.call_count,
            'random_settles': self.random_settles,
            'entries': [entry.to_dict() for entry in self.entries],
        }
