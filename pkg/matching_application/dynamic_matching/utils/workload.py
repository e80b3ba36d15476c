"""
Update-sequence generators and the sequence file format

File format (UTF-8):
    n=<int>
    # seed=<int> gen=<name>      optional metadata comment
    + <u> <v>                     insert
    - <u> <v>                     delete
"""

import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Set, Union

from ..core.errors import GraphUpdateError, WorkloadError
from ..core.models import Edge, UpdateKind, UpdateOp, normalize_edge
from ..core.state import IndexableSet

logger = logging.getLogger(__name__)

PATTERNS = ('star-churn', 'clique-build-teardown', 'path-zipper')


@dataclass
class UpdateSequence:
    """A replayable list of edge updates on vertices [0, n)"""

    n: int
    ops: List[UpdateOp] = field(default_factory=list)
    generator: str = 'manual'
    seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[UpdateOp]:
        return iter(self.ops)

    def validate(self) -> Set[Edge]:
        """Replay against a shadow edge set; returns the final edge set"""
        return _replay_shadow(self.n, self.ops)

    def final_edges(self) -> Set[Edge]:
        return self.validate()

    def counts(self) -> dict:
        inserts = sum(1 for op in self.ops if op.is_insert)
        return {'updates': len(self.ops), 'inserts': inserts, 'deletes': len(self.ops) - inserts}

    def to_dict(self) -> dict:
        return {'n': self.n, 'generator': self.generator, 'seed': self.seed, **self.counts()}


def _check_op(n: int, edges: Set[Edge], op: UpdateOp, line_number: Optional[int] = None):
    for vertex in (op.u, op.v):
        if not 0 <= vertex < n:
            raise WorkloadError(f"vertex {vertex} out of range [0, {n})", line_number)
    edge = op.edge
    if op.is_insert and edge in edges:
        raise WorkloadError(f"insert of present edge {edge}", line_number)
    if not op.is_insert and edge not in edges:
        raise WorkloadError(f"delete of absent edge {edge}", line_number)


def _replay_shadow(n: int, ops: List[UpdateOp]) -> Set[Edge]:
    edges: Set[Edge] = set()
    for i, op in enumerate(ops):
        try:
            _check_op(n, edges, op)
        except WorkloadError as e:
            raise WorkloadError(f"op {i}: {e}") from e
        if op.is_insert:
            edges.add(op.edge)
        else:
            edges.discard(op.edge)
    return edges


def gen_random(n: int, t: int, p_insert: float = 0.6, seed: int = 0) -> UpdateSequence:
    """
    t uniformly random updates. Inserts pick an absent pair, deletes a present
    edge; a complete graph forces a delete and an empty one an insert.
    """
    if t < 0:
        raise WorkloadError(f"update count must be non-negative, got {t}")
    if not 0.0 <= p_insert <= 1.0:
        raise WorkloadError(f"p_insert must lie in [0, 1], got {p_insert}")
    if n < 1:
        raise WorkloadError(f"vertex count must be positive, got {n}")
    if n < 2 and t > 0:
        raise WorkloadError("at least two vertices are needed to generate updates")

    rng = random.Random(seed)
    max_edges = n * (n - 1) // 2
    present: IndexableSet[Edge] = IndexableSet()
    ops: List[UpdateOp] = []

    for _ in range(t):
        edge_count = len(present)
        insert = rng.random() < p_insert
        if edge_count == max_edges:
            insert = False
        elif edge_count == 0:
            insert = True

        if insert:
            edge = _random_absent_pair(n, present, max_edges, rng)
            present.add(edge)
            ops.append(UpdateOp.insert(*edge))
        else:
            edge = present.sample(rng)
            present.discard(edge)
            ops.append(UpdateOp.delete(*edge))

    seq = UpdateSequence(n=n, ops=ops, generator='random', seed=seed)
    seq.validate()
    logger.info(f"✅ Generated {t} random updates on n={n} (p_insert={p_insert}, seed={seed})")
    return seq


def _random_absent_pair(n: int, present: IndexableSet, max_edges: int, rng: random.Random) -> Edge:
    if 2 * len(present) <= max_edges:
        while True:
            u = rng.randrange(n)
            v = rng.randrange(n - 1)
            if v >= u:
                v += 1
            edge = normalize_edge(u, v)
            if edge not in present:
                return edge
    absent = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
    return absent[rng.randrange(len(absent))]


def gen_named(pattern: str, n: int, seed: int = 0, rounds: Optional[int] = None) -> UpdateSequence:
    """Structured stress patterns; rounds defaults to 2n for the churn patterns"""
    builders = {
        'star-churn': _star_churn,
        'clique-build-teardown': _clique_build_teardown,
        'path-zipper': _path_zipper,
    }
    if pattern not in builders:
        raise WorkloadError(f"unknown pattern {pattern!r}; expected one of {', '.join(PATTERNS)}")
    if rounds is None:
        rounds = 2 * n
    if rounds < 0:
        raise WorkloadError(f"rounds must be non-negative, got {rounds}")
    rng = random.Random(seed)
    ops = builders[pattern](n, rounds, rng)
    seq = UpdateSequence(n=n, ops=ops, generator=pattern, seed=seed)
    seq.validate()
    logger.info(f"✅ Generated {pattern} with {len(ops)} updates on n={n} (seed={seed})")
    return seq


def _star_churn(n: int, rounds: int, rng: random.Random) -> List[UpdateOp]:
    """
    Hub 0 is matched first through an edge its leaf owns, then collects
    spokes that the leaves own, so its degree crosses the threshold while
    it is matched at level 0. Spokes are then deleted and reinserted, with
    random leaf-leaf edges toggled in between.
    """
    if n < 3:
        raise WorkloadError(f"star-churn needs n >= 3, got {n}")
    ops = [UpdateOp.insert(leaf, 0) for leaf in range(1, n)]
    leaf_edges: Set[Edge] = set()
    for _ in range(rounds):
        leaf = rng.randrange(1, n)
        ops.append(UpdateOp.delete(leaf, 0))
        if n >= 4 and rng.random() < 0.5:
            a, b = rng.sample(range(1, n), 2)
            edge = normalize_edge(a, b)
            if edge in leaf_edges:
                leaf_edges.discard(edge)
                ops.append(UpdateOp.delete(*edge))
            else:
                leaf_edges.add(edge)
                ops.append(UpdateOp.insert(*edge))
        ops.append(UpdateOp.insert(leaf, 0))
    return ops


def _clique_build_teardown(n: int, rounds: int, rng: random.Random) -> List[UpdateOp]:
    if n < 2:
        raise WorkloadError(f"clique-build-teardown needs n >= 2, got {n}")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return [UpdateOp.insert(u, v) for u, v in pairs] + [UpdateOp.delete(u, v) for u, v in pairs]


def _path_zipper(n: int, rounds: int, rng: random.Random) -> List[UpdateOp]:
    """
    Blocks of four vertices b..b+3 form a path whose middle edge arrives
    first, so the last insert of each block closes a length-3 augmenting
    path. Churn rounds delete both outer edges of a block and reinsert them
    in the order that recreates the path.
    """
    if n < 4:
        raise WorkloadError(f"path-zipper needs n >= 4, got {n}")
    blocks = list(range(0, n - 3, 4))
    ops: List[UpdateOp] = []
    for b in blocks:
        ops.append(UpdateOp.insert(b + 1, b + 2))
        ops.append(UpdateOp.insert(b, b + 1))
        ops.append(UpdateOp.insert(b + 2, b + 3))
        if b + 7 < n:
            ops.append(UpdateOp.insert(b + 3, b + 4))
    for _ in range(rounds):
        b = blocks[rng.randrange(len(blocks))]
        ops.append(UpdateOp.delete(b, b + 1))
        ops.append(UpdateOp.delete(b + 2, b + 3))
        ops.append(UpdateOp.insert(b + 2, b + 3))
        ops.append(UpdateOp.insert(b, b + 1))
    return ops


def extend_with_teardown(seq: UpdateSequence) -> UpdateSequence:
    """Append deletes of every edge left at the end, in ascending order"""
    remaining = sorted(seq.validate())
    if not remaining:
        return seq
    ops = list(seq.ops) + [UpdateOp.delete(u, v) for u, v in remaining]
    logger.debug(f"Teardown appends {len(remaining)} deletes")
    return UpdateSequence(n=seq.n, ops=ops, generator=f"{seq.generator}+teardown", seed=seq.seed)


def serialize(seq: UpdateSequence) -> str:
    lines = [f"n={seq.n}"]
    meta = []
    if seq.seed is not None:
        meta.append(f"seed={seq.seed}")
    if seq.generator != 'manual':
        meta.append(f"gen={seq.generator}")
    if meta:
        lines.append('# ' + ' '.join(meta))
    lines.extend(op.to_line() for op in seq.ops)
    return '\n'.join(lines) + '\n'


def parse(text: str) -> UpdateSequence:
    """Parse a sequence file, validating replayability line by line"""
    n: Optional[int] = None
    generator = 'manual'
    seed: Optional[int] = None
    ops: List[UpdateOp] = []
    edges: Set[Edge] = set()

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            for token in line[1:].split():
                key, sep, value = token.partition('=')
                if not sep:
                    continue
                if key == 'seed':
                    try:
                        seed = int(value)
                    except ValueError:
                        raise WorkloadError(f"bad seed {value!r}", line_number)
                elif key == 'gen':
                    generator = value
            continue
        if n is None:
            if not line.startswith('n='):
                raise WorkloadError("first line must be n=<int>", line_number)
            try:
                n = int(line[2:])
            except ValueError:
                raise WorkloadError(f"bad vertex count {line[2:]!r}", line_number)
            if n < 1:
                raise WorkloadError(f"vertex count must be positive, got {n}", line_number)
            continue

        parts = line.split()
        if len(parts) != 3 or parts[0] not in ('+', '-'):
            raise WorkloadError(f"malformed update {line!r}", line_number)
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise WorkloadError(f"malformed vertex ids in {line!r}", line_number)
        try:
            op = UpdateOp(UpdateKind(parts[0]), u, v)
        except GraphUpdateError as e:
            raise WorkloadError(str(e), line_number)
        _check_op(n, edges, op, line_number)
        if op.is_insert:
            edges.add(op.edge)
        else:
            edges.discard(op.edge)
        ops.append(op)

    if n is None:
        raise WorkloadError("missing n=<int> header")
    return UpdateSequence(n=n, ops=ops, generator=generator, seed=seed)


def load(path: Union[str, Path]) -> UpdateSequence:
    seq = parse(Path(path).read_text(encoding='utf-8'))
    logger.info(f"📄 Loaded {len(seq)} updates on n={seq.n} from {path}")
    return seq


def save(seq: UpdateSequence, path: Union[str, Path]):
    Path(path).write_text(serialize(seq), encoding='utf-8')
    logger.info(f"💾 Saved {len(seq)} updates to {path}")
