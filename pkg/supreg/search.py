"""
Searches for LT-superregular Toeplitz matrices over F_p.

All searches run over the normalised space a_1 = a_2 = 1 and extend one
entry at a time, keeping only a_k outside S_k. The exhaustive engine is a
depth-first search whose stack holds numpy batches of prefixes rather than
single prefixes: a batch is expanded with one vectorised forbidden-set
evaluation and its children are pushed back in chunks, in reverse, so the
traversal order is still lexicographic.

Parallel runs split the forest by a_3 (and a_4 when there are more workers
than a_3 branches). Subtrees are searched in worker processes and merged in
subtree order, so results do not depend on the worker count.
"""

import time
import logging
import multiprocessing
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DeadEnd, InvalidPrefix, VerificationFailed
from .forbidden import compiled_table, extension_candidates, forbidden_set, forbidden_values_batch
from .prime_field import FieldElement, PrimeField, is_prime
from .symbolic import n_gamma_closed_form
from .toeplitz import ToeplitzLT, is_superregular, is_superregular_incremental
from .utils import FileUtils

logger = logging.getLogger(__name__)

MODES = ('first', 'enumerate', 'count')
GENERATOR = 'numpy.PCG64'
SUPPORTED_GAMMA = 10

Prefix = Tuple[int, ...]


@dataclass
class SearchTask:
    """Parameters of one search run."""
    gamma: int
    p: int
    mode: str = 'count'
    prefix_policy: str = 'exhaustive'
    seed: int = 0
    trials: int = 1000
    tail_depth: int = 3
    workers: int = 1
    chunk_size: int = 4096
    node_budget: Optional[int] = None
    witness_limit: int = 1000
    checkpoint_path: Optional[str] = None
    checkpoint_every: int = 1_000_000

    def __post_init__(self):
        if self.mode not in MODES + ('min_forbidden',):
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.prefix_policy not in ('exhaustive', 'random'):
            raise ValueError(f"prefix_policy must be 'exhaustive' or 'random', got {self.prefix_policy!r}")
        if self.gamma < 3:
            raise ValueError("searches start at gamma = 3")
        if self.gamma > SUPPORTED_GAMMA:
            logger.warning(f"gamma={self.gamma} is beyond the supported range; the search may not finish")
        PrimeField(self.p)

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    def key(self) -> Dict:
        """Identity of the run as stored in checkpoint headers."""
        return {'gamma': self.gamma, 'p': self.p, 'mode': self.mode, 'node_budget': self.node_budget}


@dataclass
class SearchRecord:
    """Outcome of a search, with traversal statistics."""
    gamma: int
    p: int
    mode: str
    workers: int = 1
    count: int = 0
    matches: List[Prefix] = dc_field(default_factory=list)
    nodes_per_depth: Dict[int, int] = dc_field(default_factory=dict)
    pruned_per_depth: Dict[int, int] = dc_field(default_factory=dict)
    dead_prefixes: int = 0
    complete: bool = True
    subtrees: int = 1
    resumed_subtrees: int = 0
    elapsed: float = 0.0
    # min_forbidden
    min_size: Optional[int] = None
    argmin: List[Prefix] = dc_field(default_factory=list)
    argmin_count: int = 0
    # random
    trials: int = 0
    hits: int = 0
    seed: Optional[int] = None
    generator: Optional[str] = None

    @property
    def nodes_visited(self) -> int:
        return sum(self.nodes_per_depth.values())

    @property
    def total_count(self) -> int:
        """Count over the un-normalised space: (p - 1)^2 matrices per normalised one."""
        return self.count * (self.p - 1) ** 2

    @property
    def relative_frequency(self) -> float:
        return self.hits / self.trials if self.trials else 0.0

    def to_dict(self) -> Dict:
        payload = {
            'gamma': self.gamma,
            'p': self.p,
            'mode': self.mode,
            'workers': self.workers,
            'complete': self.complete,
            'nodes_visited': self.nodes_visited,
            'nodes_per_depth': {str(k): v for k, v in sorted(self.nodes_per_depth.items())},
            'pruned_per_depth': {str(k): v for k, v in sorted(self.pruned_per_depth.items())},
            'dead_prefixes': self.dead_prefixes,
            'subtrees': self.subtrees,
            'resumed_subtrees': self.resumed_subtrees,
            'elapsed_seconds': round(self.elapsed, 3),
        }
        if self.mode == 'min_forbidden':
            payload.update({
                'min_size': self.min_size,
                'argmin': [list(m) for m in self.argmin],
                'argmin_count': self.argmin_count,
            })
        else:
            payload.update({
                'count': self.count,
                'total_count': self.total_count,
                'matches': [list(m) for m in self.matches],
            })
        if self.generator is not None:
            payload.update({
                'trials': self.trials,
                'hits': self.hits,
                'relative_frequency': self.relative_frequency,
                'seed': self.seed,
                'generator': self.generator,
                'generator_version': np.__version__,
            })
        return payload


@dataclass
class SubtreeOutcome:
    """Result of searching below one root prefix; picklable for worker processes."""
    root: Prefix
    count: int = 0
    matches: List[Prefix] = dc_field(default_factory=list)
    nodes: Dict[int, int] = dc_field(default_factory=dict)
    pruned: Dict[int, int] = dc_field(default_factory=dict)
    dead: int = 0
    min_size: Optional[int] = None
    argmin: List[Prefix] = dc_field(default_factory=list)
    argmin_count: int = 0
    complete: bool = True

    def to_dict(self) -> Dict:
        return {
            'root': list(self.root), 'count': self.count,
            'matches': [list(m) for m in self.matches],
            'nodes': {str(k): v for k, v in self.nodes.items()},
            'pruned': {str(k): v for k, v in self.pruned.items()},
            'dead': self.dead, 'min_size': self.min_size,
            'argmin': [list(m) for m in self.argmin], 'argmin_count': self.argmin_count,
            'complete': self.complete,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'SubtreeOutcome':
        return cls(
            root=tuple(data['root']), count=data['count'],
            matches=[tuple(m) for m in data['matches']],
            nodes={int(k): v for k, v in data['nodes'].items()},
            pruned={int(k): v for k, v in data['pruned'].items()},
            dead=data['dead'], min_size=data['min_size'],
            argmin=[tuple(m) for m in data['argmin']], argmin_count=data['argmin_count'],
            complete=data['complete'],
        )


def _bump(counter: Dict[int, int], key: int, amount: int):
    counter[key] = counter.get(key, 0) + amount


def _as_tuple(row) -> Prefix:
    return tuple(int(x) for x in row)


def _update_min(out: SubtreeOutcome, batch: np.ndarray, sizes: np.ndarray, limit: int):
    smallest = int(sizes.min())
    if out.min_size is None or smallest < out.min_size:
        out.min_size, out.argmin, out.argmin_count = smallest, [], 0
    if smallest == out.min_size:
        hits = batch[sizes == smallest]
        out.argmin_count += len(hits)
        room = limit - len(out.argmin)
        if room > 0:
            out.argmin.extend(_as_tuple(row) for row in hits[:room])


def search_subtree(gamma: int, p: int, mode: str, root: Prefix, chunk_size: int = 4096,
                   budget: Optional[int] = None, limit: int = 1000,
                   progress_every: Optional[int] = None) -> SubtreeOutcome:
    """
    Batched DFS below `root` (a normalised, incrementally superregular prefix).

    `budget` bounds the number of prefixes expanded; when it runs out the
    outcome is marked incomplete. A progress line is logged every
    `progress_every` expanded prefixes.
    """
    out = SubtreeOutcome(root=tuple(root))
    stack = [np.array([root], dtype=np.int64)]
    expanded = 0
    next_report = progress_every

    while stack:
        batch = stack.pop()
        k = batch.shape[1]
        if budget is not None and expanded >= budget:
            out.complete = False
            break
        expanded += len(batch)
        _bump(out.nodes, k, len(batch))
        if next_report is not None and expanded >= next_report:
            logger.info(f"subtree {list(root)}: {expanded} prefixes expanded, count={out.count}")
            next_report += progress_every

        forbidden, dead = forbidden_values_batch(batch, k + 1, p)
        forbidden[dead] = True
        out.dead += int(dead.sum())
        _bump(out.pruned, k + 1, int(forbidden.sum()))
        last_level = k + 1 == gamma

        if last_level and mode == 'count':
            out.count += int((~forbidden).sum())
            continue
        if last_level and mode == 'min_forbidden':
            _update_min(out, batch, forbidden.sum(axis=1), limit)
            continue

        rows, values = np.nonzero(~forbidden)
        if not len(rows):
            continue
        children = np.concatenate([batch[rows], values[:, None]], axis=1)

        if last_level:
            if mode == 'first':
                out.count += 1
                out.matches.append(_as_tuple(children[0]))
                break
            out.count += len(children)
            out.matches.extend(_as_tuple(row) for row in children)
            continue

        for start in reversed(range(0, len(children), chunk_size)):
            stack.append(children[start:start + chunk_size])

    return out


def _subtree_job(args: Tuple) -> SubtreeOutcome:
    return search_subtree(*args)


def partition_roots(gamma: int, p: int, workers: int) -> List[Prefix]:
    """Subtree roots: (1, 1), or the admissible a_3 (and a_4) prefixes."""
    roots: List[Prefix] = [(1, 1)]
    if workers <= 1:
        return roots
    for depth in (3, 4):
        if depth > gamma - 2 or len(roots) >= workers:
            break
        batch = np.array(roots, dtype=np.int64)
        forbidden, dead = forbidden_values_batch(batch, depth, p)
        forbidden[dead] = True
        rows, values = np.nonzero(~forbidden)
        roots = [roots[r] + (int(v),) for r, v in zip(rows, values)]
    return roots


def _make_executor(workers: int) -> Executor:
    try:
        ctx = multiprocessing.get_context('fork')
        return ProcessPoolExecutor(max_workers=workers, mp_context=ctx)
    except (ValueError, OSError) as e:
        logger.warning(f"Process pool with fork unavailable ({e}); falling back to threads")
        return ThreadPoolExecutor(max_workers=workers)


def _load_checkpoint(task: SearchTask) -> Dict[Prefix, SubtreeOutcome]:
    path = task.checkpoint_path
    done: Dict[Prefix, SubtreeOutcome] = {}
    records = list(FileUtils.read_jsonl(path)) if path else []
    if not records:
        return done
    header = records[0]
    if header.get('kind') != 'header' or header.get('task') != task.key():
        logger.warning(f"Checkpoint {path} belongs to another run; starting over")
        open(path, 'w').close()
        return done
    for record in records[1:]:
        if record.get('kind') == 'subtree':
            outcome = SubtreeOutcome.from_dict(record['outcome'])
            done[outcome.root] = outcome
    logger.info(f"Resuming from {path}: {len(done)} subtrees already searched")
    return done


def _write_checkpoint(task: SearchTask, outcome: SubtreeOutcome, fresh: bool):
    if not task.checkpoint_path:
        return
    if fresh:
        FileUtils.append_jsonl({'kind': 'header', 'task': task.key()}, task.checkpoint_path)
    FileUtils.append_jsonl({'kind': 'subtree', 'outcome': outcome.to_dict()}, task.checkpoint_path)


def _merge(record: SearchRecord, outcomes: List[SubtreeOutcome], task: SearchTask):
    for out in outcomes:
        record.count += out.count
        for k, v in out.nodes.items():
            _bump(record.nodes_per_depth, k, v)
        for k, v in out.pruned.items():
            _bump(record.pruned_per_depth, k, v)
        record.dead_prefixes += out.dead
        record.complete &= out.complete
        if out.min_size is not None:
            if record.min_size is None or out.min_size < record.min_size:
                record.min_size, record.argmin, record.argmin_count = out.min_size, [], 0
            if out.min_size == record.min_size:
                record.argmin_count += out.argmin_count
                record.argmin.extend(out.argmin)
    record.argmin = sorted(record.argmin)[:task.witness_limit]

    matches = sorted(m for out in outcomes for m in out.matches)
    if task.mode == 'first':
        record.matches = matches[:1]
        record.count = len(record.matches)
    else:
        record.matches = matches


def exhaustive(task: SearchTask, on_match: Optional[Callable[[Prefix], None]] = None) -> SearchRecord:
    """
    Exhaustive normalised search.

    Modes: 'first' returns the lexicographically first matrix, 'enumerate'
    all of them, 'count' only their number; 'min_forbidden' records the
    smallest |S_gamma| over admissible prefixes of length gamma - 1.
    """
    start = time.time()
    for k in range(3, task.gamma + 1):
        compiled_table(k)

    roots = partition_roots(task.gamma, task.p, task.workers)
    done = _load_checkpoint(task)
    fresh = not done
    pending = [r for r in roots if r not in done]
    budget = None
    if task.node_budget is not None:
        budget = max(1, -(-task.node_budget // max(len(roots), 1)))

    logger.info(
        f"Exhaustive {task.mode} search gamma={task.gamma} p={task.p}: "
        f"{len(roots)} subtrees ({len(done)} from checkpoint), {task.workers} workers"
    )
    outcomes: Dict[Prefix, SubtreeOutcome] = dict(done)

    def finished(outcome: SubtreeOutcome):
        nonlocal fresh
        outcomes[outcome.root] = outcome
        _write_checkpoint(task, outcome, fresh)
        fresh = False
        if on_match:
            for m in outcome.matches:
                on_match(m)
        logger.debug(f"subtree {list(outcome.root)}: count={outcome.count} nodes={sum(outcome.nodes.values())}")

    args = [(task.gamma, task.p, task.mode, r, task.chunk_size, budget, task.witness_limit,
             task.checkpoint_every) for r in pending]
    if task.workers <= 1 or len(pending) <= 1:
        for job in args:
            outcome = _subtree_job(job)
            finished(outcome)
            if task.mode == 'first' and outcome.matches:
                break
    else:
        with _make_executor(task.workers) as executor:
            futures = [executor.submit(_subtree_job, job) for job in args]
            for n, future in enumerate(as_completed(futures), 1):
                finished(future.result())
                if n % max(1, len(futures) // 10) == 0:
                    logger.info(f"{n}/{len(futures)} subtrees searched")

    record = SearchRecord(
        gamma=task.gamma, p=task.p, mode=task.mode, workers=task.workers,
        subtrees=len(roots), resumed_subtrees=len(done),
    )
    _merge(record, [outcomes[r] for r in roots if r in outcomes], task)
    record.elapsed = time.time() - start
    logger.info(
        f"Search gamma={task.gamma} p={task.p} mode={task.mode} finished: "
        f"count={record.count} nodes={record.nodes_visited} complete={record.complete} "
        f"in {record.elapsed:.1f}s"
    )
    return record


def greedy_extend(prefix: Sequence[Union[int, FieldElement]], gamma_target: int,
                  policy: str = 'smallest', seed: Optional[int] = None,
                  field: Optional[PrimeField] = None) -> ToeplitzLT:
    """
    Extend a prefix one entry at a time without backtracking.

    Raises DeadEnd with the full forbidden set when some S_k covers F_p.
    """
    if field is None:
        field = next(e.field for e in prefix if isinstance(e, FieldElement))
    current = [field.element(e) for e in prefix]
    if current and not is_superregular_incremental(ToeplitzLT(field, tuple(current))).verdict:
        raise InvalidPrefix(f"prefix {[e.value for e in current]} is not LT-superregular over F_{field.p}")
    if gamma_target < len(current):
        raise InvalidPrefix(f"prefix already longer than gamma_target={gamma_target}")
    if policy not in ('smallest', 'random'):
        raise ValueError(f"policy must be 'smallest' or 'random', got {policy!r}")
    rng = np.random.default_rng(seed)

    for k in range(len(current) + 1, gamma_target + 1):
        fs = forbidden_set(current, k, field)
        options = [] if fs.dead else extension_candidates(fs)
        if not options:
            raise DeadEnd(k, [e.value for e in current], [v.value for v in fs.values],
                          detail={str(v): [str(m) for m in ms] for v, ms in fs.provenance.items()})
        choice = options[0] if policy == 'smallest' else options[int(rng.integers(len(options)))]
        logger.debug(f"greedy depth {k}: |S_{k}|={len(fs)} chose a_{k}={choice.value}")
        current.append(choice)
    return ToeplitzLT(field, tuple(current))


@dataclass
class MinFieldResult:
    gamma: int
    p_max: int
    p: Optional[int]
    matrix: Optional[Prefix] = None
    tried: List[int] = dc_field(default_factory=list)
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.p is not None

    def to_dict(self) -> Dict:
        return {
            'gamma': self.gamma, 'p_max': self.p_max, 'min_field': self.p,
            'found': self.found,
            'status': 'found' if self.found else f'not found below {self.p_max}',
            'matrix': list(self.matrix) if self.matrix else None,
            'tried': self.tried, 'elapsed_seconds': round(self.elapsed, 3),
        }


def min_field(gamma: int, p_max: int, workers: int = 1, chunk_size: int = 4096) -> MinFieldResult:
    """Smallest odd prime p <= p_max admitting an LT-superregular A_gamma."""
    start = time.time()
    result = MinFieldResult(gamma=gamma, p_max=p_max, p=None)
    for p in range(3, p_max + 1):
        if not is_prime(p):
            continue
        result.tried.append(p)
        record = exhaustive(SearchTask(gamma=gamma, p=p, mode='first', workers=workers, chunk_size=chunk_size))
        if record.matches:
            result.p, result.matrix = p, record.matches[0]
            break
        logger.info(f"min_field gamma={gamma}: no matrix over F_{p}")
    result.elapsed = time.time() - start
    return result


def min_forbidden(gamma: int, field: PrimeField, budget: Optional[int] = None, workers: int = 1,
                  witness_limit: int = 1000, checkpoint_path: Optional[str] = None,
                  chunk_size: int = 4096) -> SearchRecord:
    """Minimum |S_gamma| over normalised admissible prefixes, with argmin prefixes."""
    if gamma < 4:
        raise ValueError("min_forbidden needs gamma >= 4")
    task = SearchTask(
        gamma=gamma, p=field.p, mode='min_forbidden', workers=workers, node_budget=budget,
        witness_limit=witness_limit, checkpoint_path=checkpoint_path, chunk_size=chunk_size,
    )
    record = exhaustive(task)
    if not record.complete:
        logger.warning(f"min_forbidden gamma={gamma} p={field.p}: budget exhausted, minimum is partial")
    return record


def _random_head(gamma_head: int, p: int, rng: np.random.Generator) -> Optional[Prefix]:
    head: List[int] = [1, 1]
    while len(head) < gamma_head:
        forbidden, dead = forbidden_values_batch(np.array([head], dtype=np.int64), len(head) + 1, p)
        allowed = np.flatnonzero(~forbidden[0]) if not dead[0] else np.empty(0, dtype=np.int64)
        if not len(allowed):
            return None
        head.append(int(allowed[rng.integers(len(allowed))]))
    return tuple(head)


def _random_trials(gamma: int, p: int, tail: int, seed: int, indices: Sequence[int],
                   chunk_size: int) -> List[Tuple[int, Optional[Prefix], Dict[int, int]]]:
    results = []
    for i in indices:
        rng = np.random.default_rng([seed, i])
        head = _random_head(gamma - 1 - tail, p, rng)
        if head is None:
            results.append((i, None, {}))
            continue
        out = search_subtree(gamma, p, 'first', head, chunk_size)
        results.append((i, out.matches[0] if out.matches else None, out.nodes))
    return results


def random_prefix(task: SearchTask, on_match: Optional[Callable[[Prefix], None]] = None) -> SearchRecord:
    """
    Random heads of length gamma - 1 - tail_depth, each a_i drawn uniformly
    outside S_i, followed by an exhaustive search of the tail. A trial is a
    hit when the tail admits a completion; trial i uses the generator seeded
    with (seed, i), so the trial set depends only on (seed, trials). Every
    hit is re-checked with the full superregularity test before it is kept.
    """
    if not 0 <= task.tail_depth <= task.gamma - 3:
        raise ValueError(f"tail_depth must lie in [0, {task.gamma - 3}]")
    start = time.time()
    for k in range(3, task.gamma + 1):
        compiled_table(k)

    indices = list(range(task.trials))
    if task.workers <= 1:
        batches = [indices]
    else:
        size = -(-len(indices) // task.workers)
        batches = [indices[s:s + size] for s in range(0, len(indices), size)]

    outcomes = []
    args = [(task.gamma, task.p, task.tail_depth, task.seed, b, task.chunk_size) for b in batches if b]
    if len(args) <= 1:
        outcomes = [r for a in args for r in _random_trials(*a)]
    else:
        with _make_executor(task.workers) as executor:
            for part in executor.map(_random_trials_job, args):
                outcomes.extend(part)
    outcomes.sort(key=lambda r: r[0])

    record = SearchRecord(
        gamma=task.gamma, p=task.p, mode='first', workers=task.workers,
        trials=task.trials, seed=task.seed, generator=GENERATOR, subtrees=len(args),
    )
    field = task.field
    for i, match, nodes in outcomes:
        for k, v in nodes.items():
            _bump(record.nodes_per_depth, k, v)
        if match is None:
            continue
        m = ToeplitzLT(field, tuple(field.element(v) for v in match))
        if not is_superregular(m).verdict:
            raise VerificationFailed(f"trial {i} produced a non-superregular matrix {list(match)}")
        record.hits += 1
        if len(record.matches) < task.witness_limit:
            record.matches.append(match)
            if on_match:
                on_match(match)
    record.count = record.hits
    record.elapsed = time.time() - start
    logger.info(
        f"Random search gamma={task.gamma} p={task.p}: {record.hits}/{record.trials} hits "
        f"({100 * record.relative_frequency:.3f}%) in {record.elapsed:.1f}s"
    )
    return record


def _random_trials_job(args: Tuple):
    return _random_trials(*args)


@dataclass
class ConjectureReport:
    gamma: int
    p: int
    min_size: Optional[int]
    bound: int
    complete: bool

    @property
    def satisfied(self) -> Optional[bool]:
        if self.min_size is None:
            return None
        return self.min_size <= self.bound

    def to_dict(self) -> Dict:
        return {
            'gamma': self.gamma, 'p': self.p, 'min_size': self.min_size,
            'bound': self.bound, 'satisfied': self.satisfied, 'complete': self.complete,
        }


def conjecture_scan(gamma: int, field: PrimeField, budget: Optional[int] = None,
                    workers: int = 1) -> ConjectureReport:
    """Compare min |S_gamma| with floor(N_gamma / 2) + 2. Data only."""
    record = min_forbidden(gamma, field, budget=budget, workers=workers, witness_limit=1)
    return ConjectureReport(
        gamma=gamma, p=field.p, min_size=record.min_size,
        bound=n_gamma_closed_form(gamma) // 2 + 2, complete=record.complete,
    )
