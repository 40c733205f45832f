"""Deterministic node-addressed random streams.

Recursive Monte Carlo estimators consume randomness on a tree: every node of
the computation owns an independent stream, and a node is named by its path,
a finite sequence of signed integers.  Child nodes extend the path.  All
randomness is a pure function of ``(seed, path, counter)``, so any traversal
order, any partition of work across threads, and any re-run reproduce the
same draws bit for bit.

The generator is a keyed counter construction built from the splitmix64
finalizer.  The recipe is frozen; golden values in ``golden_rng.txt`` pin it.

    mix64(z):  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
               z ^= z >> 27;  z *= 0x94D049BB133111EB;
               z ^= z >> 31              (all mod 2**64)

    zigzag(v)        = 2v for v >= 0, else -2v - 1
    digest(seed, ()) = mix64(mix64((seed + 0x243F6A8885A308D3) mod 2**64))
    digest(seed, p + (v,)) = mix64(digest(seed, p) XOR
                                   mix64(zigzag(v) + depth * 0x9E3779B97F4A7C15))
        where depth = len(p) + 1, the 1-based position of v
    raw(seed, path, counter) = mix64(digest + (counter + 1) * 0x9E3779B97F4A7C15)

Each path element is absorbed together with its position, so a path and any
of its extensions, permutations, or reindexings produce different digests;
for a fixed digest the counter sequence is exactly a splitmix64 stream.

Floating-point derivation from the raw 64-bit word ``w``:

    uniform01 = (w >> 11) * 2**-53                       in [0, 1)
    gaussian  = ndtri(((w >> 11) + 0.5) * 2**-53)        one slot per scalar

The gaussian argument lies strictly inside (0, 1), so ``ndtri`` is finite.
Gaussian vectors of length d consume exactly d consecutive counter slots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

_MASK64 = (1 << 64) - 1
_PHI64 = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_SEED_PAD = 0x243F6A8885A308D3

_U53_SCALE = 2.0**-53

# numpy copies of the constants; uint64 array arithmetic wraps mod 2**64
_NP_PHI = np.uint64(_PHI64)
_NP_M1 = np.uint64(_MIX1)
_NP_M2 = np.uint64(_MIX2)


def mix64(z: int) -> int:
    """splitmix64 finalizer, a bijection on 64-bit words."""
    z &= _MASK64
    z ^= z >> 30
    z = (z * _MIX1) & _MASK64
    z ^= z >> 27
    z = (z * _MIX2) & _MASK64
    z ^= z >> 31
    return z


def zigzag(v: int) -> int:
    """Map signed to unsigned: 0,-1,1,-2,2,... -> 0,1,2,3,4,..."""
    return 2 * v if v >= 0 else -2 * v - 1


def _seed_digest(seed: int) -> int:
    return mix64(mix64((seed + _SEED_PAD) & _MASK64))


def _absorb(digest: int, depth: int, v: int) -> int:
    return mix64(digest ^ mix64((zigzag(v) + depth * _PHI64) & _MASK64))


def _raw(digest: int, counter: int) -> int:
    return mix64((digest + (counter + 1) * _PHI64) & _MASK64)


def path_digest(seed: int, path: tuple[int, ...]) -> int:
    d = _seed_digest(seed)
    for i, v in enumerate(path):
        d = _absorb(d, i + 1, v)
    return d


# vectorized kernels: same recipe over uint64 arrays


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    # wraparound mod 2**64 is the point; silence numpy's scalar overflow noise
    with np.errstate(over="ignore"):
        z = z ^ (z >> np.uint64(30))
        z = z * _NP_M1
        z = z ^ (z >> np.uint64(27))
        z = z * _NP_M2
        z = z ^ (z >> np.uint64(31))
    return z


def _zigzag_vec(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    return np.where(v >= 0, 2 * v, -2 * v - 1).astype(np.uint64)


def absorb_vec(digests: np.ndarray, depth: int, elems) -> np.ndarray:
    """Extend digests (any shape) by one path element at 1-based ``depth``.

    ``elems`` broadcasts against ``digests``; both scalars and arrays of
    per-lane indices are accepted.
    """
    with np.errstate(over="ignore"):
        z = _zigzag_vec(elems) + np.uint64((depth * _PHI64) & _MASK64)
    return _mix64_vec(digests ^ _mix64_vec(z))


def raw_vec(digests: np.ndarray, counters) -> np.ndarray:
    """Raw 64-bit words at the given counter slots (broadcasting)."""
    with np.errstate(over="ignore"):
        c = (np.asarray(counters, dtype=np.uint64) + np.uint64(1)) * _NP_PHI
        w = digests + c
    return _mix64_vec(w)


def uniforms_vec(digests: np.ndarray, counters) -> np.ndarray:
    return (raw_vec(digests, counters) >> np.uint64(11)).astype(np.float64) * _U53_SCALE


def gaussians_vec(digests: np.ndarray, counters) -> np.ndarray:
    w = (raw_vec(digests, counters) >> np.uint64(11)).astype(np.float64)
    return ndtri((w + 0.5) * _U53_SCALE)


@dataclass(frozen=True)
class NodeId:
    """Immutable address of one node in the computation tree."""

    path: tuple[int, ...] = ()

    def child(self, k: int, m: int) -> "NodeId":
        return NodeId(self.path + (k, m))

    def prepend(self, j: int) -> "NodeId":
        return NodeId((j,) + self.path)

    def encode(self) -> str:
        """Canonical text form: comma-joined signed ints, '-' if empty."""
        return ",".join(str(v) for v in self.path) if self.path else "-"

    @staticmethod
    def decode(text: str) -> "NodeId":
        text = text.strip()
        if text == "-":
            return NodeId(())
        return NodeId(tuple(int(tok) for tok in text.split(",")))

    def __str__(self) -> str:
        return self.encode()


@dataclass(frozen=True)
class StreamKey:
    """One addressed slot: ``(seed, node, counter)`` names a single draw."""

    seed: int
    node: NodeId
    counter: int = 0

    def digest(self) -> int:
        return path_digest(self.seed, self.node.path)


def child(node: NodeId, k: int, m: int) -> NodeId:
    """Child address: append the two indices ``(k, m)`` to the path."""
    return node.child(k, m)


def raw_word(key: StreamKey) -> int:
    return _raw(key.digest(), key.counter)


def uniform01(key: StreamKey) -> float:
    """Uniform draw in [0, 1) from the addressed slot."""
    return (raw_word(key) >> 11) * _U53_SCALE


def gaussian_vector(key: StreamKey, d: int) -> np.ndarray:
    """d iid standard gaussians, consuming slots counter..counter+d-1."""
    if d <= 0:
        raise ValueError(f"gaussian_vector needs d >= 1, got {d}")
    digest = np.uint64(key.digest())
    counters = np.arange(key.counter, key.counter + d, dtype=np.uint64)
    return gaussians_vec(digest, counters)


def sample_time_forward(node: NodeId, seed: int, t: float) -> float:
    """Uniform time on [0, t]: t * U with U from the node's slot 0."""
    if t < 0.0:
        raise ValueError(f"forward time sampling needs t >= 0, got {t}")
    return t * uniform01(StreamKey(seed, node, 0))


def sample_time_backward(node: NodeId, seed: int, t: float, horizon: float) -> float:
    """Uniform time on [t, T]: t + (T - t) * U with U from the node's slot 0."""
    if not 0.0 <= t <= horizon:
        raise ValueError(f"backward time sampling needs 0 <= t <= {horizon}, got {t}")
    return t + (horizon - t) * uniform01(StreamKey(seed, node, 0))


def brownian_point(
    node: NodeId,
    seed: int,
    x: np.ndarray,
    variance_scale: float,
    elapsed: float,
    first_slot: int = 0,
) -> np.ndarray:
    """x + sqrt(variance_scale * elapsed) * Z with Z from the node's slots.

    ``elapsed = 0`` returns ``x`` exactly (no smearing, but the slots are
    still the node's and the draw layout does not shift).
    """
    if elapsed < 0.0:
        raise ValueError(f"elapsed time must be >= 0, got {elapsed}")
    if variance_scale <= 0.0:
        raise ValueError(f"variance_scale must be > 0, got {variance_scale}")
    x = np.asarray(x, dtype=np.float64)
    if elapsed == 0.0:
        return x.copy()
    z = gaussian_vector(StreamKey(seed, node, first_slot), x.shape[-1])
    return x + np.sqrt(variance_scale * elapsed) * z


# golden values: the frozen recipe, pinned as text


def golden_lines(entries=None) -> list[str]:
    """Render '(seed, path, counter) -> raw word' lines for pinning."""
    if entries is None:
        entries = GOLDEN_ENTRIES
    out = []
    for seed, path, counter in entries:
        w = _raw(path_digest(seed, path), counter)
        out.append(f"{seed} {NodeId(path).encode()} {counter} {w:016x}")
    return out


GOLDEN_ENTRIES = [
    (0, (), 0),
    (0, (), 1),
    (1, (), 0),
    (0, (0,), 0),
    (0, (1,), 0),
    (0, (-1,), 0),
    (42, (0, -1), 3),
    (42, (0, 1), 3),
    (123456789, (2, 3, -4, 5), 7),
    (2**64 - 1, (1, -2, 3), 2),
]


def verify_golden(path_or_lines) -> list[str]:
    """Recompute every golden line; return mismatch descriptions (empty = ok)."""
    if isinstance(path_or_lines, (list, tuple)):
        lines = list(path_or_lines)
    else:
        with open(path_or_lines, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    problems = []
    seen = 0
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        seen += 1
        try:
            seed_s, path_s, counter_s, hex_s = line.split()
        except ValueError:
            problems.append(f"malformed golden line: {line!r}")
            continue
        seed = int(seed_s)
        node = NodeId.decode(path_s)
        counter = int(counter_s)
        got = _raw(path_digest(seed, node.path), counter)
        if f"{got:016x}" != hex_s:
            problems.append(
                f"golden mismatch at seed={seed} path={path_s} counter={counter}: "
                f"expected {hex_s}, got {got:016x}"
            )
    if seen == 0:
        problems.append("golden file contained no data lines")
    return problems
