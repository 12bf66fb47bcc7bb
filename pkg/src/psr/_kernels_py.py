"""Vectorised numpy kernels; the fallback for the compiled ``_kernels`` module.

Every function here must return bit-identical results to its Cython twin.
The random stream is counter based: word ``i`` under ``key`` is the
splitmix64 finaliser applied to ``key + GOLDEN * (i + 1)``.

Uniform sampling spends one bit per free feature, packing 64 features into
each word (sample ``j`` uses words ``j*nw .. j*nw + nw - 1``). Product
sampling spends one word per free feature: feature ``q`` of sample ``j`` reads
word ``j*f + q`` and is 1 iff its top 53 bits fall below ``thresholds[q]``.
"""
import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1

_G = np.uint64(GOLDEN)
_M1 = np.uint64(MIX1)
_M2 = np.uint64(MIX2)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))

# samples handled per vectorised block; bounds the bit matrix to ~32 MiB
_BLOCK_CELLS = 1 << 22

BACKEND = "numpy"


def fmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def word(key: int, i: int) -> int:
    return fmix64(key + GOLDEN * (i + 1))


def _fmix_array(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _words(key, idx):
    with np.errstate(over="ignore"):
        return _fmix_array(np.uint64(key) + _G * (idx + np.uint64(1)))


def _weights(weights):
    # object arrays carry big-integer weights the compiled kernels cannot hold
    if getattr(weights, "dtype", None) == object:
        return weights
    return np.ascontiguousarray(weights, dtype=np.int64)


def _hits(bits, weights, need, target):
    if weights.dtype == object:
        bits = bits.astype(object)
    s = bits @ weights
    return int(np.count_nonzero((s >= need) == bool(target)))


def _block(f):
    return max(1, _BLOCK_CELLS // max(f, 1))


def count_uniform(weights, need, target, key, n):
    weights = _weights(weights)
    f = weights.shape[0]
    if f == 0:
        return n if (0 >= need) == bool(target) else 0
    nw = (f + 63) // 64
    q = np.arange(f)
    word_of = (q // 64).astype(np.uint64)
    shift = (q % 64).astype(np.uint64)
    hits = 0
    step = _block(f)
    for start in range(0, n, step):
        j = np.arange(start, min(n, start + step), dtype=np.uint64)
        idx = j[:, None] * np.uint64(nw) + word_of[None, :]
        bits = ((_words(key, idx) >> shift[None, :]) & np.uint64(1)).astype(np.int64)
        hits += _hits(bits, weights, need, target)
    return hits


def count_product(weights, need, target, thresholds, key, n):
    weights = _weights(weights)
    thresholds = np.ascontiguousarray(thresholds, dtype=np.uint64)
    f = weights.shape[0]
    if f == 0:
        return n if (0 >= need) == bool(target) else 0
    q = np.arange(f, dtype=np.uint64)
    hits = 0
    step = _block(f)
    for start in range(0, n, step):
        j = np.arange(start, min(n, start + step), dtype=np.uint64)
        idx = j[:, None] * np.uint64(f) + q[None, :]
        bits = ((_words(key, idx) >> _S11) < thresholds[None, :]).astype(np.int64)
        hits += _hits(bits, weights, need, target)
    return hits


def count_enumerate(weights, need, target):
    """Count the 2^f completions whose class equals ``target``."""
    weights = _weights(weights)
    f = weights.shape[0]
    total = 1 << f
    shift = np.arange(f, dtype=np.int64)
    hits = 0
    step = _block(f)
    for start in range(0, total, step):
        pat = np.arange(start, min(total, start + step), dtype=np.int64)
        bits = (pat[:, None] >> shift[None, :]) & 1
        hits += _hits(bits, weights, need, target)
    return hits
