# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling and enumeration kernels.

Bit-identical twins of the functions in ``_kernels_py``; see that module for
the layout of the random stream.
"""
import numpy as np

from libc.stdint cimport int64_t, uint64_t

BACKEND = "cython"

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL


cdef inline uint64_t fmix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline uint64_t word_at(uint64_t key, uint64_t i) noexcept nogil:
    return fmix(key + GOLDEN * (i + 1))


def count_uniform(weights, long long need, int target, key, long long n):
    cdef int64_t[::1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef Py_ssize_t f = w.shape[0]
    cdef uint64_t k = <uint64_t>(int(key))
    cdef uint64_t nw = (f + 63) // 64
    cdef long long j, hits = 0
    cdef Py_ssize_t q
    cdef uint64_t bits
    cdef int64_t s
    cdef bint tgt = target != 0
    with nogil:
        for j in range(n):
            s = 0
            bits = 0
            for q in range(f):
                if q % 64 == 0:
                    bits = word_at(k, <uint64_t>j * nw + <uint64_t>(q // 64))
                s += w[q] & -(<int64_t>(bits & 1))
                bits >>= 1
            if (s >= need) == tgt:
                hits += 1
    return hits


def count_product(weights, long long need, int target, thresholds, key, long long n):
    cdef int64_t[::1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef uint64_t[::1] thr = np.ascontiguousarray(thresholds, dtype=np.uint64)
    cdef Py_ssize_t f = w.shape[0]
    cdef uint64_t k = <uint64_t>(int(key))
    cdef long long j, hits = 0
    cdef Py_ssize_t q
    cdef int64_t s
    cdef bint tgt = target != 0
    with nogil:
        for j in range(n):
            s = 0
            for q in range(f):
                if (word_at(k, <uint64_t>j * <uint64_t>f + <uint64_t>q) >> 11) < thr[q]:
                    s += w[q]
            if (s >= need) == tgt:
                hits += 1
    return hits


def count_enumerate(weights, long long need, int target):
    """Count the 2^f completions whose class equals ``target`` (Gray-code walk)."""
    cdef int64_t[::1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef Py_ssize_t f = w.shape[0]
    cdef unsigned long long total = 1ULL << f
    cdef unsigned long long i, gray = 0
    cdef long long hits = 0
    cdef int64_t s = 0
    cdef int b
    cdef bint tgt = target != 0
    with nogil:
        if (s >= need) == tgt:
            hits += 1
        for i in range(1, total):
            b = __builtin_ctzll(i)
            gray ^= 1ULL << b
            if (gray >> b) & 1:
                s += w[b]
            else:
                s -= w[b]
            if (s >= need) == tgt:
                hits += 1
    return hits

