"""Slow, obviously-correct reference computations used only by the tests."""
from fractions import Fraction
from itertools import product
from math import comb


def naive_prob(model, y, x, dist=None):
    """Enumerate completions with exact weights; no shortcuts, no kernels."""
    d = len(x)
    params = dist.params if dist is not None else (Fraction(1, 2),) * d
    cls_x = int(sum(w * b for w, b in zip(model.weights, x)) >= model.threshold)
    free = [i for i in range(d) if y[i] is None]
    agree = total = Fraction(0)
    for bits in product((0, 1), repeat=len(free)):
        z = list(y.cells)
        for i, b in zip(free, bits):
            z[i] = b
        mass = Fraction(1)
        for i, b in zip(free, bits):
            mass *= params[i] if b else 1 - params[i]
        total += mass
        if int(sum(w * b for w, b in zip(model.weights, z)) >= model.threshold) == cls_x:
            agree += mass
    return agree / total


def naive_tail(n, k):
    return Fraction(sum(comb(n, j) for j in range(n + 1) if j >= k), 2**n)
