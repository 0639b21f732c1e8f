"""Reference computations kept independent of the qri package.

Run as a script to regenerate the frozen constants used by the tests.
"""

import math

import mpmath
import numpy as np

mpmath.mp.dps = 40

# frozen output of dense_grid_max_q_plus(2048); analytic value is 1 - log2(3)/2
DENSE_MAX_Q_PLUS = 0.20751860805116706


def binary_entropy_mp(x) -> mpmath.mpf:
    x = mpmath.mpf(x)
    return -(x * mpmath.log(x, 2) + (1 - x) * mpmath.log(1 - x, 2))


def kl_bits_mp(p, q) -> mpmath.mpf:
    return mpmath.fsum(mpmath.mpf(a) * mpmath.log(mpmath.mpf(a) / mpmath.mpf(b), 2) for a, b in zip(p, q) if a)


def q_by_trace(rho: np.ndarray, a_cols: np.ndarray, b_cols: np.ndarray) -> float:
    """Q with p and p' evaluated literally through projectors and traces, base 2."""
    d = rho.shape[0]
    pa = [np.outer(a_cols[:, i], a_cols[:, i].conj()) for i in range(d)]
    pb = [np.outer(b_cols[:, j], b_cols[:, j].conj()) for j in range(d)]
    p = np.array([np.trace(pa[i] @ rho @ pa[i]).real for i in range(d)])
    # B first, then A: p'_{ji} = Tr[P_i^A (P_j^B rho P_j^B) P_i^A]
    pp = np.array([sum(np.trace(pa[i] @ pb[j] @ rho @ pb[j] @ pa[i]).real for j in range(d)) for i in range(d)])
    return float(sum(x * math.log2(x / y) for x, y in zip(p, pp) if x > 1e-300))


def joint_by_trace(rho, first_cols, second_cols) -> np.ndarray:
    d = rho.shape[0]
    p1 = [np.outer(first_cols[:, i], first_cols[:, i].conj()) for i in range(d)]
    p2 = [np.outer(second_cols[:, j], second_cols[:, j].conj()) for j in range(d)]
    return np.array([[np.trace(p2[j] @ p1[i] @ rho @ p1[i] @ p2[j]).real for j in range(d)] for i in range(d)])


def dense_grid_max_q_plus(n: int = 2048) -> float:
    """Max of Q over qubit bases B(beta, gamma) for |+>, A computational, base 2.

    Brute force over an n x n grid; beta on [0, pi], gamma on [0, 2pi).
    """
    beta = np.linspace(0.0, math.pi, n)[:, None]
    gamma = (np.arange(n) * (2 * math.pi / n))[None, :]
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    # <b0|+>|^2 with b0 = (c, e^{i gamma} s)
    w0 = np.abs(c + np.exp(-1j * gamma) * s) ** 2 / 2
    t = c**2  # |<0|b0>|^2
    q0 = w0 * t + (1 - w0) * (1 - t)
    q = -0.5 * np.log2(q0) - 0.5 * np.log2(1 - q0) - 1.0
    return float(q.max())


if __name__ == "__main__":
    print("1 - H2(0.75)       =", mpmath.nstr(1 - binary_entropy_mp(0.75), 20))
    print("H2(0.75)           =", mpmath.nstr(binary_entropy_mp(0.75), 20))
    print("KL((.75,.25)||.5)  =", mpmath.nstr(kl_bits_mp([0.75, 0.25], [0.5, 0.5]), 20))
    print("dense 2048^2 max Q =", repr(dense_grid_max_q_plus()))
    print("log2(3)            =", mpmath.nstr(mpmath.log(3, 2), 20))
