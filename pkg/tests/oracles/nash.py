"""Straight-line well-supported Nash check and brute-force pure equilibria."""
from itertools import product


def row_value(A, i, y):
    return sum(A[i][k] * y[k] for k in range(len(y)))


def col_value(B, j, x):
    return sum(B[k][j] * x[k] for k in range(len(x)))


def well_supported(A, B, x, y, eps):
    n = len(x)
    for i, j in product(range(n), repeat=2):
        if row_value(A, i, y) - row_value(A, j, y) > eps and x[j] > 0:
            return False
        if col_value(B, i, x) - col_value(B, j, x) > eps and y[j] > 0:
            return False
    return True


def pure_equilibria(A, B):
    n = len(A)
    out = []
    for i, j in product(range(n), repeat=2):
        if all(A[i][j] >= A[k][j] for k in range(n)) and all(B[i][j] >= B[i][k] for k in range(n)):
            out.append((i, j))
    return out
