# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: the (k, l)-pebble game and batched arc crossing.

Both functions mirror ``_pebble_py`` / ``_sphere_py`` step for step so the
two backends return identical answers.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, sqrt, M_PI
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI


def pebble_game(int n, edges, int k=2, int l=3):
    cdef Py_ssize_t m = len(edges)
    cdef int *peb = <int *> malloc(n * sizeof(int))
    cdef int *outdeg = <int *> malloc(n * sizeof(int))
    cdef int *out = <int *> malloc(n * k * sizeof(int) + 1)
    cdef int *parent = <int *> malloc(n * sizeof(int))
    cdef int *stack = <int *> malloc((n + 1) * sizeof(int))
    cdef int i, u, v, need = l + 1, tail, head, found
    result = []
    try:
        for i in range(n):
            peb[i] = k
            outdeg[i] = 0
        for u, v in edges:
            if u == v:
                result.append(False)
                continue
            while peb[u] + peb[v] < need:
                found = 0
                if peb[u] < k:
                    found = _gather(u, v, n, k, peb, outdeg, out, parent, stack)
                if not found and peb[v] < k:
                    found = _gather(v, u, n, k, peb, outdeg, out, parent, stack)
                if not found:
                    break
            if peb[u] + peb[v] >= need:
                tail = u if peb[u] > 0 else v
                head = v if tail == u else u
                peb[tail] -= 1
                out[tail * k + outdeg[tail]] = head
                outdeg[tail] += 1
                result.append(True)
            else:
                result.append(False)
    finally:
        free(peb)
        free(outdeg)
        free(out)
        free(parent)
        free(stack)
    return result


cdef int _remove_out(int x, int y, int k, int *outdeg, int *out):
    cdef int i, j
    for i in range(outdeg[x]):
        if out[x * k + i] == y:
            for j in range(i, outdeg[x] - 1):
                out[x * k + j] = out[x * k + j + 1]
            outdeg[x] -= 1
            return 1
    return 0


cdef int _gather(int start, int keep, int n, int k, int *peb, int *outdeg,
                 int *out, int *parent, int *stack):
    # parent: -2 unvisited, -1 root/blocked, else predecessor
    cdef int i, top = 0, x, y, child, par
    for i in range(n):
        parent[i] = -2
    parent[start] = -1
    parent[keep] = -1
    stack[top] = start
    top += 1
    while top > 0:
        top -= 1
        x = stack[top]
        for i in range(outdeg[x]):
            y = out[x * k + i]
            if parent[y] != -2:
                continue
            parent[y] = x
            if peb[y] > 0:
                peb[y] -= 1
                peb[start] += 1
                child = y
                while parent[child] != -1:
                    par = parent[child]
                    _remove_out(par, child, k, outdeg, out)
                    out[child * k + outdeg[child]] = par
                    outdeg[child] += 1
                    child = par
                return 1
            stack[top] = y
            top += 1
    return 0


cdef inline double _dot(double *a, double *b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


cdef inline void _cross(double *a, double *b, double *r):
    r[0] = a[1] * b[2] - a[2] * b[1]
    r[1] = a[2] * b[0] - a[0] * b[2]
    r[2] = a[0] * b[1] - a[1] * b[0]


cdef inline double _norm(double *a):
    return sqrt(_dot(a, a))


cdef inline double _angdist(double *p, double *q):
    cdef double c[3]
    _cross(p, q, c)
    return atan2(_norm(c), _dot(p, q))


cdef int _tangent(double *at, double *toward, int major, double eps, double *t):
    cdef double d = _dot(at, toward)
    cdef double nn
    t[0] = toward[0] - at[0] * d
    t[1] = toward[1] - at[1] * d
    t[2] = toward[2] - at[2] * d
    nn = _norm(t)
    if nn < 1e-9:
        return 0
    t[0] = t[0] * (1.0 / nn)
    t[1] = t[1] * (1.0 / nn)
    t[2] = t[2] * (1.0 / nn)
    if major:
        t[0] = t[0] * -1.0
        t[1] = t[1] * -1.0
        t[2] = t[2] * -1.0
    return 1


cdef inline double _length(double *p, double *q, int major):
    cdef double d = _angdist(p, q)
    return TWO_PI - d if major else d


cdef inline double _param(double *p, double *t, double *s):
    cdef double a = atan2(_dot(s, t), _dot(s, p))
    return a + TWO_PI if a < 0.0 else a


cdef inline int _interior(double *p, double *t, double L, double *s, double eps):
    cdef double th = _param(p, t, s)
    return eps < th and th < L - eps


cdef int _touches(double *p, double *q, double *t, double L, double *e, double eps):
    cdef double n[3]
    _cross(p, q, n)
    if fabs_(_dot(e, n)) / _norm(n) < eps and _interior(p, t, L, e, eps) \
            and _angdist(e, p) > eps and _angdist(e, q) > eps:
        return 1
    return 0


cdef inline double fabs_(double x):
    return -x if x < 0.0 else x


cdef int _arcs_cross(double *ap, double *aq, int am, double *bp, double *bq, int bm,
                     double eps):
    """1 cross, 0 no cross, -2 degenerate."""
    cdef double ta[3]
    cdef double tb[3]
    cdef double na[3]
    cdef double nb[3]
    cdef double x[3]
    cdef double y[3]
    cdef double La, Lb, nx, d
    d = _angdist(ap, aq)
    if d <= 1e-9 or d >= M_PI - 1e-9:
        return -2
    d = _angdist(bp, bq)
    if d <= 1e-9 or d >= M_PI - 1e-9:
        return -2
    if not _tangent(ap, aq, am, eps, ta) or not _tangent(bp, bq, bm, eps, tb):
        return -2
    La = _length(ap, aq, am)
    Lb = _length(bp, bq, bm)
    if _touches(ap, aq, ta, La, bp, eps) or _touches(ap, aq, ta, La, bq, eps):
        return -2
    if _touches(bp, bq, tb, Lb, ap, eps) or _touches(bp, bq, tb, Lb, aq, eps):
        return -2
    _cross(ap, aq, na)
    _cross(bp, bq, nb)
    _cross(na, nb, x)
    nx = _norm(x)
    if nx < eps * _norm(na) * _norm(nb):
        if _same_pair(ap, aq, bp, bq):
            return 1 if am == bm else 0
        return 0
    x[0] = x[0] * (1.0 / nx)
    x[1] = x[1] * (1.0 / nx)
    x[2] = x[2] * (1.0 / nx)
    if _interior(ap, ta, La, x, eps) and _interior(bp, tb, Lb, x, eps):
        return 1
    y[0] = x[0] * -1.0
    y[1] = x[1] * -1.0
    y[2] = x[2] * -1.0
    if _interior(ap, ta, La, y, eps) and _interior(bp, tb, Lb, y, eps):
        return 1
    return 0


cdef inline int _eq3(double *a, double *b):
    return a[0] == b[0] and a[1] == b[1] and a[2] == b[2]


cdef int _same_pair(double *ap, double *aq, double *bp, double *bq):
    return (_eq3(ap, bp) and _eq3(aq, bq)) or (_eq3(ap, bq) and _eq3(aq, bp))


def first_crossing(starts, ends, majors, p, q, major, double eps):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] S = np.ascontiguousarray(starts, dtype=np.float64).reshape(-1, 3)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] E = np.ascontiguousarray(ends, dtype=np.float64).reshape(-1, 3)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] M = np.ascontiguousarray(majors, dtype=np.uint8).reshape(-1)
    cdef double qp[3]
    cdef double qq[3]
    cdef double sp[3]
    cdef double sq[3]
    cdef int qm = 1 if major else 0
    cdef Py_ssize_t i, m = S.shape[0]
    cdef int r, j
    for j in range(3):
        qp[j] = p[j]
        qq[j] = q[j]
    for i in range(m):
        for j in range(3):
            sp[j] = S[i, j]
            sq[j] = E[i, j]
        r = _arcs_cross(qp, qq, qm, sp, sq, M[i], eps)
        if r == -2:
            return -2
        if r == 1:
            return i
    return -1
