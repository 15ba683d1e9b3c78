"""Pure-Python float kernels; reference twins of ``_kernels_c.pyx``.

Both versions evaluate the same floating-point expressions in the same order,
so they return bit-identical results.

``split_float`` returns ``(code, s1, s3, payload)``:

* ``SPLIT_OK``: payload is the leftover tuple;
* ``SPLIT_SINGULAR``: payload is None;
* ``SPLIT_NEGATIVE``: payload is ``(which, value)`` with ``which`` one of
  ``"s1"``, ``"s3"`` or a leftover coordinate ``x``.
"""

SPLIT_OK = 0
SPLIT_SINGULAR = 1
SPLIT_NEGATIVE = 2


def split_float(mid, v1, v3, j, k, tol):
    n = len(mid)
    a, b, c, d = v1[j], v3[j], v1[k], v3[k]
    det = a * d - b * c
    if det == 0.0 or abs(det) <= 1e-14 * (abs(a * d) + abs(b * c)):
        return SPLIT_SINGULAR, 0.0, 0.0, None
    mj, mk = mid[j], mid[k]
    s1 = (mj * d - b * mk) / det
    s3 = (a * mk - c * mj) / det
    mass = m1 = m3 = 0.0
    for x in range(n):
        mass += mid[x]
        m1 += v1[x]
        m3 += v3[x]
    if s1 < -tol * mass / m1:
        return SPLIT_NEGATIVE, s1, s3, ("s1", s1)
    if s3 < -tol * mass / m3:
        return SPLIT_NEGATIVE, s1, s3, ("s3", s3)
    if s1 < 0.0:
        s1 = 0.0
    if s3 < 0.0:
        s3 = 0.0
    bound = tol * mass
    left = [0.0] * n
    for x in range(n):
        if x == j or x == k:
            continue
        r = mid[x] - s1 * v1[x] - s3 * v3[x]
        if r < -bound:
            return SPLIT_NEGATIVE, s1, s3, (x, r)
        left[x] = r if r > bound else 0.0
    return SPLIT_OK, s1, s3, tuple(left)


def proportional_float(a, b, tol):
    n = len(a)
    ma = mb = 0.0
    for x in range(n):
        if (a[x] > 0.0) != (b[x] > 0.0):
            return False
        ma += a[x]
        mb += b[x]
    bound = tol * ma * mb
    for x in range(n):
        if a[x] > 0.0 and abs(a[x] * mb - b[x] * ma) > bound:
            return False
    return True
