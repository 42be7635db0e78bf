# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the routines in ``_pykernels``."""

BACKEND = "cython"

cdef inline bint _is_at(unsigned char c) nogil:
    return c == 65 or c == 84


cdef inline bint _match(const unsigned char[:] x, Py_ssize_t xo,
                        const unsigned char[:] y, Py_ssize_t m) nogil:
    cdef Py_ssize_t j
    for j in range(m):
        if x[xo + j] != y[j]:
            return False
    return True


cdef bint _correlated(const unsigned char[:] x, const unsigned char[:] y,
                      Py_ssize_t k, Py_ssize_t start) nogil:
    cdef Py_ssize_t nx = x.shape[0], ny = y.shape[0], i, m
    for i in range(start, nx):
        m = nx - i
        if ny < m:
            m = ny
        if m < k:
            break
        if _match(x, i, y, m):
            return True
    return False


cdef Py_ssize_t _hamming(const unsigned char[:] a, const unsigned char[:] b) nogil:
    cdef Py_ssize_t n = a.shape[0], i, d = 0
    if b.shape[0] < n:
        n = b.shape[0]
    for i in range(n):
        if a[i] != b[i]:
            d += 1
    return d


def hamming(const unsigned char[:] a, const unsigned char[:] b):
    return _hamming(a, b)


def correlation(const unsigned char[:] x, const unsigned char[:] y):
    cdef Py_ssize_t nx = x.shape[0], ny = y.shape[0], i, m
    bits = []
    for i in range(nx):
        m = nx - i
        if ny < m:
            m = ny
        bits.append(1 if _match(x, i, y, m) else 0)
    return bits


def correlated(const unsigned char[:] x, const unsigned char[:] y, Py_ssize_t k, Py_ssize_t start):
    return _correlated(x, y, k, start)


def rds_max(const unsigned char[:] s, Py_ssize_t start):
    cdef Py_ssize_t i, total = 0, best = 0, a
    for i in range(s.shape[0]):
        total += 1 if _is_at(s[i]) else -1
        a = total if total >= 0 else -total
        if i + 1 >= start and a > best:
            best = a
    return best


def gc_count(const unsigned char[:] s):
    cdef Py_ssize_t i, c = 0
    for i in range(s.shape[0]):
        if s[i] == 67 or s[i] == 71:
            c += 1
    return c


def compatible(const unsigned char[:] x, list accepted, Py_ssize_t d, Py_ssize_t k):
    cdef const unsigned char[:] y
    for obj in accepted:
        y = obj
        if _hamming(x, y) < d:
            return 1
    for obj in accepted:
        y = obj
        if _correlated(x, y, k, 0) or _correlated(y, x, k, 0):
            return 2
    return 0


def count_avoiders(list patterns, Py_ssize_t length):
    cdef unsigned char alphabet[4]
    alphabet[0] = 65
    alphabet[1] = 67
    alphabet[2] = 71
    alphabet[3] = 84
    cdef bytearray buf = bytearray(length)
    cdef unsigned char[:] s = buf
    cdef Py_ssize_t total = 1, code, i, j, start, count = 0, npat = len(patterns)
    cdef Py_ssize_t pl
    cdef const unsigned char[:] p
    cdef bint hit
    for i in range(length):
        total *= 4
    pats = [memoryview(q) for q in patterns]
    for code in range(total):
        j = code
        for i in range(length - 1, -1, -1):
            s[i] = alphabet[j & 3]
            j >>= 2
        hit = False
        for q in pats:
            p = q
            pl = p.shape[0]
            for start in range(length - pl + 1):
                if _match(s, start, p, pl):
                    hit = True
                    break
            if hit:
                break
        if not hit:
            count += 1
    return count


def lcp(const unsigned char[:] s, Py_ssize_t pos, const unsigned char[:] p):
    cdef Py_ssize_t n = s.shape[0] - pos, i = 0
    if p.shape[0] < n:
        n = p.shape[0]
    while i < n and s[pos + i] == p[i]:
        i += 1
    return i


cdef inline unsigned char _comp(unsigned char c) nogil:
    if c == 65:
        return 84
    if c == 84:
        return 65
    if c == 67:
        return 71
    return 67


def stem_free(const unsigned char[:] s, Py_ssize_t h):
    cdef Py_ssize_t n = s.shape[0], i, j, q
    cdef bint ok
    for i in range(n - h + 1):
        for j in range(n - h + 1):
            if not (j + h <= i or j >= i + h):
                continue
            ok = True
            for q in range(h):
                if s[j + q] != _comp(s[i + h - 1 - q]):
                    ok = False
                    break
            if ok:
                return False
    return True
