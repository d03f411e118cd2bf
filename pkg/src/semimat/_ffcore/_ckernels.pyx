# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(q) matrix kernels; see pykernels.py for the shared protocol."""


def matmul(int n, int k, int m,
           const unsigned short[::1] a, const unsigned short[::1] b,
           int q, const unsigned short[::1] add, const unsigned short[::1] mul,
           unsigned short[::1] out):
    cdef int i, j, t, ik, im
    cdef unsigned int acc, av
    for i in range(n):
        ik = i * k
        im = i * m
        for j in range(m):
            acc = 0
            for t in range(k):
                av = a[ik + t]
                if av:
                    acc = add[acc * q + mul[av * q + b[t * m + j]]]
            out[im + j] = <unsigned short> acc


def rref(int nrows, int ncols, unsigned short[::1] mat,
         int q, const unsigned short[::1] add, const unsigned short[::1] mul,
         const unsigned short[::1] neg, const unsigned short[::1] inv):
    cdef int col, r, j, prow, rank, base, rb, pb
    cdef unsigned int pv, pinv, c, nc, tmp
    pivots = []
    rank = 0
    for col in range(ncols):
        prow = -1
        for r in range(rank, nrows):
            if mat[r * ncols + col]:
                prow = r
                break
        if prow < 0:
            continue
        if prow != rank:
            pb = prow * ncols
            rb = rank * ncols
            for j in range(col, ncols):
                tmp = mat[pb + j]
                mat[pb + j] = mat[rb + j]
                mat[rb + j] = <unsigned short> tmp
        base = rank * ncols
        pv = mat[base + col]
        if pv != 1:
            pinv = inv[pv]
            for j in range(col, ncols):
                mat[base + j] = mul[pinv * q + mat[base + j]]
        for r in range(nrows):
            if r == rank:
                continue
            rb = r * ncols
            c = mat[rb + col]
            if c:
                nc = neg[c]
                for j in range(col, ncols):
                    mat[rb + j] = add[mat[rb + j] * q + mul[nc * q + mat[base + j]]]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return pivots


def reduce_row(unsigned short[::1] vec, int nrows, int ncols,
               const unsigned short[::1] rows, pivots,
               int q, const unsigned short[::1] add,
           const unsigned short[::1] mul, const unsigned short[::1] neg):
    cdef int r, j, rb
    cdef unsigned int c, nc, rv
    for r in range(nrows):
        c = vec[<int> pivots[r]]
        if c:
            nc = neg[c]
            rb = r * ncols
            for j in range(ncols):
                rv = rows[rb + j]
                if rv:
                    vec[j] = add[vec[j] * q + mul[nc * q + rv]]
