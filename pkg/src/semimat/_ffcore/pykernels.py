"""Pure-Python GF(q) matrix kernels.

Same flat-buffer protocol as the compiled module: matrices are row-major
sequences of element encodings in [0, q), and arithmetic goes through flat
q*q lookup tables (add, mul) plus length-q tables (neg, inv). Buffers are
array('H') in practice but any mutable sequence works.
"""


def matmul(n, k, m, a, b, q, add, mul, out):
    """out[n*m] = a[n*k] @ b[k*m]."""
    for i in range(n):
        ik = i * k
        im = i * m
        for j in range(m):
            acc = 0
            for t in range(k):
                av = a[ik + t]
                if av:
                    acc = add[acc * q + mul[av * q + b[t * m + j]]]
            out[im + j] = acc


def rref(nrows, ncols, mat, q, add, mul, neg, inv):
    """Reduce mat[nrows*ncols] in place to reduced row echelon form.

    Pivot entries are normalized to 1 and cleared above and below.
    Returns the list of pivot column indices.
    """
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
            pb, rb = prow * ncols, rank * ncols
            for j in range(col, ncols):
                mat[pb + j], mat[rb + j] = mat[rb + j], mat[pb + j]
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


def reduce_row(vec, nrows, ncols, rows, pivots, q, add, mul, neg):
    """Subtract echelon rows from vec in place to clear all pivot positions.

    rows is a flat nrows*ncols RREF basis (pivot coefficients 1); pivots
    holds its pivot columns.
    """
    for r in range(nrows):
        c = vec[pivots[r]]
        if c:
            nc = neg[c]
            rb = r * ncols
            for j in range(ncols):
                rv = rows[rb + j]
                if rv:
                    vec[j] = add[vec[j] * q + mul[nc * q + rv]]
