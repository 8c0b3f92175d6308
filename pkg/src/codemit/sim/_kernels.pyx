# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""In-place statevector kernels.

Qubit ``q`` of an ``n``-qubit register is bit ``n - 1 - q`` of the
amplitude index.  Amplitudes are handled as interleaved (re, im) doubles.
"""
from libc.math cimport cos, sin

ctypedef double complex cplx


cdef inline Py_ssize_t _insert_zero(Py_ssize_t i, int bit) noexcept nogil:
    cdef Py_ssize_t low = i & (((<Py_ssize_t>1) << bit) - 1)
    return ((i >> bit) << (bit + 1)) | low


def apply_1q(cplx[::1] psi, int n, int q, cplx m00, cplx m01, cplx m10, cplx m11):
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n - 1 - q)
    cdef Py_ssize_t base, i, j
    cdef double ar, ai, br, bi
    cdef double r00 = m00.real, i00 = m00.imag, r01 = m01.real, i01 = m01.imag
    cdef double r10 = m10.real, i10 = m10.imag, r11 = m11.real, i11 = m11.imag
    with nogil:
        base = 0
        while base < dim:
            for i in range(base, base + stride):
                j = i + stride
                ar = p[2 * i]
                ai = p[2 * i + 1]
                br = p[2 * j]
                bi = p[2 * j + 1]
                p[2 * i] = r00 * ar - i00 * ai + r01 * br - i01 * bi
                p[2 * i + 1] = r00 * ai + i00 * ar + r01 * bi + i01 * br
                p[2 * j] = r10 * ar - i10 * ai + r11 * br - i11 * bi
                p[2 * j + 1] = r10 * ai + i10 * ar + r11 * bi + i11 * br
            base += 2 * stride


def apply_cnot(cplx[::1] psi, int n, int c, int t):
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t quarter = psi.shape[0] >> 2
    cdef int cb = n - 1 - c, tb = n - 1 - t
    cdef int lo = cb if cb < tb else tb
    cdef int hi = tb if cb < tb else cb
    cdef Py_ssize_t cm = (<Py_ssize_t>1) << cb, tm = (<Py_ssize_t>1) << tb
    cdef Py_ssize_t k, i, j
    cdef double r, im
    with nogil:
        for k in range(quarter):
            i = _insert_zero(_insert_zero(k, lo), hi) | cm
            j = i | tm
            r = p[2 * i]
            im = p[2 * i + 1]
            p[2 * i] = p[2 * j]
            p[2 * i + 1] = p[2 * j + 1]
            p[2 * j] = r
            p[2 * j + 1] = im


cdef inline void _scale(double* p, Py_ssize_t i, double cr, double ci) noexcept nogil:
    cdef double r = p[2 * i], im = p[2 * i + 1]
    p[2 * i] = cr * r - ci * im
    p[2 * i + 1] = cr * im + ci * r


def apply_rz(cplx[::1] psi, int n, int q, double theta):
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n - 1 - q)
    cdef Py_ssize_t base, i
    cdef double c = cos(theta / 2), s = sin(theta / 2)
    with nogil:
        base = 0
        while base < dim:
            for i in range(base, base + stride):
                _scale(p, i, c, -s)
            for i in range(base + stride, base + 2 * stride):
                _scale(p, i, c, s)
            base += 2 * stride


def apply_rzz(cplx[::1] psi, int n, int a, int b, double theta):
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef int sa = n - 1 - a, sb = n - 1 - b
    cdef Py_ssize_t i
    cdef double c = cos(theta / 2), s = sin(theta / 2)
    cdef double sgn[2]
    sgn[0] = -s
    sgn[1] = s
    with nogil:
        for i in range(dim):
            _scale(p, i, c, sgn[((i >> sa) ^ (i >> sb)) & 1])


def apply_pauli(cplx[::1] psi, int n, int q, int code):
    """code 1 = X, 2 = Y, 3 = Z."""
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << (n - 1 - q)
    cdef Py_ssize_t base, i, j
    cdef double ar, ai, br, bi
    with nogil:
        base = 0
        while base < dim:
            for i in range(base, base + stride):
                j = i + stride
                ar = p[2 * i]
                ai = p[2 * i + 1]
                br = p[2 * j]
                bi = p[2 * j + 1]
                if code == 1:
                    p[2 * i] = br
                    p[2 * i + 1] = bi
                    p[2 * j] = ar
                    p[2 * j + 1] = ai
                elif code == 2:
                    # Y|0> = i|1>, Y|1> = -i|0>
                    p[2 * i] = bi
                    p[2 * i + 1] = -br
                    p[2 * j] = -ai
                    p[2 * j + 1] = ar
                elif code == 3:
                    p[2 * j] = -br
                    p[2 * j + 1] = -bi
            base += 2 * stride


def apply_mcz(cplx[::1] psi, long long mask):
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t free = (dim - 1) & ~mask
    cdef Py_ssize_t sub = 0, i
    with nogil:
        # enumerate subsets of the free bits; each gives one index with all mask bits set
        while True:
            i = sub | mask
            p[2 * i] = -p[2 * i]
            p[2 * i + 1] = -p[2 * i + 1]
            if sub == free:
                break
            sub = (sub - free) & free


def sample_index(cplx[::1] psi, double u):
    """Index drawn from |psi|^2 using the uniform variate ``u`` in [0, 1)."""
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i, found = -1
    cdef double total = 0.0, acc = 0.0, target, w
    with nogil:
        for i in range(dim):
            total += p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1]
        target = u * total
        for i in range(dim):
            w = p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1]
            acc += w
            if acc > target and w > 0:
                found = i
                break
        if found < 0:
            # rounding pushed the target past the end; take the last populated index
            found = dim - 1
            while found > 0 and p[2 * found] == 0 and p[2 * found + 1] == 0:
                found -= 1
    return found


def apply_monomial(cplx[::1] psi, cplx[::1] scratch, long long[::1] spread, long long free,
                   long long[::1] perm, cplx[::1] phase, bint use_perm, bint use_phase):
    """Apply |rest, x> -> phase[x] |rest, perm[x]> where x indexes a subset of qubits.

    ``spread[x]`` is the full-index bit pattern of local index ``x`` and
    ``free`` the mask of the remaining bits.
    """
    cdef double* p = <double*> &psi[0]
    cdef double* out = <double*> &scratch[0]
    cdef double* ph
    cdef Py_ssize_t L = spread.shape[0]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t rest = 0, l, src, dst
    cdef double r, im, cr, ci
    if use_phase:
        ph = <double*> &phase[0]
    cdef bint rest_inner = (free & 1) != 0
    with nogil:
        if rest_inner:
            # free bits include the lowest one: sweep them innermost for locality
            for l in range(L):
                if use_phase:
                    cr = ph[2 * l]
                    ci = ph[2 * l + 1]
                rest = 0
                while True:
                    src = rest | spread[l]
                    r = p[2 * src]
                    im = p[2 * src + 1]
                    if use_phase:
                        r, im = cr * r - ci * im, cr * im + ci * r
                    if use_perm:
                        dst = rest | spread[perm[l]]
                        out[2 * dst] = r
                        out[2 * dst + 1] = im
                    else:
                        p[2 * src] = r
                        p[2 * src + 1] = im
                    if rest == free:
                        break
                    rest = (rest - free) & free
        else:
            while True:
                for l in range(L):
                    src = rest | spread[l]
                    r = p[2 * src]
                    im = p[2 * src + 1]
                    if use_phase:
                        cr = ph[2 * l]
                        ci = ph[2 * l + 1]
                        r, im = cr * r - ci * im, cr * im + ci * r
                    if use_perm:
                        dst = rest | spread[perm[l]]
                        out[2 * dst] = r
                        out[2 * dst + 1] = im
                    else:
                        p[2 * src] = r
                        p[2 * src + 1] = im
                if rest == free:
                    break
                rest = (rest - free) & free
        if use_perm:
            for l in range(2 * dim):
                p[l] = out[l]


def apply_h_layer(cplx[::1] psi, int n, long long[::1] qubits):
    """Hadamard on each listed (distinct) qubit, two qubits per memory pass."""
    cdef double* p = <double*> &psi[0]
    cdef Py_ssize_t quarter = psi.shape[0] >> 2
    cdef Py_ssize_t nq = qubits.shape[0]
    cdef Py_ssize_t j, k, i0, i1, i2, i3
    cdef int ba, bb, lo, hi
    cdef Py_ssize_t ma, mb
    cdef double t0r, t0i, t1r, t1i, t2r, t2i, t3r, t3i
    cdef double s = 0.7071067811865476
    j = 0
    with nogil:
        while j + 1 < nq:
            ba = n - 1 - qubits[j]
            bb = n - 1 - qubits[j + 1]
            lo = ba if ba < bb else bb
            hi = bb if ba < bb else ba
            ma = (<Py_ssize_t>1) << ba
            mb = (<Py_ssize_t>1) << bb
            for k in range(quarter):
                i0 = _insert_zero(_insert_zero(k, lo), hi)
                i1 = i0 | ma
                i2 = i0 | mb
                i3 = i1 | mb
                t0r = p[2 * i0] + p[2 * i1]
                t0i = p[2 * i0 + 1] + p[2 * i1 + 1]
                t1r = p[2 * i0] - p[2 * i1]
                t1i = p[2 * i0 + 1] - p[2 * i1 + 1]
                t2r = p[2 * i2] + p[2 * i3]
                t2i = p[2 * i2 + 1] + p[2 * i3 + 1]
                t3r = p[2 * i2] - p[2 * i3]
                t3i = p[2 * i2 + 1] - p[2 * i3 + 1]
                p[2 * i0] = 0.5 * (t0r + t2r)
                p[2 * i0 + 1] = 0.5 * (t0i + t2i)
                p[2 * i1] = 0.5 * (t1r + t3r)
                p[2 * i1 + 1] = 0.5 * (t1i + t3i)
                p[2 * i2] = 0.5 * (t0r - t2r)
                p[2 * i2 + 1] = 0.5 * (t0i - t2i)
                p[2 * i3] = 0.5 * (t1r - t3r)
                p[2 * i3 + 1] = 0.5 * (t1i - t3i)
            j += 2
    if j < nq:
        apply_1q(psi, n, qubits[j], s, s, s, -s)
