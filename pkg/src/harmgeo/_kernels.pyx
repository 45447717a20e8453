# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled geodesic kernels; see _kernels_py.py for the reference versions."""

from libc.math cimport sin, cos

BACKEND = "compiled"


cdef inline double _ipow(double x, int k) noexcept:
    cdef double out = 1.0
    cdef double base = x
    while k > 0:
        if k & 1:
            out *= base
        base *= base
        k >>= 1
    return out


def christoffel(double theta, double r, double rt, double rp,
                double rtt, double rtp, double rpp):
    cdef double st = sin(theta)
    cdef double ct = cos(theta)
    cdef double st2 = st * st

    cdef double g11 = rt * rt + r * r
    cdef double g12 = rt * rp
    cdef double g22 = rp * rp + r * r * st2

    cdef double g11_t = 2.0 * rt * rtt + 2.0 * r * rt
    cdef double g11_p = 2.0 * rt * rtp + 2.0 * r * rp
    cdef double g12_t = rtt * rp + rt * rtp
    cdef double g12_p = rtp * rp + rt * rpp
    cdef double g22_t = 2.0 * rp * rtp + 2.0 * r * rt * st2 + 2.0 * r * r * st * ct
    cdef double g22_p = 2.0 * rp * rpp + 2.0 * r * rp * st2

    cdef double det = g11 * g22 - g12 * g12
    cdef double h = 0.5 / det

    return (
        g11, g12, g22, det,
        (g22 * g11_t - g12 * (2.0 * g12_t - g11_p)) * h,
        (g22 * g11_p - g12 * g22_t) * h,
        (g22 * (2.0 * g12_p - g22_t) - g12 * g22_p) * h,
        (g11 * (2.0 * g12_t - g11_p) - g12 * g11_t) * h,
        (g11 * g22_t - g12 * g11_p) * h,
        (g11 * g22_p - g12 * (2.0 * g12_p - g22_t)) * h,
    )


cdef inline void _sectoral_parts(int n, double eps, double theta, double phi,
                                 double* out) noexcept:
    cdef double st = sin(theta)
    cdef double ct = cos(theta)
    cdef double cn = cos(n * phi)
    cdef double sn = sin(n * phi)
    cdef double sn1 = _ipow(st, n - 1)
    cdef double snn = sn1 * st
    cdef double sn2 = _ipow(st, n - 2) if n >= 2 else 0.0

    out[0] = 1.0 + eps * snn * cn
    out[1] = eps * n * sn1 * ct * cn
    out[2] = -eps * n * snn * sn
    out[3] = eps * n * cn * ((n - 1) * sn2 * ct * ct - snn)
    out[4] = -eps * n * n * sn1 * ct * sn
    out[5] = -eps * n * n * snn * cn


cdef inline tuple _rhs(double theta, double td, double pd, double* p):
    cdef double st = sin(theta)
    cdef double ct = cos(theta)
    cdef double st2 = st * st
    cdef double r = p[0], rt = p[1], rp = p[2], rtt = p[3], rtp = p[4], rpp = p[5]

    cdef double g11 = rt * rt + r * r
    cdef double g12 = rt * rp
    cdef double g22 = rp * rp + r * r * st2

    cdef double g11_t = 2.0 * rt * rtt + 2.0 * r * rt
    cdef double g11_p = 2.0 * rt * rtp + 2.0 * r * rp
    cdef double g12_t = rtt * rp + rt * rtp
    cdef double g12_p = rtp * rp + rt * rpp
    cdef double g22_t = 2.0 * rp * rtp + 2.0 * r * rt * st2 + 2.0 * r * r * st * ct
    cdef double g22_p = 2.0 * rp * rpp + 2.0 * r * rp * st2

    cdef double det = g11 * g22 - g12 * g12
    cdef double h = 0.5 / det

    cdef double gttt = (g22 * g11_t - g12 * (2.0 * g12_t - g11_p)) * h
    cdef double gttp = (g22 * g11_p - g12 * g22_t) * h
    cdef double gtpp = (g22 * (2.0 * g12_p - g22_t) - g12 * g22_p) * h
    cdef double gptt = (g11 * (2.0 * g12_t - g11_p) - g12 * g11_t) * h
    cdef double gptp = (g11 * g22_t - g12 * g11_p) * h
    cdef double gppp = (g11 * g22_p - g12 * (2.0 * g12_p - g22_t)) * h

    return (
        td, pd,
        -(gttt * td * td + 2.0 * gttp * td * pd + gtpp * pd * pd),
        -(gptt * td * td + 2.0 * gptp * td * pd + gppp * pd * pd),
    )


def sectoral_partials(int n, double eps, double theta, double phi):
    cdef double p[6]
    _sectoral_parts(n, eps, theta, phi, p)
    return p[0], p[1], p[2], p[3], p[4], p[5]


def sectoral_rhs(int n, double eps, double theta, double phi, double td, double pd):
    cdef double p[6]
    _sectoral_parts(n, eps, theta, phi, p)
    return _rhs(theta, td, pd, p)


cdef inline void _chart_parts(int n, double eps, rot, double theta, double phi,
                              double* out):
    cdef double complex wx = rot[0] + 1j * rot[3]
    cdef double complex wy = rot[1] + 1j * rot[4]
    cdef double complex wz = rot[2] + 1j * rot[5]
    cdef double st = sin(theta)
    cdef double ct = cos(theta)
    cdef double cp = cos(phi)
    cdef double sp = sin(phi)

    cdef double complex w = wx * (st * cp) + wy * (st * sp) + wz * ct
    cdef double complex w_t = wx * (ct * cp) + wy * (ct * sp) - wz * st
    cdef double complex w_p = -wx * (st * sp) + wy * (st * cp)
    cdef double complex w_tp = -wx * (ct * sp) + wy * (ct * cp)
    cdef double complex w_pp = -wx * (st * cp) - wy * (st * sp)

    cdef double complex wn2 = 1.0
    cdef int k
    if n >= 2:
        for k in range(n - 2):
            wn2 *= w
    else:
        wn2 = 0.0
    cdef double complex wn1 = wn2 * w if n >= 2 else 1.0
    cdef double complex wn = wn1 * w

    out[0] = 1.0 + eps * wn.real
    out[1] = eps * (n * wn1 * w_t).real
    out[2] = eps * (n * wn1 * w_p).real
    out[3] = eps * (n * (n - 1) * wn2 * w_t * w_t - n * wn1 * w).real
    out[4] = eps * (n * (n - 1) * wn2 * w_t * w_p + n * wn1 * w_tp).real
    out[5] = eps * (n * (n - 1) * wn2 * w_p * w_p + n * wn1 * w_pp).real


def chart_sectoral_partials(int n, double eps, rot, double theta, double phi):
    cdef double p[6]
    _chart_parts(n, eps, rot, theta, phi, p)
    return p[0], p[1], p[2], p[3], p[4], p[5]


def chart_sectoral_rhs(int n, double eps, rot, double theta, double phi,
                       double td, double pd):
    cdef double p[6]
    _chart_parts(n, eps, rot, theta, phi, p)
    return _rhs(theta, td, pd, p)


def sectoral_hamiltonian2(int n, double eps, double theta, double phi,
                          double td, double pd):
    cdef double p[6]
    _sectoral_parts(n, eps, theta, phi, p)
    cdef double st = sin(theta)
    cdef double g11 = p[1] * p[1] + p[0] * p[0]
    cdef double g12 = p[1] * p[2]
    cdef double g22 = p[2] * p[2] + p[0] * p[0] * st * st
    return g11 * td * td + 2.0 * g12 * td * pd + g22 * pd * pd
