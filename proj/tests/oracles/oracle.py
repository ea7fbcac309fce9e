"""Independent reference values for the unit tests.

Pure Python with exact Fractions for every phase and spacing comparison and
mpmath for the transcendental sums. Run: python3 tests/oracles/oracle.py
"""
from fractions import Fraction
from math import isqrt
import mpmath as mp

mp.mp.dps = 30


def gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def gpow(a, k):
    out = (1, 0)
    for _ in range(k):
        out = gmul(out, a)
    return out


def gnorm(a):
    return a[0] * a[0] + a[1] * a[1]


def conj(a):
    return (a[0], -a[1])


def e(x):
    return mp.expjpi(2 * mp.mpf(x.numerator) / x.denominator)


def box(radius):
    for x in range(-radius, radius + 1):
        for y in range(-radius, radius + 1):
            yield (x, y)


def s_direct(k, Q0, q1, r1, j, radius=60):
    kappa = 2 ** (k - 1)
    m = gpow(q1, k)
    D = gnorm(m)
    w = gmul(gmul(j, r1), conj(m))
    total = mp.mpc(0)
    for q in box(radius):
        num = gmul(w, gpow(q, k))[0]
        total += mp.exp(-mp.pi / kappa * gnorm(q) / Q0) * e(Fraction(num % D, D))
    return total


def psi2_mass(k, Q0, radius=80):
    kappa = 2 ** (k - 1)
    return mp.fsum(mp.exp(-mp.pi / kappa * gnorm(q) / Q0) for q in box(radius))


def divides(d, a):
    # d | a in Z[i]: a * conj(d) / N(d) integral
    n = gnorm(d)
    p = gmul(a, conj(d))
    return p[0] % n == 0 and p[1] % n == 0


def is_unit(a):
    return gnorm(a) == 1


def coprime(a, b):
    # brute force over candidate divisors of norm <= min norm
    lim = min(gnorm(a) if a != (0, 0) else 10**9, gnorm(b) if b != (0, 0) else 10**9)
    r = isqrt(lim) + 1
    for d in box(r):
        if gnorm(d) > 1 and gnorm(d) <= lim and divides(d, a) and divides(d, b):
            return False
    return True


def residues(m):
    """One representative per class of Z[i]/(m), found by reducing a box."""
    D = gnorm(m)
    seen = {}
    r = isqrt(D) + 2
    for a in box(r):
        # canonical key: a * conj(m) mod D componentwise
        p = gmul(a, conj(m))
        key = (p[0] % D, p[1] % D)
        seen.setdefault(key, a)
    assert len(seen) == D
    return list(seen.values())


def moduli_squares(Q, literal=True):
    out = []
    r = isqrt(int(Q)) + 1
    for q in box(r):
        if q != (0, 0) and gnorm(q) <= Q:
            if literal or (q[0] > 0 and q[1] >= 0):
                out.append(q)
    return out


def disk(N):
    r = isqrt(int(N)) + 1
    return [n for n in box(r) if gnorm(n) <= N]


def lhs_T_squares_ones(Q, N):
    pts = disk(N)
    T = mp.mpf(0)
    farey = []
    for q in moduli_squares(Q):
        m = gpow(q, 2)
        D = gnorm(m)
        for r in residues(m):
            if not coprime(r, q):
                continue
            s = mp.mpc(0)
            for n in pts:
                num = gmul(gmul(n, r), conj(m))[0]
                s += e(Fraction(num % D, D))
            T += abs(s) ** 2
            # embedding conj(r)/conj(q^2) = r * m ... numerators (xu+yv, xv-yu)/D
            x, y = r
            u, v = m
            farey.append((Fraction(x * u + y * v, D), Fraction(x * v - y * u, D)))
    return T, farey


def torus(d):
    return d - round(d)


def k_euclid(farey, N):
    best = 0
    for a in farey:
        c = 0
        for b in farey:
            dx = torus(b[0] - a[0])
            dy = torus(b[1] - a[1])
            if (dx * dx + dy * dy) * N <= 2:
                c += 1
        best = max(best, c)
    return best


def k_sup(farey, N):
    best = 0
    for a in farey:
        c = 0
        for b in farey:
            dx = torus(b[0] - a[0])
            dy = torus(b[1] - a[1])
            if dx * dx * N <= 1 and dy * dy * N <= 1:
                c += 1
        best = max(best, c)
    return best


def count_small(q1, r1, k, L, delta):
    m = gpow(q1, k)
    D = gnorm(m)
    w = gmul(r1, conj(m))
    c = 0
    for d in box(isqrt(L) + 1):
        if d == (0, 0) or gnorm(d) > L:
            continue
        p = gmul(d, w)
        fx = torus(Fraction(p[0], D))
        fy = torus(Fraction(p[1], D))
        if fx * fx + fy * fy <= Fraction(delta) ** 2:
            c += 1
    return c


if __name__ == "__main__":
    s = s_direct(2, 5, (2, 1), (1, 0), (1, 0))
    print("S_direct k=2 Q0=5 (2+i,1,1):", mp.nstr(s.real, 17), mp.nstr(s.imag, 17), "|S|^2", mp.nstr(abs(s) ** 2, 17))
    s3 = s_direct(3, 5, (2, 1), (1, 0), (1, 0))
    print("S_direct k=3 Q0=5 (2+i,1,1):", mp.nstr(s3.real, 17), mp.nstr(s3.imag, 17))
    for Q0 in (4, 16, 64):
        print("psi2 mass k=2 Q0=%d:" % Q0, mp.nstr(psi2_mass(2, Q0, radius=int(4 * Q0**0.5) + 20), 17))
    T, farey = lhs_T_squares_ones(3, 10)
    print("squares Q=3 N=10 ones: R", len(farey), "T", mp.nstr(T, 17), "Z", len(disk(10)))
    print("  K_euclid", k_euclid(farey, 10), "K_sup", k_sup(farey, 10))
    for delta in ("0", "0.1", "0.3", "0.49"):
        print("count_small (2+i,1,k=2,L=200,delta=%s):" % delta, count_small((2, 1), (1, 0), 2, 200, Fraction(delta)))
    print("count_small (1+2i,2+i... k=3,L=300,delta=0.2):", count_small((1, 2), (2, 1), 3, 300, Fraction(1, 5)))
