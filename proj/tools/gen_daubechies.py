"""Print Daubechies low-pass filters (N vanishing moments, 2N taps) as C++ initializers."""
import mpmath as mp

mp.mp.dps = 50


def daubechies(N):
    # Roots of the Bezout polynomial P(y) = sum_k C(N-1+k, k) y^k, mapped to z via y = (2 - z - 1/z) / 4.
    coeffs = [mp.binomial(N - 1 + k, k) for k in range(N)]
    yroots = mp.polyroots(coeffs[::-1], maxsteps=400, extraprec=200) if N > 1 else []
    zroots = []
    for y in yroots:
        # z^2 - (2 - 4y) z + 1 = 0; keep the root inside the unit circle.
        b = 2 - 4 * y
        d = mp.sqrt(b * b - 4)
        z1, z2 = (b + d) / 2, (b - d) / 2
        zroots.append(z1 if abs(z1) < 1 else z2)
    poly = [mp.mpf(1)]
    for _ in range(N):
        poly = [a + b for a, b in zip(poly + [0], [0] + poly)]  # times (1 + z)
    for z in zroots:
        poly = [a - z * b for a, b in zip(poly + [0], [0] + poly)]  # times (z - root) up to sign
    h = [mp.re(c) for c in poly]
    s = sum(h)
    return [c * mp.sqrt(2) / s for c in h]


for N in range(1, 7):
    h = daubechies(N)
    assert abs(sum(x * x for x in h) - 1) < mp.mpf(10) ** -40
    print("    {" + ", ".join(mp.nstr(x, 20) for x in h) + "},")
