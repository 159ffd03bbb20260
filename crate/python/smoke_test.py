"""Smoke test for the Python extension.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import cmath
import math

import expsum

SQRT2 = "1.4142135623730950488016887242096980786"


def close(a, b, tol):
    return abs(a - b) < tol


# f = 1 + e^{2πz}, g = e^{-2πz}: mean -1, zeros at i(k + 1/2)
f = expsum.ExpSum([(1, 0), (1, 1)], exact=True)
g = expsum.ExpSum([(1, -1)], exact=True)
m = expsum.mean_value(f, g)
assert m["exact"]["M"] == "-1", m
assert m["M"] == -1
zeros = expsum.find_zeros(f, 3.0)
assert [round(z.imag, 9) for z, _ in zeros] == [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5], zeros
assert all(k == 1 and abs(f(z)) < 1e-9 for z, k in zeros)
mean, count = expsum.empirical_mean(f, 20.0, g)
assert count == 40 and close(mean, -1, 1e-9), (mean, count)

# quadratic in w = e^{2πz}: symbolic, substitution and residues agree
q = expsum.ExpSum([(6, 0), (-5, 1), (1, 2)])
w = expsum.ExpSum([(1, 1)])
assert close(expsum.mean_value(q, w)["M"], 5, 1e-12)
assert close(expsum.mean_via_substitution(q, w), 5, 1e-10)
poly = [(0, 6), (1, -5), (2, 1)]
assert close(expsum.residue_formula_sum(poly, [(1, 1)]), 5, 1e-12)
assert close(expsum.sum_over_roots(poly, [(1, 1)]), 5, 1e-10)

# incommensurate frequencies {0, 1, √2}: density √2
s = expsum.ExpSum([(1, ["0", "0"]), (1, ["1", "0"]), (1, ["0", "1"])], basis=["1", SQRT2])
assert close(expsum.mean_zero_count(s), math.sqrt(2), 1e-15)
assert expsum.strip_bound(s) > 0
report = expsum.convergence_report(s, [5.0, 10.0, 20.0])
assert report["pass"], report
assert all(row["fewnomial_ok"] for row in report["rows"])

# problem files parse the same way as on the command line
f2, g2 = expsum.ExpSum.from_json('{"mode": "exact", "f": [{"coeff": [1, 0], "freq": 0}, {"coeff": [1, 0], "freq": "1/2"}]}')
assert f2.exact and len(f2) == 2 and len(g2) == 1
assert f2.frequencies() == [["0"], ["1/2"]]
assert close(f2(0.5j * 2), 1 + cmath.exp(2j * math.pi * 0.5), 1e-12)

try:
    expsum.ExpSum([(1, "x")])
except ValueError:
    pass
else:
    raise AssertionError("bad frequency accepted")

print("python smoke test: ok")
