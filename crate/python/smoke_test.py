"""Smoke test for the Python bindings.

Build first:  maturin develop -m crates/python/pyproject.toml --release
Then run:     python python/smoke_test.py
"""

import math

import smoothness_lab as sl


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    params = sl.SpaceParams(2.0, 1.0)
    assert params.validate()[0], params.validate()
    assert not sl.SpaceParams(2.0, 3.0).validate()[0]

    x = sl.Function.polynomial([0.0, 1.0])
    assert x(0.25) == 0.25
    cube = sl.Function(lambda t: t ** 3, label="x^3")
    assert close(cube(0.5), 0.125, 1e-15)

    # translating x multiplies it by psi_1(y) = 3y - 2
    y, at = 0.3, -0.4
    lhs = sl.asym_translate(x, y, at)
    assert close(lhs, (3 * y - 2) * at, 1e-10), lhs
    assert close(sl.multiplier_psi(1, y), (3 * y - 2), 1e-10)

    nodes, weights = sl.gauss_jacobi(8, 2.0, 2.0)
    assert len(nodes) == 8 and close(sum(weights), 16.0 / 15.0, 1e-13)
    assert close(sl.jacobi_eval(3, 2.0, 2.0, 1.0), 1.0, 1e-14)

    # ||x|| in L^2 with weight (1 - x^2)^2
    assert close(sl.weighted_norm(x, params), math.sqrt(16.0 / 105.0), 1e-12)

    # a Python callable goes through the threaded modulus
    w = sl.modulus(cube, 0.5, params, quad_n=32, norm_nodes=64)
    assert w > 0 and math.isfinite(w)

    e, p = sl.best_approx(cube, 3, params)
    assert e > 0 and p.degree() <= 2
    e4, _ = sl.best_approx(cube, 4, params)
    assert e4 < 1e-12
    k, witness = sl.k_functional(cube, 0.5, params, max_deg=8)
    assert 0 <= k <= sl.weighted_norm(cube, params) + 1e-12
    assert isinstance(witness, sl.JacobiSeries)

    labels = [label for label, _, _ in sl.corpus(7)]
    assert "|x|" in labels and "series[7]" in labels

    report = sl.verify(quad_n=64)
    assert report["schema_version"] == 1
    failed = [c["check_id"] for c in report["checks"] if c["status"] == "fail"]
    assert not failed, failed

    try:
        sl.verify(alpha=5)
    except ValueError:
        pass
    else:
        raise AssertionError("alpha = 5 accepted")

    print("smoke test passed:", len(report["checks"]), "checks")


if __name__ == "__main__":
    main()
