"""Smoke test for the `symm` extension module.

Builds the cdylib with cargo, loads it from a temporary directory and
exercises each exported type and function once.
"""

import json
import os
import pathlib
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    subprocess.run(["cargo", "build", "-p", "symm-python"], cwd=ROOT, check=True)
    target = pathlib.Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target"))
    lib = target / "debug" / ("libsymm.dylib" if sys.platform == "darwin" else "libsymm.so")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, pathlib.Path(tmp) / "symm.so")
    sys.path.insert(0, tmp)
    import symm

    return symm


def main():
    symm = load_module()

    f = symm.Polynomial(2, "x1*x2 + 2*x1")
    assert f.nvars == 2 and f.degree == 2
    assert f.evaluate([1, "1/2"]) == Fraction(5, 2)
    assert symm.Polynomial.from_json(f.to_json()) == f
    g = symm.Polynomial(1, "x1")
    assert (g * g - g ** 2).degree is None

    rho = symm.Seminorm.weighted_l1([1, 1])
    assert symm.ext_value(rho, f) == 3
    lower, upper = symm.ext_interval(rho, f, 64, 7)
    assert lower <= 3 <= upper

    l1 = symm.Seminorm.lp(1)
    assert symm.spectrum_contains(l1, [1, -1])
    assert not symm.spectrum_contains(l1, [1, "-3/2"])
    for v in symm.sample_ball(l1, 2, 50, seed=3):
        assert max(abs(x) for x in v) <= 1 + 1e-12

    x = symm.Polynomial(1, "x1")
    one_minus_x = symm.Polynomial(1, "1 - x1")
    cert = symm.certificate_search([x, one_minus_x], 1, symm.Polynomial(1, "x1 - x1^2"), 1, epsilon="1/10")
    assert cert["found"] is True, cert
    miss = symm.certificate_search([x, one_minus_x], 1, symm.Polynomial(1, "-1"), 1)
    assert miss["found"] is False

    table = symm.MomentTable.from_measure([([1], "1/2"), ([-1], "1/2")], 6)
    assert table.is_positive(1)
    assert table.apply(symm.Polynomial(1, "x1^2")) == 1
    atoms = sorted(table.reconstruct())
    assert [a for a, _ in atoms] == [-1, 1], atoms
    assert table.hurwitz_reznick_violations(1) == 0
    assert table.quasi_analytic(3) in {"quasi_analytic", "not_quasi_analytic", "inconclusive"}

    assert symm.quasi_nuclear(2, 1)
    assert not symm.quasi_nuclear("3/2", 1)
    assert symm.hs_norm(0, {0: 3, 1: 4}) == 5

    code, out = symm.run_cli(["nuclear", "check", "--s2", "2", "--s1", "1"])
    assert code == 0 and json.loads(out)["pass"], out
    assert len(symm.suite_checks()) == 13
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
