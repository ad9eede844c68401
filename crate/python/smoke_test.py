"""Smoke test for the lratio extension module.

Build first:
    cargo build --release -p lratio-python --features extension-module
then run `python3 python/smoke_test.py`. An installed `lratio` is used when
importable; otherwise the freshly built library under target/ is loaded.
"""

import importlib.machinery
import importlib.util
import sys
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        import lratio

        return lratio
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("liblratio.so", "liblratio.dylib", "lratio.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                loader = importlib.machinery.ExtensionFileLoader("lratio", str(path))
                spec = importlib.util.spec_from_loader("lratio", loader)
                module = importlib.util.module_from_spec(spec)
                loader.exec_module(module)
                sys.modules["lratio"] = module
                return module
    sys.exit("lratio extension not found; build it with cargo first")


def main():
    lr = load()

    identity = lr.Matrix([[1, 0], [0, 1]])
    assert not identity.is_lorentzian()
    assert identity.signature() == (2, 0, 0)

    m = lr.Matrix.rank2([1, 2, "1/3", 5, 7], [2, 1, 1, "3/2", 4])
    assert m.exact and m.is_lorentzian()
    assert m.in_delta_tp(2)

    pent = lr.Ratio.pentagonal(1, 2, 3, 4, 5, 5)
    assert pent.is_bounded() == (True, None)
    exact, value = pent.evaluate(m)
    assert Fraction(exact) <= 4 and abs(float(Fraction(exact)) - value) < 1e-12
    t = Fraction(1, 100)
    exact, _ = pent.evaluate(lr.Matrix.witness_pentagonal(str(t)))
    assert Fraction(exact) == 16 * (1 + t) / (2 + t) ** 2

    tri = lr.Ratio.triangular(2, 3, 1, 3)
    holds, terms, difference = tri.subfree()
    assert holds and terms == 2 and difference == "2*a1^2*b2*b3 + 2*a2*a3*b1^2"
    assert lr.Ratio(3, [((1, 2), 1)]).is_bounded()[0] is False

    assert [len(lr.enumerate_facets(n)) for n in (3, 4, 5)] == [3, 12, 40]
    assert sorted(size for _, size in lr.facet_orbits(5)) == [10, 30]

    assert abs(lr.theorem_c(1, 0, 0) - 2) < 1e-12
    assert lr.theorem_c(1 / 3, 1 / 3, 1 / 3) == 1
    assert abs(lr.verify_n3(0.7, 0.2, 0.1) - lr.theorem_c(0.7, 0.2, 0.1)) < 1e-6
    assert lr.fp_delta3(1, 1, 1, 2) == 8
    assert lr.hard_lemma([6, 1, 1], [1, 1, 6]) == (False, True)

    square = lr.Metric(4, [1, 2, 1, 1, 2, 1])
    assert square.delta() == "1/1" and not square.is_tree()
    approx, gap, bound = square.tree_approx(1)
    assert approx.is_tree() and Fraction(gap) <= Fraction(bound)
    star = lr.Metric(3, [3, 4, 5])
    assert sorted(w for _, w in star.cut_decomposition()) == ["1/1", "2/1", "3/1"]

    try:
        lr.Matrix([[1, 2], [3, 1]])
    except ValueError as e:
        assert "symmetric" in str(e)
    else:
        raise AssertionError("asymmetric matrix accepted")

    passed, detail = lr.run_criterion(9)
    assert passed, detail
    print(f"lratio {lr.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
