"""Smoke test for the `hurwitz` extension module.

Build and run from the repository root:

    cargo build --release -p hurwitz-py --features extension-module
    cp target/release/libhurwitz.so python/hurwitz.so
    python3 python/smoke_test.py
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import hurwitz  # noqa: E402


def main() -> None:
    assert hurwitz.classical_hurwitz("2|2") == Fraction(1, 2)
    assert hurwitz.classical_hurwitz([[2]] * 4) == Fraction(1, 2)
    assert hurwitz.classical_hurwitz("2,1|2,1|2,1|2,1") == 4
    assert hurwitz.genus("2|2|2|2") == 1

    binary = hurwitz.Tree("((0,1),(2,3));")
    assert binary.is_binary() and binary.num_leaves == 4
    count = hurwitz.tropical_hurwitz("2|2|2|2", binary)
    assert count.raw_count == 1
    assert count.weighted == Fraction(1, 2)
    (cls,) = count.classes
    assert (cls.aut, cls.betti, cls.multiplicity) == (2, 1, Fraction(1, 2))
    assert cls.is_mumford()
    assert "digraph" in cls.dot() or "graph" in cls.dot()
    json.loads(cls.json())

    star = hurwitz.Tree.star(4)
    assert not star.is_binary()
    m = hurwitz.mumford_hurwitz("2|2|2|2", star)
    assert m["wiener_weight"] == Fraction(1, 2) and m["mumford"] == 0
    assert hurwitz.mumford_hurwitz("2|2|2|2", binary)["mumford"] == Fraction(1, 2)
    assert hurwitz.refinement_check("2,1|2,1|2,1|2,1", "(0,1,2,3);") == (True, True)

    cjm = hurwitz.cjm_double_hurwitz([2, 1], [3], 0)
    assert cjm.weighted == cjm.classical

    assert json.loads(hurwitz.report("classical", "2|2|2|2")) == {"value": "1/2"}
    assert json.loads(hurwitz.report("classical", "2|3"))["error"] == "UnequalSums"

    try:
        hurwitz.Tree("((0,1),(0,2));")
    except ValueError as e:
        assert "more than once" in str(e)
    else:
        raise AssertionError("duplicate leaf accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
