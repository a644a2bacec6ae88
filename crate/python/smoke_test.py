"""Smoke test for the pyrgh extension module.

Build and install first, for example:

    pip install maturin
    maturin develop --release -m crates/py/Cargo.toml

then run ``python python/smoke_test.py``.
"""

import json

import pyrgh


def main():
    g = pyrgh.RibbonGraph(
        sigma=[[0, 1, 2, 3], [4, 5, 6], [7, 8, 9]],
        alpha=[[0, 4], [3, 7], [5, 9]],
        tails=[1, 2, 6, 8],
        marks=[1, 2],
    )
    assert g.signature == (0, 2, 4, 2), g.signature
    assert g.dim == 5
    code, aut = g.canonical_code()
    assert aut == 1
    assert g.canonical().canonical_code() == (code, aut)
    assert pyrgh.RibbonGraph.from_json(g.to_json()) == g
    assert g.to_dot().startswith("graph ribbon {")

    assert pyrgh.validate('{"sigma":[[0,1,2]],"alpha":[[0,1],[1,2]],"tails":[],"marks":[]}') == [
        "NON_INVOLUTION"
    ]
    try:
        pyrgh.RibbonGraph.from_json('{"sigma":[[0,1]],"alpha":[],"tails":[0,1],"marks":[]}')
    except ValueError:
        pass
    else:
        raise AssertionError("two-tail disc accepted")

    pentagon = pyrgh.enumerate(0, 1, 5, 0)
    dims = {}
    for cell in pentagon:
        dims[cell["dim"]] = dims.get(cell["dim"], 0) + 1
    assert dims == {0: 5, 1: 5, 2: 1}, dims

    torus = pyrgh.enumerate(1, 1, 0, 0)
    assert sorted(c["aut"] for c in torus) == [4, 6]
    top = [c for c in torus if c["dim"] == 1][0]
    assert not top["orientable"]
    assert len(top["graph"].automorphisms()) == 4

    report = pyrgh.homology(0, 1, 6, 0, verify_d2=True)
    assert report["betti"] == {"0": 1}, report
    assert list(report) == [
        "signature", "mode", "cells", "generators", "betti", "torsion", "euler", "euler_orbifold"
    ]
    report = pyrgh.homology(1, 1, 0, 0, mode="rational")
    assert report["euler_orbifold"] == "-1/12"
    try:
        pyrgh.homology(1, 1, 0, 0, mode="integer")
    except ValueError as e:
        assert "MODE_ERROR" in str(e)
    else:
        raise AssertionError("integer mode accepted without tails")

    try:
        pyrgh.enumerate(0, 1, 8, 0, max_cells=10)
    except pyrgh.BudgetExceeded:
        pass
    else:
        raise AssertionError("budget ignored")

    lines = pyrgh.catalog(0, 1, 4, 0).splitlines()
    assert json.loads(lines[0])["signature"] == [0, 1, 4, 0]
    assert len(lines) == 4

    print("pyrgh smoke test passed")


if __name__ == "__main__":
    main()
