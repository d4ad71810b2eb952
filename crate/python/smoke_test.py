"""Smoke test for the blockdeg_py extension module.

Build and install first:
    pip install maturin
    maturin develop -m crates/py/Cargo.toml   # or: pip install --no-build-isolation ./crates/py
Then run:
    python python/smoke_test.py
"""

import blockdeg_py as bd


def main():
    assert bd.degree([4, 2, 1]) == 35
    assert bd.degree([25]) == 1
    assert bd.p_core([6, 3, 1], 3) == [2, 1, 1]
    assert bd.p_valuation_of_degree([3, 1, 1, 1, 1], 5) == 1
    assert not bd.is_p_prime([3, 1, 1, 1, 1], 5)

    rec = bd.census(7, 5, group="an")
    assert {"1", "6", "14"} <= set(rec["ext_degrees"]), rec["ext_degrees"]

    f = bd.cyclo_factor("q^2*(q^4-1)/(q-1)", q=2, p=5)
    assert f["value"] == "60" and f["p_valuation"] == 1

    assert bd.symbol_rank_defect("0,1,2,3|1,2,3,4") == (4, 0)
    assert bd.symbol_e_core("3|∅", 2) == "1|∅"

    rep = bd.verify_macdonald(max_n=12, primes=[2, 3, 5])
    assert rep["schema"] == "blockdeg/1" and rep["violations"] == []
    rep = bd.verify_d4(q_max=16, p_max=13, jobs=2)
    assert rep["violations"] == []

    try:
        bd.degree([1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("non-decreasing partition accepted")
    print("blockdeg_py smoke test: ok")


if __name__ == "__main__":
    main()
