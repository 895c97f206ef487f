"""Quick check of the prodlab extension module."""

import prodlab
from prodlab import Word


def main():
    w = Word("0^2.1^-3.0^-5")
    assert str(w) == "0^2.1^-3.0^-5"
    assert w.mu(0) == 5 and w.mu(1) == 3
    assert w.eta() == 3
    assert str(w * w.inv()) == "e"
    assert len(Word("0.1") ** 3) == 6
    assert w.delta(0) == -3

    assert prodlab.extrema_count([1, 0, 3, 2, 5, 4]) == 6
    branch, _, eta_pow, held = prodlab.eta_power_bounds(Word("0.1"), 5)
    assert branch == "LongCore" and held and eta_pow >= 10

    rows = prodlab.zigzag_demo(50)
    assert all(eta == 2 * l + 2 for l, eta, _ in rows)

    trace = prodlab.run_experiment(
        'group = "H"\nsequence = "gy"\nhorizon = 24\nwindow = 24\n'
        'permutation = "zigzag"\nmultiplier = { tail = 1 }\n'
    )
    assert trace.verdict == "DivergenceWitness"

    trace = prodlab.run_experiment(
        'group = "padic"\nsequence = "powers"\nhorizon = 30\ndepth = 8\n'
        "multiplier = { tail = 1 }\n"
    )
    assert trace.cauchy and trace.k_table() == list(range(9))

    assert prodlab.perm_cycle_demo(3)[3] == (3, "(0 1 2 3 4)", True)
    assert all(v == 0 for _, _, v in prodlab.selftest(seed=1, cases=20))

    try:
        Word("0^")
    except ValueError:
        pass
    else:
        raise AssertionError("bad literal accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
