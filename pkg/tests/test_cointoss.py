import math

import numpy as np
import pytest

from qcrypt_lab import cointoss
from qcrypt_lab.cointoss import (CoinOutcome, PartyStrategy, TossReport, UnsupportedStrategy,
                                 bias_report, run_ambainis, run_colbeck)

from .oracles import helstrom_value

H = PartyStrategy.honest()
C0, C1 = PartyStrategy.cheat_towards(0), PartyStrategy.cheat_towards(1)

STRATEGY_PAIRS = [
    ("ambainis", H, H), ("ambainis", H, C0), ("ambainis", H, C1),
    ("colbeck", H, H), ("colbeck", C0, H), ("colbeck", C1, H),
    ("colbeck", H, C0), ("colbeck", H, C1),
]


def run(protocol, a, b, mode="analytic"):
    return (run_ambainis if protocol == "ambainis" else run_colbeck)(a, b, mode)


class TestAmbainis:
    def test_honest(self):
        r = run_ambainis(H, H)
        assert (r.p_zero, r.p_one, r.p_abort) == pytest.approx((0.5, 0.5, 0.0), abs=1e-12)

    def test_bob_cheat_matches_oracle(self):
        s = 1 / math.sqrt(2)
        states = {(b, x): np.array([s, 0, 0]) + (1 if x == 0 else -1) * s * np.eye(3)[1 + b]
                  for b in (0, 1) for x in (0, 1)}
        rho = [sum(np.outer(states[b, x], states[b, x]) for x in (0, 1)) / 2 for b in (0, 1)]
        oracle = helstrom_value(0.5, *rho)
        assert oracle == pytest.approx(0.75, abs=1e-12)
        assert run_ambainis(H, C0).p_zero == pytest.approx(oracle, abs=1e-9)
        assert run_ambainis(H, C1).p_one == pytest.approx(oracle, abs=1e-9)

    def test_alice_cheat_unsupported(self):
        with pytest.raises(UnsupportedStrategy):
            run_ambainis(C0, H)

    def test_both_cheat_rejected(self):
        with pytest.raises(UnsupportedStrategy):
            run_colbeck(C0, C1)


class TestColbeck:
    def test_honest(self):
        r = run_colbeck(H, H)
        assert (r.p_zero, r.p_one, r.p_abort) == pytest.approx((0.5, 0.5, 0.0), abs=1e-12)

    def test_alice_cheat(self):
        r = run_colbeck(C0, H)
        assert r.p_zero == pytest.approx(0.75, abs=1e-12)
        assert r.detection_prob > 0

    def test_bob_cheat_undetected(self):
        r = run_colbeck(H, C0)
        assert r.p_zero == pytest.approx(0.75, abs=1e-12)
        assert r.detection_prob == 0.0

    def test_functional_maximum(self):
        value, point = cointoss.maximize_colbeck_functional()
        assert value == pytest.approx(0.75, abs=1e-6)
        np.testing.assert_allclose(point, [math.sqrt(2 / 3), 1 / math.sqrt(6), 1 / math.sqrt(6)],
                                   atol=1e-4)

    def test_functional_grid_oracle(self):
        best = 0.0
        for t in np.linspace(0, math.pi / 2, 181):
            for u in np.linspace(0, math.pi / 2, 181):
                a = (math.cos(t), math.sin(t) * math.cos(u), math.sin(t) * math.sin(u))
                best = max(best, cointoss.colbeck_success_functional(*a))
        assert best == pytest.approx(0.75, abs=1e-4)
        assert best <= 0.75 + 1e-12

    def test_cheat_state_shape(self):
        v = cointoss.colbeck_alice_cheat_state(0)
        assert v.shape == (16,) and abs(np.vdot(v, v) - 1) < 1e-12


class TestReports:
    def test_bias_table_colbeck(self):
        rows = bias_report("colbeck")
        for row in rows[:-1]:
            assert row["bias"] == pytest.approx(0.25, abs=1e-12)
        assert rows[-1]["bias"] == pytest.approx(0.20711, abs=1e-5)

    def test_bias_table_ambainis(self):
        rows = bias_report("ambainis")
        assert {r["party"] for r in rows} == {"bob", "reference"}
        assert all(r["bias"] == pytest.approx(0.25) for r in rows if r["party"] == "bob")

    def test_unknown_protocol(self):
        with pytest.raises(ValueError):
            bias_report("blum")

    def test_report_validation(self):
        with pytest.raises(ValueError):
            TossReport(0.6, 0.6, 0.0, 0.0)

    @pytest.mark.parametrize("protocol,a,b", STRATEGY_PAIRS)
    def test_sampled_matches_analytic(self, protocol, a, b):
        exact = run(protocol, a, b)
        sampled = run(protocol, a, b, (100_000, 11))
        for k in range(3):
            sigma = math.sqrt(max(exact.p(k) * (1 - exact.p(k)), 1e-12) / 100_000)
            assert abs(sampled.p(k) - exact.p(k)) <= 3 * sigma + 1e-12

    def test_sampled_is_reproducible(self):
        assert run_colbeck(C0, H, (5000, 3)) == run_colbeck(C0, H, (5000, 3))

    def test_threads_do_not_change_results(self, monkeypatch):
        serial = run_colbeck(C0, H, (50_000, 5))
        monkeypatch.setenv("QCRYPT_LAB_THREADS", "4")
        assert run_colbeck(C0, H, (50_000, 5)) == serial

    def test_outcome_enum(self):
        assert int(CoinOutcome.ABORT) == 2
