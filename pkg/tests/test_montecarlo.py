import dataclasses
import math
import random

import numpy as np
import pytest

from rislink.channel import ArrayGeometry
from rislink.montecarlo import aggregate, config_digest, run_experiment
from rislink.scenarios import PRESETS


def tiny_fig3(**overrides):
    cfg = PRESETS["fig3"]()
    base = dict(ris_sweep=(ArrayGeometry.upa(4, 4), ArrayGeometry.upa(4, 8)),
                nb_geometry=ArrayGeometry.ula(4), trials=30)
    base.update(overrides)
    return dataclasses.replace(cfg, **base)


class TestAggregate:
    def test_single_sample(self):
        assert aggregate([5.0]) == (5.0, 0.0)

    def test_two_samples(self):
        mean, err = aggregate([1.0, 3.0])
        assert mean == 2.0
        # sample std sqrt(2), over sqrt(2) samples
        assert err == pytest.approx(1.0)

    def test_hand_arithmetic(self):
        mean, err = aggregate([0.0, 0.0, 0.0, 4.0])
        assert mean == 1.0
        # sample std 2 over sqrt(4)
        assert err == pytest.approx(1.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_permutation_stable(self):
        rng = random.Random(7)
        samples = [rng.uniform(0, 1e6) for _ in range(500)]
        base = aggregate(samples)
        for _ in range(5):
            rng.shuffle(samples)
            assert aggregate(samples) == base


class TestRunExperiment:
    def test_single_trial_stderr_zero(self):
        cs = run_experiment(tiny_fig3(trials=1))
        for c in cs.curves:
            assert c.trials == 1
            assert all(e == 0.0 for e in c.stderr)

    def test_same_seed_identical(self):
        a = run_experiment(tiny_fig3())
        b = run_experiment(tiny_fig3())
        assert a == b

    def test_different_seed_differs(self):
        a = run_experiment(tiny_fig3(seed=1))
        b = run_experiment(tiny_fig3(seed=2))
        assert a != b

    def test_workers_do_not_change_results(self):
        serial = run_experiment(tiny_fig3(trials=40), workers=1)
        threaded = run_experiment(tiny_fig3(trials=40), workers=4)
        assert serial == threaded

    def test_stderr_shrinks_with_trials(self):
        # doubling trials shrinks the standard error by about 1/sqrt(2)
        # and the means stay within each other's confidence intervals
        small = run_experiment(tiny_fig3(trials=400, normalize=False))
        big = run_experiment(tiny_fig3(trials=800, normalize=False))
        label = "noncoherent-jt (sam)"
        c_small = next(c for c in small.curves if c.label == label)
        c_big = next(c for c in big.curves if c.label == label)
        for ms, es, mb, eb in zip(c_small.mean, c_small.stderr, c_big.mean, c_big.stderr):
            assert eb / es == pytest.approx(1 / math.sqrt(2), abs=0.15)
            assert abs(ms - mb) <= 3 * (es + eb)

    def test_digest_identifies_config(self):
        assert config_digest(tiny_fig3()) == config_digest(tiny_fig3())
        assert config_digest(tiny_fig3()) != config_digest(tiny_fig3(seed=5))
        assert config_digest(tiny_fig3()) != config_digest(tiny_fig3(trials=31))

    def test_curves_sorted_by_label_then_x(self):
        cs = run_experiment(tiny_fig3())
        labels = [c.label for c in cs.curves]
        assert labels == sorted(labels)
        for c in cs.curves:
            assert list(c.x) == sorted(c.x)

    def test_normalization_peaks_at_one(self):
        cs = run_experiment(tiny_fig3(trials=50))
        peak = max(m for c in cs.curves for m in c.mean)
        assert peak == pytest.approx(1.0)

    def test_normalization_preserves_ratios(self):
        raw = run_experiment(tiny_fig3(trials=50, normalize=False))
        norm = run_experiment(tiny_fig3(trials=50, normalize=True))
        raw_c = {c.label: c for c in raw.curves}
        norm_c = {c.label: c for c in norm.curves}
        label_a, label_b = "coherent-jt (ncm)", "noncoherent-jt (sam)"
        for i in range(2):
            assert (norm_c[label_a].mean[i] / norm_c[label_b].mean[i]
                    == pytest.approx(raw_c[label_a].mean[i] / raw_c[label_b].mean[i], rel=1e-12))

    def test_invalid_workers(self):
        with pytest.raises(ValueError):
            run_experiment(tiny_fig3(), workers=0)
