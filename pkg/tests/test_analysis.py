import pytest

from conftest import chain_net, fork_net
from nornet import (
    DomainError,
    SplitMix64,
    StarConfig,
    closed_form_posteriors,
    event_prob,
    fan_stats,
    level_reduce,
    predict_bias,
    fan_in_ratio,
    fan_in_ratio_two_disease,
    fan_out_ratio,
    star_config_from_network,
    star_network,
)


class TestFanStats:
    def test_fork_counts(self):
        stats = fan_stats(fork_net(p=(0.3, 0.5, 0.7), q=(0.4, 0.6)))
        assert stats.per_node == {"i0": (3, 2)}
        assert stats.max_fan_in == 3
        assert stats.max_fan_out == 2

    def test_two_level_network_has_no_entries(self):
        net = level_reduce(fork_net()).reduced
        stats = fan_stats(net)
        assert stats.per_node == {}
        assert stats.max_fan_in == 0
        assert stats.mean_fan_out == 0.0

    def test_chain_is_unit_fan(self):
        assert fan_stats(chain_net()).per_node == {"b": (1, 1)}


class TestIpsPathStats:
    def test_chain_lengths_per_disease(self):
        from nornet import Edge, Network, disease, finding, ips
        from nornet.analysis import ips_path_stats

        net = Network(
            "mixed-depth",
            [
                disease("d1", 0.1),
                disease("d2", 0.1),
                ips("b1"),
                ips("b2"),
                finding("f1", 0.0, 1),
                finding("f2", 0.0, 1),
            ],
            [
                Edge("d1", "b1", 0.5),
                Edge("b1", "b2", 0.5),
                Edge("b2", "f1", 0.5),
                Edge("d2", "f2", 0.5),
            ],
        )
        stats = ips_path_stats(level_reduce(net))
        assert stats["d1"] == (2.0, 2)   # one path with two intermediates
        assert stats["d2"] == (0.0, 0)   # direct edge


class TestPredictBias:
    @pytest.mark.parametrize(
        "m,n,label",
        [
            (1, 1, "exact"),
            (3, 1, "overestimate"),
            (1, 3, "underestimate"),
            (2, 2, "mixed"),
            (3, 2, "mixed"),
        ],
    )
    def test_labels(self, m, n, label):
        from nornet.analysis import FanStats

        stats = FanStats({"i": (m, n)}, m, n, float(m), float(n))
        assert predict_bias(stats) == {"i": label}


class TestRatioR1:
    def test_unit_fan_is_exact(self):
        rng = SplitMix64(41)
        for _ in range(20):
            cfg = StarConfig(
                p=(rng.uniform(0.05, 1.0),), q=(rng.uniform(0.05, 1.0),)
            )
            assert fan_in_ratio(cfg) == pytest.approx(1.0, abs=1e-14)

    def test_spot_value_two_diseases(self):
        cfg = StarConfig(p=(0.5, 0.5), q=(0.5,))
        assert fan_in_ratio(cfg) == pytest.approx(0.857142857, abs=1e-9)

    def test_spot_value_with_finding_leak(self):
        cfg = StarConfig(p=(0.5, 0.5), q=(0.5,), rho_f=(0.1,))
        assert fan_in_ratio(cfg) == pytest.approx(0.4 / 0.39375, abs=1e-12)

    def test_zero_denominator_rejected(self):
        with pytest.raises(DomainError):
            fan_in_ratio(StarConfig(p=(0.0,), q=(0.5,)))

    def test_two_disease_form(self):
        assert fan_in_ratio_two_disease(0.5, 0.5, 0.5) == pytest.approx(
            0.857142857, abs=1e-9
        )
        assert fan_in_ratio_two_disease(0.3, 0.8, 1.0) == pytest.approx(1.0)
        assert fan_in_ratio_two_disease(0.6, 0.0, 0.4) == pytest.approx(1.0)

    def test_two_disease_matches_exact_form_and_is_symmetric(self):
        rng = SplitMix64(43)
        for _ in range(50):
            p1, p2, q = (rng.uniform(0.05, 0.95) for _ in range(3))
            via_exact = fan_in_ratio(StarConfig(p=(p1, p2), q=(q,)))
            assert fan_in_ratio_two_disease(p1, p2, q) == pytest.approx(
                via_exact, rel=1e-12
            )
            assert fan_in_ratio_two_disease(p1, p2, q) == pytest.approx(
                fan_in_ratio_two_disease(p2, p1, q), rel=1e-14
            )

    def test_leak_free_ratio_never_exceeds_one(self):
        rng = SplitMix64(47)
        for _ in range(100):
            m = rng.randint(1, 4)
            p = tuple(rng.uniform(0.05, 1.0) for _ in range(m))
            q = rng.uniform(0.05, 1.0)
            ratio = fan_in_ratio(StarConfig(p=p, q=(q,)))
            assert ratio <= 1.0 + 1e-12
            if m >= 2 and q < 1.0:
                assert ratio < 1.0
        # equality cases: m == 1, q == 1, or at most one positive eta
        assert fan_in_ratio(StarConfig(p=(0.4, 0.7), q=(1.0,))) == pytest.approx(1.0)

    def test_agrees_with_inference_likelihood_ratio(self):
        rng = SplitMix64(53)
        for _ in range(10):
            m = rng.randint(1, 3)
            cfg = StarConfig(
                p=tuple(rng.uniform(0.1, 0.9) for _ in range(m)),
                q=(rng.uniform(0.1, 0.9),),
                priors=tuple(rng.uniform(0.1, 0.5) for _ in range(m)),
            )
            three = star_network(cfg)
            two = level_reduce(three).reduced
            cond = {f"d{k + 1:02d}": True for k in range(m)}
            lik3 = event_prob(three, {**cond, "f01": True}) / event_prob(three, cond)
            lik2 = event_prob(two, {**cond, "f01": True}) / event_prob(two, cond)
            assert fan_in_ratio(cfg) == pytest.approx(lik3 / lik2, abs=1e-10)


class TestRatioR2:
    def test_single_finding_chain_is_exact(self):
        exact, approx = fan_out_ratio(0.7, [0.4], [0.0])
        assert exact == pytest.approx(1.0)
        assert approx == pytest.approx(1.0)

    def test_spot_value_transparent_edges(self):
        exact, approx = fan_out_ratio(0.5, [1.0, 1.0, 1.0], [0.0, 0.0, 0.0])
        assert exact == pytest.approx(4.0)
        assert approx == pytest.approx(4.0)

    def test_spot_value_small_leaks(self):
        exact, approx = fan_out_ratio(0.5, [0.8, 0.9], [0.01, 0.01])
        assert exact == pytest.approx(2.000277778, abs=1e-6)
        assert approx == pytest.approx(2.0)

    def test_zero_denominator_rejected(self):
        with pytest.raises(DomainError):
            fan_out_ratio(0.0, [0.5], [0.0])

    def test_exact_at_least_one_when_leak_free(self):
        rng = SplitMix64(59)
        for _ in range(100):
            n = rng.randint(1, 4)
            p = rng.uniform(0.05, 1.0)
            q = [rng.uniform(0.05, 1.0) for _ in range(n)]
            exact, _ = fan_out_ratio(p, q, [0.0] * n)
            assert exact >= 1.0 - 1e-12

    def test_leak_free_exact_equals_approx_for_any_q(self):
        # with zero leaks the q terms cancel: exact is 1 / p**(n-1) exactly
        rng = SplitMix64(67)
        for _ in range(20):
            n = rng.randint(1, 4)
            p = rng.uniform(0.1, 0.9)
            q = [rng.uniform(0.1, 1.0) for _ in range(n)]
            exact, approx = fan_out_ratio(p, q, [0.0] * n)
            assert exact == pytest.approx(approx, rel=1e-12)

    def test_approx_error_shrinks_as_leaks_shrink(self):
        p = 0.4
        gap_big_leak = abs(fan_out_ratio(p, [0.6, 0.6], [0.05, 0.05])[0] - 1 / p)
        gap_small_leak = abs(fan_out_ratio(p, [0.6, 0.6], [1e-4, 1e-4])[0] - 1 / p)
        assert gap_small_leak < gap_big_leak
        # and a higher q damps the leak-driven error too
        gap_high_q = abs(fan_out_ratio(p, [0.99, 0.99], [0.05, 0.05])[0] - 1 / p)
        assert gap_high_q < gap_big_leak

    def test_agrees_with_inference_likelihood_ratio(self):
        rng = SplitMix64(61)
        for _ in range(10):
            n = rng.randint(2, 4)
            cfg = StarConfig(
                p=(rng.uniform(0.2, 0.9),),
                q=tuple(rng.uniform(0.2, 0.9) for _ in range(n)),
                rho_f=tuple(0.0 for _ in range(n)),
            )
            three = star_network(cfg)
            two = level_reduce(three).reduced
            cond = {"d01": True}
            event = {f"f{j + 1:02d}": True for j in range(n)}
            lik3 = event_prob(three, {**cond, **event}) / event_prob(three, cond)
            lik2 = event_prob(two, {**cond, **event}) / event_prob(two, cond)
            exact, _ = fan_out_ratio(cfg.p[0], list(cfg.q), list(cfg.rho_f))
            assert exact == pytest.approx(lik3 / lik2, rel=1e-10)


class TestClosedFormPosteriors:
    def test_unit_factor_spot_values(self):
        cfg = StarConfig(p=(0.5, 0.5), q=(0.5,))
        three, two = closed_form_posteriors(cfg, prior_over_d=1.0, p_f=1.0)
        assert three == pytest.approx(0.375)
        assert two == pytest.approx(0.4375)
        assert three / two == pytest.approx(fan_in_ratio(cfg), rel=1e-12)

    def test_unit_fan_leak_free_posteriors_coincide(self):
        cfg = StarConfig(p=(0.6,), q=(0.7,))
        three, two = closed_form_posteriors(cfg, prior_over_d=0.3, p_f=0.5)
        assert three == pytest.approx(two, rel=1e-14)

    def test_fan_out_required(self):
        with pytest.raises(DomainError):
            closed_form_posteriors(
                StarConfig(p=(0.5,), q=(0.5, 0.5), rho_f=(0.0, 0.0)), 1.0, 1.0
            )


class TestStarConfig:
    def test_mixed_fan_rejected(self):
        with pytest.raises(DomainError):
            StarConfig(p=(0.5, 0.5), q=(0.5, 0.5), rho_f=(0.0, 0.0))

    def test_network_round_trip(self):
        cfg = StarConfig(
            p=(0.3, 0.8), q=(0.6,), rho_i=0.05, rho_f=(0.02,), priors=(0.1, 0.4)
        )
        back = star_config_from_network(star_network(cfg))
        assert back == cfg

    def test_chain_recovers_as_unit_star(self):
        cfg = star_config_from_network(chain_net(prior=0.3, p=0.8, q=0.9, rho_c=0.1))
        assert cfg is not None
        assert (cfg.fan_in, cfg.fan_out) == (1, 1)
        assert cfg.p == (0.8,)
        assert cfg.q == (0.9,)

    def test_unanalyzable_shapes_return_none(self):
        from nornet import Edge, Network, disease, finding, ips

        # mixed fan-in and fan-out has no closed form
        assert star_config_from_network(fork_net(p=(0.3, 0.5), q=(0.4, 0.6))) is None
        # more than one hub is not a star
        two_hub = Network(
            "two-hub",
            [disease("d", 0.1), ips("b1"), ips("b2"), finding("f", 0.0, 1)],
            [Edge("d", "b1", 0.5), Edge("d", "b2", 0.5), Edge("b1", "f", 0.5),
             Edge("b2", "f", 0.5)],
        )
        assert star_config_from_network(two_hub) is None
        # a direct disease->finding edge bypassing the hub disqualifies it
        bypass = Network(
            "bypass",
            [disease("d", 0.1), ips("b"), finding("f", 0.0, 1)],
            [Edge("d", "b", 0.5), Edge("b", "f", 0.5), Edge("d", "f", 0.5)],
        )
        assert star_config_from_network(bypass) is None
