import pytest

import oracle
from conftest import chain_net, fork_net
from nornet import (
    Assignment,
    DomainError,
    Edge,
    EvidenceError,
    IncompleteAssignmentError,
    Network,
    SplitMix64,
    disease,
    event_prob,
    finding,
    generate_network,
    GeneratorConfig,
    joint_prob,
    marginal,
    posterior,
)


class TestJointProb:
    def test_deterministic_chain_all_present(self):
        net = chain_net(prior=0.5, p=1.0, q=1.0, rho_b=0.0, rho_c=0.0)
        assert joint_prob(net, {"a": True, "b": True, "c": True}) == pytest.approx(0.5)

    def test_forced_node_absent_gives_zero(self):
        net = chain_net(prior=0.5, p=1.0, q=1.0, rho_b=0.0, rho_c=0.0)
        assert joint_prob(net, {"a": True, "b": False, "c": False}) == 0.0

    def test_two_disease_one_finding_product(self):
        net = Network(
            "pair",
            [disease("d1", 0.1), disease("d2", 0.2), finding("f", 0.05, 1)],
            [Edge("d1", "f", 0.4), Edge("d2", "f", 0.5)],
        )
        value = joint_prob(net, {"d1": True, "d2": True, "f": True})
        assert value == pytest.approx(0.1 * 0.2 * (1 - 0.95 * 0.6 * 0.5))
        assert value == pytest.approx(0.0143)

    def test_partial_assignment_rejected(self):
        net = chain_net()
        with pytest.raises(IncompleteAssignmentError):
            joint_prob(net, {"a": True})

    def test_matches_oracle_on_random_worlds(self):
        net = fork_net()
        rng = SplitMix64(3)
        for _ in range(20):
            state = {nid: rng.next_float() < 0.5 for nid in net.node_ids}
            assert joint_prob(net, state) == pytest.approx(
                oracle.world_prob(net, state), abs=1e-15
            )


class TestPosterior:
    def test_empty_evidence_returns_priors(self):
        net = fork_net(priors=(0.1, 0.2, 0.3))
        result = posterior(net, {})
        assert result.posteriors["d0"] == pytest.approx(0.1, abs=1e-12)
        assert result.posteriors["d1"] == pytest.approx(0.2, abs=1e-12)
        assert result.posteriors["d2"] == pytest.approx(0.3, abs=1e-12)
        assert result.evidence_likelihood == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_diseases_get_equal_posteriors(self):
        net = Network(
            "sym",
            [disease("d1", 0.15), disease("d2", 0.15), finding("f", 0.01, 1)],
            [Edge("d1", "f", 0.6), Edge("d2", "f", 0.6)],
        )
        result = posterior(net, {"f": True})
        assert result.posteriors["d1"] == pytest.approx(result.posteriors["d2"], abs=1e-14)

    def test_chain_posterior_frozen_oracle_value(self):
        # brute force over the 4 hidden (a, b) worlds with c present:
        #   P(c) = 0.3*0.8*0.91 + 0.3*0.2*0.1 + 0.7*0.1 = 0.2944
        #   P(a and c) = 0.2244, so P(a | c) = 561/736
        net = chain_net(prior=0.3, p=0.8, q=0.9, rho_b=0.0, rho_c=0.1)
        result = posterior(net, {"c": True})
        assert result.posteriors["a"] == pytest.approx(0.7622282608695652, abs=1e-12)
        assert result.evidence_likelihood == pytest.approx(0.2944, abs=1e-12)
        assert result.posteriors["a"] == pytest.approx(
            oracle.posterior(net, "a", {"c": True}), abs=1e-12
        )

    def test_two_disease_star_likelihood_ratio_matches_closed_form(self):
        # fan-in 2 star, both diseases conditioned present, zero leaks:
        # P3(f|d)/P2(f|d) = (p1+p2-p1p2) / (p1+p2-q p1p2) = 0.75/0.875
        three = fork_net(p=(0.5, 0.5), q=(0.5,), rho_i=0.0, rho_f=(0.0,))
        cond = {"d0": True, "d1": True}
        p3 = oracle.conditional(three, {"f0": True}, cond)
        p3_pkg = event_prob(three, {**cond, "f0": True}) / event_prob(three, cond)
        assert p3_pkg == pytest.approx(p3, abs=1e-14)
        two = Network(
            "two",
            [disease("d0", 0.2), disease("d1", 0.2), finding("f0", 0.0, 1)],
            [Edge("d0", "f0", 0.25), Edge("d1", "f0", 0.25)],
        )
        p2 = event_prob(two, {**cond, "f0": True}) / event_prob(two, cond)
        assert p3_pkg / p2 == pytest.approx(0.857142857, abs=1e-9)

    def test_conjunction_posterior(self):
        net = fork_net(p=(0.5, 0.5), q=(0.5,), priors=(0.3, 0.3))
        result = posterior(net, {"f0": True}, conjunction=["d0", "d1"])
        expected = oracle.event_prob(net, {"d0": True, "d1": True, "f0": True})
        expected /= oracle.event_prob(net, {"f0": True})
        assert result.conjunction == pytest.approx(expected, abs=1e-12)

    def test_evidence_on_non_finding_rejected(self):
        net = chain_net()
        with pytest.raises(DomainError):
            posterior(net, {"a": True})
        with pytest.raises(DomainError):
            posterior(net, {"b": True})

    def test_impossible_evidence_is_error(self):
        # leak-free finding with absent-only cause cannot be present
        net = Network(
            "impossible",
            [disease("d", 0.0), finding("f", 0.0, 1)],
            [Edge("d", "f", 0.9)],
        )
        with pytest.raises(EvidenceError):
            posterior(net, {"f": True})

    def test_positive_descendant_never_decreases_single_parent_posterior(self):
        rng = SplitMix64(29)
        for _ in range(25):
            net = chain_net(
                prior=rng.uniform(0.05, 0.9),
                p=rng.uniform(0.1, 1.0),
                q=rng.uniform(0.1, 1.0),
                rho_b=0.0,
                rho_c=0.0,
            )
            base = posterior(net, {}).posteriors["a"]
            bumped = posterior(net, {"c": True}).posteriors["a"]
            assert bumped >= base - 1e-12


class TestMarginal:
    def test_disease_marginal_is_prior(self):
        net = chain_net(prior=0.3)
        assert marginal(net, "a") == pytest.approx(0.3, abs=1e-12)

    def test_orphan_finding_marginal_is_leak(self):
        net = Network("orphan", [disease("d", 0.5), finding("f", 0.25, 1)], [])
        assert marginal(net, "f") == pytest.approx(0.25, abs=1e-12)

    def test_deterministic_chain_propagates(self):
        net = chain_net(prior=0.5, p=1.0, q=1.0, rho_b=0.0, rho_c=0.0)
        assert marginal(net, "c") == pytest.approx(0.5, abs=1e-12)

    def test_unknown_node_rejected(self):
        with pytest.raises(DomainError):
            marginal(chain_net(), "ghost")

    def test_matches_oracle_everywhere(self):
        net = fork_net(rho_i=0.02, rho_f=(0.01, 0.03))
        exact = oracle.all_marginals(net)
        for nid in net.node_ids:
            assert marginal(net, nid) == pytest.approx(exact[nid], abs=1e-12)


class TestEngineAgreement:
    def _random_net(self, seed):
        return generate_network(
            GeneratorConfig(
                n_diseases=2,
                n_ips=3,
                n_findings=6,
                fan_in_range=(1, 2),
                fan_out_range=(1, 3),
                ips_chain_prob=0.3,
                leak_range=(0.0, 0.1),
                seed=seed,
            )
        )

    def test_enumeration_and_elimination_agree(self):
        for seed in range(8):
            net = self._random_net(seed)
            rng = SplitMix64(seed + 1000)
            findings = [n.id for n in net.nodes if n.phase is not None]
            evidence = {
                fid: rng.next_float() < 0.5
                for fid in findings
                if rng.next_float() < 0.5
            }
            try:
                enum_result = posterior(net, evidence, method="enumeration")
            except EvidenceError:
                continue
            elim_result = posterior(net, evidence, method="elimination")
            assert enum_result.evidence_likelihood == pytest.approx(
                elim_result.evidence_likelihood, rel=1e-10
            )
            for did in enum_result.posteriors:
                assert enum_result.posteriors[did] == pytest.approx(
                    elim_result.posteriors[did], abs=1e-10
                )

    def test_both_engines_match_oracle(self):
        net = self._random_net(99)
        evidence = {"f001": True, "f003": False}
        expected = {
            did: oracle.posterior(net, did, evidence)
            for did in ("d001", "d002")
        }
        for method in ("enumeration", "elimination"):
            result = posterior(net, evidence, method=method)
            for did, want in expected.items():
                assert result.posteriors[did] == pytest.approx(want, abs=1e-11)

    def test_normalization_split_over_unobserved_finding(self):
        net = self._random_net(5)
        base = {"f001": True}
        with_f2 = event_prob(net, {**base, "f002": True})
        without_f2 = event_prob(net, {**base, "f002": False})
        assert with_f2 + without_f2 == pytest.approx(
            event_prob(net, base), abs=1e-12
        )

    def test_max_parent_cap_is_clear_error(self):
        n = 13
        nodes = [disease(f"d{k:02d}", 0.1) for k in range(n)]
        nodes.append(finding("f", 0.0, 1))
        edges = [Edge(f"d{k:02d}", "f", 0.3) for k in range(n)]
        net = Network("wide", nodes, edges)
        with pytest.raises(DomainError, match="parents"):
            posterior(net, {"f": True}, method="elimination")
        # enumeration has no such cap
        result = posterior(net, {"f": True}, method="enumeration")
        assert 0.0 < result.evidence_likelihood < 1.0

    def test_auto_dispatch_crosses_threshold(self):
        net = self._random_net(7)
        r_auto = posterior(net, {"f001": True}, enumeration_threshold=0)
        r_enum = posterior(net, {"f001": True}, method="enumeration")
        for did in r_auto.posteriors:
            assert r_auto.posteriors[did] == pytest.approx(
                r_enum.posteriors[did], abs=1e-10
            )


class TestEventProb:
    def test_total_event_is_joint(self):
        net = chain_net()
        state = {"a": True, "b": False, "c": True}
        assert event_prob(net, state) == pytest.approx(
            joint_prob(net, state), abs=1e-15
        )

    def test_empty_event_is_one(self):
        assert event_prob(chain_net(), {}) == pytest.approx(1.0, abs=1e-12)

    def test_accepts_assignment_objects(self):
        net = chain_net()
        assert event_prob(net, Assignment({"c": True})) == pytest.approx(
            oracle.event_prob(net, {"c": True}), abs=1e-14
        )

    def test_elimination_with_full_assignment_equals_joint(self):
        # nothing hidden: the elimination engine degenerates to a product
        net = chain_net()
        state = {"a": True, "b": True, "c": False}
        assert event_prob(net, state, method="elimination") == pytest.approx(
            joint_prob(net, state), abs=1e-15
        )

    def test_engines_agree_on_partial_events(self):
        net = fork_net(rho_i=0.03, rho_f=(0.02, 0.05))
        for event in ({"f0": True}, {"d1": True, "f1": False}, {"i0": True}):
            enum = event_prob(net, event, method="enumeration")
            elim = event_prob(net, event, method="elimination")
            assert elim == pytest.approx(enum, rel=1e-12)
