import pytest

import griddetect as g
from griddetect import ScenarioError


GOOD_YAML = """
schema: 1
channel: {p_c: 0.9, p_w: 0.1}
topology:
  kind: interior_square
  detect_probs: [0.9, 0.5, 0.3]
prior: {p_e: [0.1, 0.3, 0.5]}
loss_ratio: [5, 20]
sizes: [0.1, 0.05]
weight_mode: paper_approx
approx:
  weights: [5, 3, 2]
  alarm_probs: [0.8, 0.5, 0.35]
simulation: {n_trials: 5000, master_seed: 7}
"""


def parse(text):
    import yaml

    return g.parse_scenario(yaml.safe_load(text))


class TestParsing:
    def test_full_file(self):
        sf = parse(GOOD_YAML)
        assert sf.scenario.channel.p_c == 0.9
        assert sf.scenario.topology.counts == (1, 4, 4)
        assert sf.event_priors == (0.1, 0.3, 0.5)
        assert sf.loss_ratios == (5.0, 20.0)
        assert sf.sizes == (0.1, 0.05)
        assert sf.weight_mode == "paper_approx"
        assert sf.approx_weights == (5.0, 3.0, 2.0)
        assert sf.simulation.n_trials == 5000
        assert sf.mp_overrides() == {
            "weights": (5.0, 3.0, 2.0),
            "event_alarm_probs": (0.8, 0.5, 0.35),
        }

    def test_minimal_file(self):
        sf = parse(
            """
            schema: 1
            channel: {p_c: 0.8, p_w: 0.2}
            topology: {kind: hexagon_interior, detect_probs: [0.7, 0.3]}
            """
        )
        assert sf.event_priors == ()
        assert sf.loss_ratios == ()
        assert sf.weight_mode == "exact"
        assert sf.mp_overrides() == {}
        assert sf.simulation.n_trials == 100_000

    def test_scalar_sweeps(self):
        sf = parse(
            """
            schema: 1
            channel: {p_c: 0.8, p_w: 0.2}
            topology: {kind: hexagon_interior, detect_probs: [0.7, 0.3]}
            prior: {p_e: 0.25}
            loss_ratio: 5
            """
        )
        assert sf.event_priors == (0.25,)
        assert sf.loss_ratios == (5.0,)

    def test_custom_topology(self):
        sf = parse(
            """
            schema: 1
            channel: {p_c: 0.8, p_w: 0.2}
            topology:
              kind: custom
              classes:
                - {label: near, count: 2, p_detect: 0.6}
                - {label: far, count: 5, p_detect: 0.2}
            """
        )
        assert sf.scenario.topology.labels == ("near", "far")
        assert sf.scenario.topology.counts == (2, 5)

    def test_custom_topology_reordered(self):
        sf = parse(
            """
            schema: 1
            channel: {p_c: 0.8, p_w: 0.2}
            topology:
              kind: custom
              classes:
                - {count: 5, p_detect: 0.2}
                - {count: 2, p_detect: 0.6}
            """
        )
        assert sf.scenario.topology.detect_probs == (0.6, 0.2)


class TestRejections:
    def reject(self, text, match):
        with pytest.raises(ScenarioError, match=match):
            parse(text)

    def test_unknown_top_key(self):
        self.reject(
            GOOD_YAML + "\nchanel: {}\n", "unknown key.*chanel"
        )

    def test_unknown_nested_key(self):
        self.reject(
            """
            schema: 1
            channel: {p_c: 0.9, p_w: 0.1, p_x: 0.2}
            topology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}
            """,
            "channel.*unknown key.*p_x",
        )

    def test_missing_schema(self):
        self.reject(
            "channel: {p_c: 0.9, p_w: 0.1}\ntopology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}",
            "missing required key.*schema",
        )

    def test_wrong_schema_version(self):
        self.reject(
            "schema: 2\nchannel: {p_c: 0.9, p_w: 0.1}\ntopology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}",
            "schema",
        )

    def test_invalid_channel_named(self):
        self.reject(
            """
            schema: 1
            channel: {p_c: 0.1, p_w: 0.9}
            topology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}
            """,
            "channel: need p_w < p_c",
        )

    def test_prior_out_of_range_named(self):
        self.reject(
            """
            schema: 1
            channel: {p_c: 0.9, p_w: 0.1}
            topology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}
            prior: {p_e: [0.1, 1.0]}
            """,
            r"prior.p_e\[1\]",
        )

    def test_bad_size(self):
        self.reject(
            """
            schema: 1
            channel: {p_c: 0.9, p_w: 0.1}
            topology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}
            sizes: [0.1, 1.0]
            """,
            r"sizes\[1\]",
        )

    def test_paper_approx_needs_weights(self):
        self.reject(
            """
            schema: 1
            channel: {p_c: 0.9, p_w: 0.1}
            topology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}
            weight_mode: paper_approx
            """,
            "approx",
        )

    def test_approx_weight_count_checked(self):
        self.reject(
            GOOD_YAML.replace("weights: [5, 3, 2]", "weights: [5, 3]"),
            "approx.weights.*expected 3",
        )

    def test_topology_tie_named(self):
        self.reject(
            """
            schema: 1
            channel: {p_c: 0.9, p_w: 0.1}
            topology:
              kind: custom
              classes:
                - {count: 1, p_detect: 0.5}
                - {count: 2, p_detect: 0.5}
            """,
            "topology.*merge",
        )

    def test_non_number_probability(self):
        self.reject(
            """
            schema: 1
            channel: {p_c: high, p_w: 0.1}
            topology: {kind: interior_square, detect_probs: [0.9, 0.5, 0.3]}
            """,
            "channel.p_c",
        )


class TestLoadScenario:
    def test_load_from_disk(self, tmp_path):
        path = tmp_path / "scenario.yaml"
        path.write_text(GOOD_YAML)
        sf = g.load_scenario(path)
        assert sf.sizes == (0.1, 0.05)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="cannot read"):
            g.load_scenario(tmp_path / "nope.yaml")

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("schema: [unclosed")
        with pytest.raises(ScenarioError, match="invalid YAML"):
            g.load_scenario(path)

    def test_error_names_file(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("schema: 1\n")
        with pytest.raises(ScenarioError, match="bad.yaml"):
            g.load_scenario(path)

    def test_checked_in_scenarios_parse(self):
        from pathlib import Path

        root = Path(__file__).resolve().parents[1] / "scenarios"
        good = g.load_scenario(root / "good_network.yaml")
        weak = g.load_scenario(root / "weak_network.yaml")
        assert good.scenario.topology.detect_probs == (0.9, 0.5, 0.3)
        assert weak.approx_weights == (10.0, 5.0, 2.0)
        assert good.weight_mode == weak.weight_mode == "paper_approx"
