import json

import pytest

from plcp.cli import (
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    ConfigError,
    ExperimentConfig,
    _parse_flag_overrides,
    config_from_metadata,
    main,
    metadata_lines,
    parse_config,
    run,
)


def test_parse_config_defaults_and_types():
    cfg = parse_config("experiment=sample\nmu=2.5\nn=50\nfigures=false\n")
    assert cfg.experiment == "sample"
    assert cfg.mu == 2.5
    assert cfg.n == 50
    assert cfg.figures is False
    assert cfg.lambda_l == 1.0  # default


def test_parse_config_comments_and_blank_lines():
    cfg = parse_config("# a comment\n\nexperiment=gqp  # trailing comment\nn=3\n")
    assert cfg.experiment == "gqp"
    assert cfg.n == 3


def test_parse_config_width_sweep_list():
    cfg = parse_config("experiment=typical-cell\nwidth_sweep=10,100,1000\n")
    assert cfg.width_sweep == (10.0, 100.0, 1000.0)


def test_parse_config_error_messages_name_the_key():
    with pytest.raises(ConfigError, match="unknown key: muu"):
        parse_config("experiment=sample\nmuu=1\n")
    with pytest.raises(ConfigError, match="malformed value for n"):
        parse_config("experiment=sample\nn=many\n")
    with pytest.raises(ConfigError, match="experiment"):
        parse_config("mu=1\n")
    with pytest.raises(ConfigError, match="key=value"):
        parse_config("experiment=sample\njust words\n")


def test_validation_rules():
    with pytest.raises(ConfigError, match="mu must be positive"):
        parse_config("experiment=sample\nmu=-2\n")
    with pytest.raises(ConfigError, match="orientation"):
        parse_config("experiment=sample\norientation=diagonal\n")
    with pytest.raises(ConfigError, match="grid_max"):
        parse_config("experiment=nn-cdf\ngrid_min=2\ngrid_max=1\n")
    with pytest.raises(ConfigError, match="experiment must be one of"):
        ExperimentConfig(experiment="bogus").validate()


def test_flag_overrides_win_over_file_values():
    cfg = parse_config("experiment=sample\nmu=1\n", {"mu": "4", "n": "7"})
    assert cfg.mu == 4.0
    assert cfg.n == 7


def test_parse_flag_overrides_forms():
    assert _parse_flag_overrides(["--mu", "2"]) == {"mu": "2"}
    assert _parse_flag_overrides(["--mu=2", "--grid-count", "9"]) == {
        "mu": "2",
        "grid_count": "9",
    }
    with pytest.raises(ConfigError, match="needs a value"):
        _parse_flag_overrides(["--mu"])
    with pytest.raises(ConfigError, match="unexpected argument"):
        _parse_flag_overrides(["mu=2"])


def test_main_exit_codes(tmp_path):
    assert main(["sample", "--mu", "-1", "--out-dir", str(tmp_path)]) == EXIT_USAGE
    assert main(["sample", "--bogus-key", "1"]) == EXIT_USAGE
    # Manhattan orientation has no closed-form curve to compare against
    assert (
        main(
            [
                "nn-cdf",
                "--orientation", "manhattan",
                "--n", "10",
                "--figures", "false",
                "--out-dir", str(tmp_path),
            ]
        )
        == EXIT_NUMERIC
    )


def test_sample_experiment_writes_artifacts(tmp_path):
    rc = main(
        [
            "sample",
            "--n", "1",
            "--obs-radius", "2",
            "--figures", "false",
            "--out-dir", str(tmp_path),
        ]
    )
    assert rc == EXIT_OK
    text = (tmp_path / "realization.csv").read_text()
    assert text.startswith("# plcp=")
    assert "# experiment=sample" in text
    assert "section,lines" in text and "section,points" in text


def test_nn_cdf_experiment_and_json_metadata(tmp_path):
    rc = main(
        [
            "nn-cdf",
            "--n", "300",
            "--grid-count", "12",
            "--figures", "false",
            "--out-dir", str(tmp_path),
        ]
    )
    assert rc == EXIT_OK
    doc = json.loads((tmp_path / "nn_cdf.json").read_text())
    assert doc["passed"] is True
    assert doc["ks_statistic"] <= doc["ks_threshold"]
    assert doc["_metadata"]["experiment"] == "nn-cdf"
    csv_text = (tmp_path / "nn_cdf.csv").read_text()
    header = csv_text.splitlines()
    assert "r,F_empirical,F_analytic,abs_gap" in header
    assert "np.float64" not in csv_text


def test_rerun_from_metadata_is_byte_identical(tmp_path):
    a = tmp_path / "a"
    rc = main(
        [
            "nn-cdf",
            "--n", "200",
            "--grid-count", "10",
            "--figures", "false",
            "--out-dir", str(a),
        ]
    )
    assert rc == EXIT_OK
    first = {name: (a / name).read_bytes() for name in ("nn_cdf.csv", "nn_cdf.json")}
    for source in ("nn_cdf.csv", "nn_cdf.json"):
        cfg = config_from_metadata(a / source)
        assert run(cfg) == EXIT_OK
        for name, payload in first.items():
            assert (a / name).read_bytes() == payload


def test_render_experiment_writes_svg_with_header(tmp_path):
    rc = main(
        [
            "render",
            "--obs-radius", "2",
            "--figures", "false",
            "--out-dir", str(tmp_path),
        ]
    )
    assert rc == EXIT_OK
    svg = (tmp_path / "realization.svg").read_text()
    assert svg.startswith("<!--")
    assert "<svg" in svg and "circle" in svg
    # the header identifies the resolved configuration
    cfg = config_from_metadata(tmp_path / "realization.svg")
    assert cfg.experiment == "render"
    assert cfg.obs_radius == 2.0


def test_gqp_experiment(tmp_path):
    rc = main(["gqp", "--n", "4", "--obs-radius", "3", "--out-dir", str(tmp_path)])
    assert rc == EXIT_OK
    doc = json.loads((tmp_path / "gqp.json").read_text())
    assert doc["cocircular_quadruples"] == 0


def test_metadata_lines_cover_every_field():
    cfg = parse_config("experiment=sample\n")
    text = metadata_lines(cfg)
    from dataclasses import fields

    for f in fields(ExperimentConfig):
        assert f"# {f.name}=" in text
